#include "qam/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "qam/error.hpp"

namespace qam {

namespace {

using Term = SparseState::Term;

bool key_less(const Term& a, const Term& b) { return a.first < b.first; }

/// Sorts by key, sums duplicates in generation order and drops tiny terms.
void normalize_terms(std::vector<Term>& terms) {
    std::stable_sort(terms.begin(), terms.end(), key_less);
    std::size_t w = 0;
    for (std::size_t r = 0; r < terms.size();) {
        Term acc = terms[r++];
        while (r < terms.size() && terms[r].first == acc.first) acc.second += terms[r++].second;
        if (std::abs(acc.second) >= kPruneThreshold) terms[w++] = acc;
    }
    terms.resize(w);
}

BasisKey section_mask(const RegisterLayout::Section& sec) {
    if (sec.width == 0) return 0;
    const BasisKey ones = sec.width >= 64 ? ~BasisKey{0} : ((BasisKey{1} << sec.width) - 1);
    return ones << sec.offset;
}

void check_qubit(std::size_t q, std::size_t total) {
    if (q >= total) throw ValidationError("qubit index " + std::to_string(q) + " out of range");
}

void check_gate(const Gate& g, std::size_t total) {
    check_qubit(g.target, total);
    if (g.control_values.size() != g.controls.size()) throw ValidationError("gate control values do not match controls");
    for (std::size_t i = 0; i < g.controls.size(); ++i) {
        check_qubit(g.controls[i], total);
        if (g.controls[i] == g.target) throw ValidationError("gate control equals its target");
        for (std::size_t j = 0; j < i; ++j)
            if (g.controls[j] == g.controls[i]) throw ValidationError("gate has repeated controls");
    }
    if ((g.kind == GateKind::CS || g.kind == GateKind::CSInv) && g.index < 1)
        throw ValidationError("CS gate requires index >= 1");
}

Gate make(GateKind kind, std::size_t t, std::vector<std::size_t> controls) {
    Gate g{kind, t, std::move(controls), {}, 0, 0.0};
    g.control_values.assign(g.controls.size(), 1);
    return g;
}

std::string format_number(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

RegisterLayout& RegisterLayout::add(std::string name, std::size_t width) {
    if (has(name)) throw ValidationError("duplicate register section '" + name + "'");
    if (total_ + width > kMaxQubits) throw ValidationError("layout exceeds 64 qubits");
    sections_.push_back({std::move(name), total_, width});
    total_ += width;
    return *this;
}

const RegisterLayout::Section& RegisterLayout::section(std::string_view name) const {
    for (const auto& s : sections_)
        if (s.name == name) return s;
    throw ValidationError("no register section '" + std::string(name) + "'");
}

bool RegisterLayout::has(std::string_view name) const {
    return std::any_of(sections_.begin(), sections_.end(), [&](const Section& s) { return s.name == name; });
}

std::size_t RegisterLayout::qubit(std::string_view name, std::size_t local) const {
    const auto& s = section(name);
    if (local >= s.width) throw ValidationError("local index out of range in section '" + s.name + "'");
    return s.offset + local;
}

Pattern section_pattern(BasisKey key, const RegisterLayout::Section& sec) {
    std::vector<std::uint8_t> bits(sec.width);
    for (std::size_t j = 0; j < sec.width; ++j) bits[j] = static_cast<std::uint8_t>((key >> (sec.offset + j)) & 1U);
    return Pattern(std::move(bits));
}

BasisKey with_section(BasisKey key, const RegisterLayout::Section& sec, const Pattern& value) {
    if (value.size() != sec.width) throw ValidationError("value width does not match section '" + sec.name + "'");
    key &= ~section_mask(sec);
    for (std::size_t j = 0; j < sec.width; ++j) key |= BasisKey{value[j]} << (sec.offset + j);
    return key;
}

SparseState SparseState::from_terms(RegisterLayout layout, std::vector<Term> terms) {
    const BasisKey limit_mask = layout.total() >= 64 ? 0 : ~((BasisKey{1} << layout.total()) - 1);
    for (const auto& t : terms)
        if (t.first & limit_mask) throw ValidationError("basis key wider than layout");
    normalize_terms(terms);
    SparseState s(std::move(layout), std::move(terms));
    if (std::abs(s.norm() - 1.0) > 1e-10) throw ValidationError("state is not normalized");
    return s;
}

Amplitude SparseState::amplitude(BasisKey key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{key, {}}, key_less);
    return (it != terms_.end() && it->first == key) ? it->second : Amplitude{};
}

double SparseState::norm() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::norm(t.second);
    return std::sqrt(s);
}

Gate Gate::Not(std::size_t t) { return make(GateKind::Not, t, {}); }
Gate Gate::H(std::size_t t) { return make(GateKind::H, t, {}); }
Gate Gate::Xor(std::size_t c, std::size_t t) { return make(GateKind::Xor, t, {c}); }
Gate Gate::Toffoli(std::size_t c1, std::size_t c2, std::size_t t) { return make(GateKind::Toffoli, t, {c1, c2}); }
Gate Gate::NXor(std::vector<std::size_t> controls, std::size_t t) {
    if (controls.empty()) throw ValidationError("nXOR needs at least one control");
    return make(GateKind::NXor, t, std::move(controls));
}
Gate Gate::NXorMatch(std::vector<std::size_t> controls, std::vector<std::uint8_t> values, std::size_t t) {
    if (values.size() != controls.size()) throw ValidationError("nXOR control values do not match controls");
    for (auto v : values)
        if (v > 1) throw ValidationError("nXOR control values must be 0 or 1");
    Gate g = NXor(std::move(controls), t);
    g.control_values = std::move(values);
    return g;
}
Gate Gate::CS(int i, std::size_t c, std::size_t t) {
    if (i < 1) throw ValidationError("CS gate requires index >= 1");
    Gate g = make(GateKind::CS, t, {c});
    g.index = i;
    return g;
}
Gate Gate::CSInv(int i, std::size_t c, std::size_t t) {
    Gate g = CS(i, c, t);
    g.kind = GateKind::CSInv;
    return g;
}
Gate Gate::U(double theta, std::size_t t) {
    Gate g = make(GateKind::U, t, {});
    g.angle = theta;
    return g;
}
Gate Gate::CUInv2(double theta, std::size_t c, std::size_t t) {
    Gate g = make(GateKind::CUInv2, t, {c});
    g.angle = theta;
    return g;
}
Gate Gate::RotY(double a, std::size_t t) {
    Gate g = make(GateKind::RotY, t, {});
    g.angle = a;
    return g;
}
Gate Gate::CRotY(double a, std::size_t c, std::size_t t) {
    Gate g = make(GateKind::CRotY, t, {c});
    g.angle = a;
    return g;
}

Gate Gate::inverse() const {
    Gate g = *this;
    switch (kind) {
        case GateKind::CS: g.kind = GateKind::CSInv; break;
        case GateKind::CSInv: g.kind = GateKind::CS; break;
        case GateKind::U:
        case GateKind::CUInv2:
        case GateKind::RotY:
        case GateKind::CRotY: g.angle = -angle; break;
        default: break;
    }
    return g;
}

std::array<Amplitude, 4> Gate::matrix() const {
    switch (kind) {
        case GateKind::Not:
        case GateKind::Xor:
        case GateKind::Toffoli:
        case GateKind::NXor: return {0.0, 1.0, 1.0, 0.0};
        case GateKind::H: {
            const double r = std::numbers::sqrt2 / 2;
            return {r, r, r, -r};
        }
        case GateKind::CS:
        case GateKind::CSInv: {
            const double i = index;
            const double c = std::sqrt((i - 1) / i);
            const double s = 1 / std::sqrt(i);
            if (kind == GateKind::CS) return {c, s, -s, c};
            return {c, -s, s, c};
        }
        case GateKind::U: return {std::polar(1.0, angle), 0.0, 0.0, 1.0};
        case GateKind::CUInv2: return {std::polar(1.0, -2 * angle), 0.0, 0.0, 1.0};
        case GateKind::RotY:
        case GateKind::CRotY: {
            const double c = std::cos(angle), s = std::sin(angle);
            return {c, -s, s, c};
        }
    }
    throw ValidationError("unknown gate kind");
}

bool Gate::is_permutation() const noexcept {
    return kind == GateKind::Not || kind == GateKind::Xor || kind == GateKind::Toffoli || kind == GateKind::NXor;
}

bool Gate::is_diagonal() const noexcept { return kind == GateKind::U || kind == GateKind::CUInv2; }

std::string Gate::name() const {
    switch (kind) {
        case GateKind::Not: return "NOT";
        case GateKind::H: return "H";
        case GateKind::Xor: return "XOR";
        case GateKind::Toffoli: return "TOFFOLI";
        case GateKind::NXor: return "NXOR";
        case GateKind::CS: return "CS(" + std::to_string(index) + ")";
        case GateKind::CSInv: return "CS_INV(" + std::to_string(index) + ")";
        case GateKind::U: return "U(" + format_number(angle) + ")";
        case GateKind::CUInv2: return "CU_INV2(" + format_number(angle) + ")";
        case GateKind::RotY: return "ROT_Y(" + format_number(angle) + ")";
        case GateKind::CRotY: return "CROT_Y(" + format_number(angle) + ")";
    }
    return "?";
}

std::string Gate::str() const {
    std::string out = name();
    for (std::size_t i = 0; i < controls.size(); ++i) {
        out += i == 0 ? " " : ",";
        if (!control_values[i]) out += '!';
        out += std::to_string(controls[i]);
    }
    out += " -> " + std::to_string(target);
    return out;
}

Circuit& Circuit::add(Gate g) {
    check_gate(g, layout_.total());
    gates_.push_back(std::move(g));
    return *this;
}

Circuit& Circuit::append(const Circuit& other) {
    if (!(other.layout_ == layout_)) throw ValidationError("cannot append circuits over different layouts");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit inv(layout_);
    inv.gates_.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) inv.gates_.push_back(it->inverse());
    return inv;
}

std::string Circuit::dump() const {
    std::string out;
    for (const auto& g : gates_) out += g.str() + '\n';
    return out;
}

SparseState basis_state(const RegisterLayout& layout, BasisKey key) {
    if (layout.total() < 64 && (key >> layout.total()) != 0) throw ValidationError("basis key wider than layout");
    return StateAccess::make(layout, {{key, Amplitude{1.0, 0.0}}});
}

SparseState basis_state(const RegisterLayout& layout, std::string_view bits) {
    if (bits.size() != layout.total())
        throw ValidationError("basis_state: expected " + std::to_string(layout.total()) + " bits, got " +
                              std::to_string(bits.size()));
    BasisKey key = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] != '0' && bits[q] != '1') throw ValidationError("basis_state: bits must be 0 or 1");
        if (bits[q] == '1') key |= BasisKey{1} << q;
    }
    return basis_state(layout, key);
}

void apply(SparseState& state, const Gate& gate) {
    check_gate(gate, state.layout().total());
    BasisKey cmask = 0, cval = 0;
    for (std::size_t i = 0; i < gate.controls.size(); ++i) {
        cmask |= BasisKey{1} << gate.controls[i];
        cval |= BasisKey{gate.control_values[i]} << gate.controls[i];
    }
    const BasisKey tbit = BasisKey{1} << gate.target;
    auto& terms = StateAccess::terms(state);

    if (gate.is_permutation()) {
        for (auto& t : terms)
            if ((t.first & cmask) == cval) t.first ^= tbit;
        std::sort(terms.begin(), terms.end(), key_less);
        return;
    }
    const auto m = gate.matrix();
    if (gate.is_diagonal()) {
        for (auto& t : terms)
            if ((t.first & cmask) == cval) t.second *= (t.first & tbit) ? m[3] : m[0];
        return;
    }
    std::vector<Term> out;
    out.reserve(terms.size() * 2);
    for (const auto& [key, amp] : terms) {
        if ((key & cmask) != cval) {
            out.emplace_back(key, amp);
            continue;
        }
        const bool one = key & tbit;
        const BasisKey k0 = key & ~tbit;
        out.emplace_back(k0, m[one ? 1 : 0] * amp);
        out.emplace_back(k0 | tbit, m[one ? 3 : 2] * amp);
    }
    normalize_terms(out);
    terms = std::move(out);
}

std::size_t apply_circuit(SparseState& state, const Circuit& circuit) {
    if (!(state.layout() == circuit.layout())) throw ValidationError("circuit and state use different layouts");
    for (const auto& g : circuit.gates()) apply(state, g);
    return circuit.size();
}

std::vector<std::pair<Pattern, double>> marginal(const SparseState& state, std::string_view section) {
    const auto& sec = state.layout().section(section);
    if (sec.width == 0) throw ValidationError("cannot take the marginal of an empty section");
    const BasisKey mask = section_mask(sec);
    std::map<BasisKey, double> probs;
    for (const auto& [key, amp] : state.terms()) probs[key & mask] += std::norm(amp);
    std::vector<std::pair<Pattern, double>> out;
    out.reserve(probs.size());
    for (const auto& [k, p] : probs) out.emplace_back(section_pattern(k, sec), p);
    return out;
}

Postselection postselect(const SparseState& state, std::string_view section, const Pattern& bits) {
    const auto& sec = state.layout().section(section);
    if (bits.size() != sec.width) throw ValidationError("postselect: width mismatch for section '" + sec.name + "'");
    const BasisKey mask = section_mask(sec);
    const BasisKey want = with_section(0, sec, bits);
    std::vector<Term> kept;
    double prob = 0.0;
    for (const auto& t : state.terms())
        if ((t.first & mask) == want) {
            kept.push_back(t);
            prob += std::norm(t.second);
        }
    if (prob < 1e-15) return {prob, std::nullopt};
    const double scale = 1.0 / std::sqrt(prob);
    for (auto& t : kept) t.second *= scale;
    return {prob, StateAccess::make(state.layout(), std::move(kept))};
}

Measurement measure_section(const SparseState& state, std::string_view section, Rng& rng) {
    const auto dist = marginal(state, section);
    double total = 0.0;
    for (const auto& d : dist) total += d.second;
    const double u = uniform01(rng) * total;
    std::size_t pick = dist.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        acc += dist[i].second;
        if (u < acc) {
            pick = i;
            break;
        }
    }
    auto post = postselect(state, section, dist[pick].first);
    if (!post.state) throw NumericError("measurement selected an outcome of zero probability");
    return {dist[pick].first, post.probability, std::move(*post.state)};
}

SparseState extract_section(const SparseState& state, std::string_view section) {
    const auto& sec = state.layout().section(section);
    const BasisKey mask = section_mask(sec);
    RegisterLayout sub;
    sub.add(sec.name, sec.width);
    std::vector<Term> terms;
    terms.reserve(state.size());
    std::optional<BasisKey> rest;
    for (const auto& [key, amp] : state.terms()) {
        if (!rest) rest = key & ~mask;
        if ((key & ~mask) != *rest)
            throw ValidationError("section '" + sec.name + "' is entangled with the rest of the register");
        terms.emplace_back((key & mask) >> sec.offset, amp);
    }
    return StateAccess::make(std::move(sub), std::move(terms));
}

Amplitude overlap(const SparseState& a, const SparseState& b) {
    if (!(a.layout() == b.layout())) throw ValidationError("overlap: states use different layouts");
    Amplitude sum{};
    auto ia = a.terms().begin(), ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            sum += std::conj(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

}  // namespace qam
