#include "qam/memory.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "qam/error.hpp"

namespace qam {

namespace {

void require_section(const RegisterLayout& layout, const char* name, std::size_t width) {
    if (layout.section(name).width != width)
        throw ValidationError(std::string("section '") + name + "' has the wrong width");
}

void add_load(Circuit& c, const Pattern& p, std::size_t ctrl, const RegisterLayout::Section& mem, bool inverse) {
    const std::size_t n = p.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = inverse ? n - 1 - k : k;
        const double angle = std::numbers::pi / 2 * p[j];
        c.add(Gate::CRotY(inverse ? -angle : angle, ctrl, mem.offset + j));
    }
}

}  // namespace

RegisterLayout memory_layout(std::size_t n) {
    RegisterLayout layout;
    layout.add("memory", n).add("utility", 2);
    return layout;
}

std::size_t memory_gate_count(std::size_t p, std::size_t n) { return p * (2 * n + 3) + 1; }

Circuit memory_operator_circuit(const PatternSet& set, const RegisterLayout& layout, bool alternate_signs) {
    const std::size_t n = set.width();
    const std::size_t p = set.size();
    require_section(layout, "memory", n);
    require_section(layout, "utility", 2);
    const auto& mem = layout.section("memory");
    const std::size_t u1 = layout.qubit("utility", 0);
    const std::size_t u2 = layout.qubit("utility", 1);

    std::vector<std::size_t> mem_qubits(n);
    for (std::size_t j = 0; j < n; ++j) mem_qubits[j] = mem.offset + j;

    Circuit c(layout);
    c.add(Gate::Not(u2));
    for (std::size_t i = 1; i <= p; ++i) {
        const Pattern& pat = set[i - 1];
        const int split = static_cast<int>(p + 1 - i);
        add_load(c, pat, u2, mem, false);
        c.add(Gate::Xor(u2, u1));
        c.add(alternate_signs && i % 2 == 0 ? Gate::CSInv(split, u1, u2) : Gate::CS(split, u1, u2));
        // Only the two branches whose memory holds p^i carry u1 = 1 here;
        // stored terms hold other patterns and are left alone.
        c.add(Gate::NXorMatch(mem_qubits, pat.bits(), u1));
        add_load(c, pat, u2, mem, true);
    }
    return c;
}

MemoryBuild build_memory_operator(const PatternSet& set) {
    const auto layout = memory_layout(set.width());
    Circuit circuit = memory_operator_circuit(set, layout);
    SparseState state = basis_state(layout, BasisKey{0});
    const std::size_t count = apply_circuit(state, circuit);
    return {set, std::move(circuit), count, std::move(state)};
}

SparseState build_dual_state(const PatternSet& set) {
    const auto layout = memory_layout(set.width());
    SparseState state = basis_state(layout, BasisKey{0});
    apply_circuit(state, memory_operator_circuit(set, layout, true));
    return state;
}

SequentialStorage store_sequential(const PatternSet& set) {
    const std::size_t n = set.width();
    const std::size_t p = set.size();
    RegisterLayout layout;
    layout.add("pattern", n).add("utility", 2).add("memory", n);
    const auto& preg = layout.section("pattern");
    const auto& mreg = layout.section("memory");
    const std::size_t u1 = layout.qubit("utility", 0);
    const std::size_t u2 = layout.qubit("utility", 1);

    BasisKey init = with_section(0, preg, set[0]);
    init |= BasisKey{1} << u2;
    SparseState state = basis_state(layout, init);

    std::vector<std::size_t> mem_qubits(n);
    for (std::size_t j = 0; j < n; ++j) mem_qubits[j] = mreg.offset + j;

    std::vector<SparseState> snapshots;
    std::size_t gates = 0;
    auto run = [&](const Gate& g) {
        apply(state, g);
        ++gates;
    };

    for (std::size_t i = 1; i <= p; ++i) {
        if (i > 1) {
            // Classical reload of the pattern register.
            for (std::size_t j = 0; j < n; ++j)
                if (set[i - 1][j] != set[i - 2][j]) run(Gate::Not(preg.offset + j));
        }
        for (std::size_t j = 0; j < n; ++j) run(Gate::Toffoli(preg.offset + j, u2, mreg.offset + j));
        for (std::size_t j = 0; j < n; ++j) {
            run(Gate::Xor(preg.offset + j, mreg.offset + j));
            run(Gate::Not(mreg.offset + j));
        }
        run(Gate::NXor(mem_qubits, u1));
        run(Gate::CS(static_cast<int>(p + 1 - i), u1, u2));
        run(Gate::NXor(mem_qubits, u1));
        for (std::size_t k = n; k-- > 0;) {
            run(Gate::Not(mreg.offset + k));
            run(Gate::Xor(preg.offset + k, mreg.offset + k));
        }
        snapshots.push_back(state);
        for (std::size_t k = n; k-- > 0;) run(Gate::Toffoli(preg.offset + k, u2, mreg.offset + k));
    }
    return {std::move(state), std::move(snapshots), gates};
}

std::vector<std::pair<Pattern, Amplitude>> memory_amplitudes(const SparseState& state) {
    const auto& mem = state.layout().section("memory");
    std::vector<std::pair<Pattern, Amplitude>> out;
    out.reserve(state.size());
    for (const auto& [key, amp] : state.terms()) out.emplace_back(section_pattern(key, mem), amp);
    return out;
}

std::string memory_build_json(const MemoryBuild& build, bool include_amplitudes) {
    nlohmann::ordered_json j;
    j["n"] = build.set.width();
    j["p"] = build.set.size();
    j["gate_count"] = build.gate_count;
    if (include_amplitudes) {
        auto amps = nlohmann::ordered_json::array();
        for (const auto& [pat, amp] : memory_amplitudes(build.final_state))
            amps.push_back({{"pattern", pat.str()}, {"re", amp.real()}, {"im", amp.imag()}});
        j["amplitudes"] = std::move(amps);
    }
    return j.dump(2) + "\n";
}

}  // namespace qam
