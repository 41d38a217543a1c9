#include "qam/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "qam/error.hpp"
#include "qam/memory.hpp"

namespace qam {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::size_t> known_qubits(std::size_t n, const std::optional<Mask>& mask) {
    if (!mask) return Mask::full(n).indices();
    if (mask->width() != n) throw ValidationError("mask width does not match pattern length");
    return mask->indices();
}

std::size_t distance(const Pattern& a, const Pattern& b, const std::optional<Mask>& mask) {
    return mask ? hamming_masked(a, b, *mask) : hamming(a, b);
}

void check_input(const PatternSet& set, const Pattern& input) {
    if (input.size() != set.width())
        throw ValidationError("input has " + std::to_string(input.size()) + " bits, patterns have " +
                              std::to_string(set.width()));
}

double good_probability(const SparseState& s) {
    const auto& ctrl = s.layout().section("control");
    const BasisKey mask = ctrl.width == 0 ? 0 : (((BasisKey{1} << ctrl.width) - 1) << ctrl.offset);
    double prob = 0.0;
    for (const auto& [key, amp] : s.terms())
        if ((key & mask) == 0) prob += std::norm(amp);
    return prob;
}

}  // namespace

std::string to_string(RetrievalMode mode) {
    return mode == RetrievalMode::RepeatMeasure ? "repeat" : "amplify";
}

RetrievalMode parse_mode(std::string_view text) {
    if (text == "repeat") return RetrievalMode::RepeatMeasure;
    if (text == "amplify") return RetrievalMode::AmplitudeAmplify;
    throw ValidationError("mode must be 'repeat' or 'amplify', got '" + std::string(text) + "'");
}

RegisterLayout retrieval_layout(std::size_t n, std::size_t b, bool use_input_register) {
    RegisterLayout layout;
    layout.add("input", use_input_register ? n : 0).add("memory", n).add("utility", 2).add("control", b);
    return layout;
}

Circuit retrieval_round_circuit(const Pattern& input, const RegisterLayout& layout, std::size_t control_index,
                                const std::optional<Mask>& mask) {
    const auto& mem = layout.section("memory");
    const auto& in = layout.section("input");
    const std::size_t n = mem.width;
    if (input.size() != n) throw ValidationError("input width does not match the memory register");
    if (in.width != 0 && in.width != n) throw ValidationError("input register must have width 0 or n");
    const std::size_t c = layout.qubit("control", control_index);
    const auto known = known_qubits(n, mask);
    const bool reg = in.width == n;
    const double phase = kPi / (2.0 * static_cast<double>(n));

    // After dressing, memory qubit j reads 1 exactly where the pattern agrees
    // with the input, so U marks each disagreement with e^{i pi / 2n}.
    auto rotation = [&](std::size_t j) { return -kPi / 2 * (1 - input[j]); };

    Circuit circ(layout);
    circ.add(Gate::H(c));
    for (auto j : known) {
        if (reg) {
            circ.add(Gate::Xor(in.offset + j, mem.offset + j));
            circ.add(Gate::Not(mem.offset + j));
        } else {
            circ.add(Gate::RotY(rotation(j), mem.offset + j));
        }
    }
    for (auto j : known) circ.add(Gate::U(phase, mem.offset + j));
    for (auto j : known) circ.add(Gate::CUInv2(phase, c, mem.offset + j));
    for (auto it = known.rbegin(); it != known.rend(); ++it) {
        const auto j = *it;
        if (reg) {
            circ.add(Gate::Not(mem.offset + j));
            circ.add(Gate::Xor(in.offset + j, mem.offset + j));
        } else {
            circ.add(Gate::RotY(-rotation(j), mem.offset + j));
        }
    }
    circ.add(Gate::H(c));
    return circ;
}

Circuit retrieval_circuit(const PatternSet& set, const Pattern& input, const RegisterLayout& layout,
                          const std::optional<Mask>& mask) {
    check_input(set, input);
    Circuit circ = memory_operator_circuit(set, layout);
    const std::size_t b = layout.section("control").width;
    for (std::size_t k = 0; k < b; ++k) circ.append(retrieval_round_circuit(input, layout, k, mask));
    return circ;
}

BasisKey retrieval_initial_key(const RegisterLayout& layout, const Pattern& input) {
    const auto& in = layout.section("input");
    return in.width == 0 ? BasisKey{0} : with_section(0, in, input);
}

Distribution analytic_distribution(const PatternSet& set, const Pattern& input, std::size_t b,
                                   const std::optional<Mask>& mask) {
    check_input(set, input);
    const std::size_t n = set.width();
    Distribution dist{0.0, 0.0, {}};
    std::vector<double> w;
    w.reserve(set.size());
    for (const auto& pat : set) {
        const std::size_t d = distance(pat, input, mask);
        double wk;
        if (b == 0)
            wk = 1.0;
        else if (d == n)
            wk = 0.0;
        else
            wk = std::pow(std::cos(kPi * static_cast<double>(d) / (2.0 * static_cast<double>(n))), 2.0 * double(b));
        w.push_back(wk);
        dist.Z += wk;
    }
    dist.p_rec = dist.Z / static_cast<double>(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) dist.probs.emplace_back(set[k], dist.Z > 0 ? w[k] / dist.Z : 0.0);
    return dist;
}

Distribution limiting_distribution(const PatternSet& set, const Pattern& input, const std::optional<Mask>& mask) {
    check_input(set, input);
    std::vector<std::size_t> d;
    for (const auto& pat : set) d.push_back(distance(pat, input, mask));
    const std::size_t dmin = *std::min_element(d.begin(), d.end());
    const auto ties = static_cast<double>(std::count(d.begin(), d.end(), dmin));
    Distribution dist{0.0, 0.0, {}};
    dist.p_rec = dmin == 0 ? ties / static_cast<double>(set.size()) : 0.0;
    dist.Z = dist.p_rec * static_cast<double>(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) dist.probs.emplace_back(set[k], d[k] == dmin ? 1.0 / ties : 0.0);
    return dist;
}

SparseState prepared_retrieval_state(const PatternSet& set, const Pattern& input, std::size_t b,
                                     bool use_input_register, const std::optional<Mask>& mask) {
    const auto layout = retrieval_layout(set.width(), b, use_input_register);
    SparseState s = basis_state(layout, retrieval_initial_key(layout, input));
    apply_circuit(s, retrieval_circuit(set, input, layout, mask));
    return s;
}

SimulatedDistribution simulated_distribution(const PatternSet& set, const Pattern& input, std::size_t b,
                                             bool use_input_register, const std::optional<Mask>& mask) {
    const SparseState s = prepared_retrieval_state(set, input, b, use_input_register, mask);
    SimulatedDistribution out{{0.0, 0.0, {}}, 0.0};
    // With no control qubits there is nothing to post-select on.
    const Postselection post = b == 0 ? Postselection{1.0, s} : postselect(s, "control", Pattern::zeros(b));
    out.dist.p_rec = post.probability;
    out.dist.Z = post.probability * static_cast<double>(set.size());
    std::vector<double> probs(set.size(), 0.0);
    if (post.state) {
        for (const auto& [pat, prob] : marginal(*post.state, "memory")) {
            const auto it = std::find(set.begin(), set.end(), pat);
            if (it == set.end())
                out.spurious_probability += prob;
            else
                probs[static_cast<std::size_t>(it - set.begin())] += prob;
        }
    }
    for (std::size_t k = 0; k < set.size(); ++k) out.dist.probs.emplace_back(set[k], probs[k]);
    return out;
}

RecognitionBound recognition_lower_bound(std::size_t p, std::size_t n, std::size_t b) {
    if (p < 1 || n < 2) throw ValidationError("recognition bound needs p >= 1 and n >= 2");
    const double pf = static_cast<double>(p), nf = static_cast<double>(n), bf = static_cast<double>(b);
    const double lead = (pf - 1) / pf;
    return {lead * std::pow(std::cos(kPi * (nf - 1) / (2 * nf)), 2 * bf), lead * std::pow(kPi / (2 * nf), 2 * bf)};
}

Retriever::Retriever(const PatternSet& set, const Pattern& input, RetrievalConfig config)
    : set_(set),
      input_(input),
      config_(std::move(config)),
      layout_(retrieval_layout(set.width(), config_.b,
                               config_.mode == RetrievalMode::RepeatMeasure && config_.use_input_register)),
      circuit_(layout_),
      inverse_(layout_),
      analytic_(analytic_distribution(set, input, config_.b, config_.mask)) {
    if (config_.b < 1) throw ValidationError("retrieval needs b >= 1");
    if (config_.T < 1) throw ValidationError("retrieval needs T >= 1");
    circuit_ = retrieval_circuit(set_, input_, layout_, config_.mask);
    if (config_.mode == RetrievalMode::AmplitudeAmplify) inverse_ = circuit_.inverse();
}

SparseState Retriever::prepared_state() const {
    SparseState s = basis_state(layout_, retrieval_initial_key(layout_, input_));
    apply_circuit(s, circuit_);
    if (config_.mode == RetrievalMode::AmplitudeAmplify) {
        const auto& ctrl = layout_.section("control");
        const BasisKey cmask = ((BasisKey{1} << ctrl.width) - 1) << ctrl.offset;
        for (std::size_t j = 0; j < config_.T; ++j) {
            apply_phase_if(s, -1.0, [&](BasisKey k) { return (k & cmask) == 0; });
            apply_circuit(s, inverse_);
            apply_phase_if(s, -1.0, [](BasisKey k) { return k == 0; });
            apply_circuit(s, circuit_);
            apply_phase_if(s, -1.0, [](BasisKey) { return true; });
        }
    }
    return s;
}

RetrievalReport Retriever::run(Rng& rng) const {
    RetrievalReport rep;
    rep.analytic = analytic_;
    rep.analytic_p_rec = analytic_.p_rec;
    rep.mode = config_.mode;
    rep.b = config_.b;
    rep.T = config_.T;
    const Pattern zeros = Pattern::zeros(config_.b);
    const std::size_t max_attempts = config_.mode == RetrievalMode::RepeatMeasure ? config_.T : 1;
    const std::uint64_t per_attempt =
        config_.mode == RetrievalMode::RepeatMeasure
            ? circuit_.size()
            : circuit_.size() + config_.T * 2 * circuit_.size();
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        const SparseState s = prepared_state();
        rep.attempts = attempt;
        rep.gates_executed += per_attempt;
        auto ctrl = measure_section(s, "control", rng);
        if (ctrl.outcome == zeros) {
            auto mem = measure_section(ctrl.state, "memory", rng);
            rep.recognized = true;
            rep.output = mem.outcome;
            break;
        }
    }
    return rep;
}

RetrievalReport retrieve(const PatternSet& set, const Pattern& input, const RetrievalConfig& config,
                         std::uint64_t seed) {
    Rng rng(seed);
    RetrievalReport rep = Retriever(set, input, config).run(rng);
    rep.seed = seed;
    return rep;
}

std::string distribution_json(const Distribution& dist, std::size_t b) {
    nlohmann::ordered_json j;
    j["b"] = b;
    j["p_rec"] = dist.p_rec;
    j["Z"] = dist.Z;
    auto probs = nlohmann::ordered_json::array();
    for (const auto& [pat, prob] : dist.probs) probs.push_back({{"pattern", pat.str()}, {"prob", prob}});
    j["distribution"] = std::move(probs);
    return j.dump(2) + "\n";
}

std::string retrieval_report_json(const RetrievalReport& rep) {
    nlohmann::ordered_json j;
    j["recognized"] = rep.recognized;
    j["attempts"] = rep.attempts;
    j["output"] = rep.output ? nlohmann::ordered_json(rep.output->str()) : nlohmann::ordered_json(nullptr);
    j["p_rec"] = rep.analytic_p_rec;
    auto probs = nlohmann::ordered_json::array();
    for (const auto& [pat, prob] : rep.analytic.probs) probs.push_back({{"pattern", pat.str()}, {"prob", prob}});
    j["distribution"] = std::move(probs);
    j["mode"] = to_string(rep.mode);
    j["b"] = rep.b;
    j["T"] = rep.T;
    j["seed"] = rep.seed;
    return j.dump(2) + "\n";
}

AmplificationResult amplitude_amplify_phase(const PatternSet& set, const Pattern& input, std::size_t b,
                                            long iterations, double phi, const std::optional<Mask>& mask) {
    if (iterations < 0) throw ValidationError("iterations must be non-negative");
    if (b < 1) throw ValidationError("amplitude amplification needs b >= 1");
    const auto layout = retrieval_layout(set.width(), b, false);
    const Circuit a = retrieval_circuit(set, input, layout, mask);
    const Circuit a_inv = a.inverse();
    const auto& ctrl = layout.section("control");
    const BasisKey cmask = ((BasisKey{1} << ctrl.width) - 1) << ctrl.offset;
    const Amplitude shift = std::polar(1.0, phi);

    SparseState s = basis_state(layout, BasisKey{0});
    apply_circuit(s, a);
    for (long j = 0; j < iterations; ++j) {
        apply_phase_if(s, shift, [&](BasisKey k) { return (k & cmask) == 0; });
        apply_circuit(s, a_inv);
        apply_phase_if(s, shift, [](BasisKey k) { return k == 0; });
        apply_circuit(s, a);
        apply_phase_if(s, -1.0, [](BasisKey) { return true; });
    }
    const double p_rec = analytic_distribution(set, input, b, mask).p_rec;
    const double theta = std::asin(std::sqrt(std::clamp(p_rec, 0.0, 1.0)));
    const std::size_t opt = theta > 0 ? static_cast<std::size_t>(std::floor(kPi / (4 * theta))) : 0;
    return {good_probability(s), theta, opt, std::move(s)};
}

AmplificationResult amplitude_amplify(const PatternSet& set, const Pattern& input, std::size_t b, long iterations,
                                      const std::optional<Mask>& mask) {
    return amplitude_amplify_phase(set, input, b, iterations, kPi, mask);
}

PhaseSchedule zero_failure_schedule(double p_rec) {
    if (!(p_rec > 0.0) || p_rec > 1.0) throw NumericError("phase-matched schedule needs 0 < p_rec <= 1");
    const double theta = std::asin(std::sqrt(p_rec));
    const auto J = static_cast<std::size_t>(std::floor((kPi / 2 - theta) / (2 * theta)));
    const double ratio = std::sin(kPi / (4.0 * static_cast<double>(J) + 6.0)) / std::sin(theta);
    return {J + 1, 2 * std::asin(std::min(1.0, ratio))};
}

std::size_t iterations_to_reach(const PatternSet& set, const Pattern& input, std::size_t b, double target) {
    const double p_rec = analytic_distribution(set, input, b).p_rec;
    const PhaseSchedule sched = zero_failure_schedule(p_rec);
    for (std::size_t j = 0; j < sched.iterations; ++j)
        if (amplitude_amplify(set, input, b, static_cast<long>(j)).success_probability >= target) return j;
    const auto res = amplitude_amplify_phase(set, input, b, static_cast<long>(sched.iterations), sched.phi);
    if (res.success_probability < target) throw NumericError("phase-matched schedule missed the target");
    return sched.iterations;
}

std::uint64_t complexity_estimate(std::uint64_t p, std::uint64_t n, std::uint64_t b, std::uint64_t T,
                                  RetrievalMode mode, OracleCosts costs) {
    const std::uint64_t memory = p * (2 * n + 3) + 1;
    if (mode == RetrievalMode::RepeatMeasure) return T * b * (6 * n + 2) * memory;
    const std::uint64_t placeholder = 2 * n + 2 * b + 4;
    const std::uint64_t c_s = costs.c_s.value_or(placeholder);
    const std::uint64_t c_s0 = costs.c_s0.value_or(placeholder);
    return T * (p * (4 * n + 6) + b * (8 * n + 4) + 2 + c_s + c_s0) + p * (2 * n + 3) + b * (4 * n + 2) + 1;
}

}  // namespace qam
