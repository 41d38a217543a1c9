#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qam/patterns.hpp"
#include "qam/rng.hpp"
#include "qam/simulator.hpp"

namespace qam {

enum class RetrievalMode { RepeatMeasure, AmplitudeAmplify };

std::string to_string(RetrievalMode mode);
/// Accepts "repeat" and "amplify".
RetrievalMode parse_mode(std::string_view text);

struct RetrievalConfig {
    std::size_t b = 1;
    std::size_t T = 1;
    RetrievalMode mode = RetrievalMode::RepeatMeasure;
    std::optional<Mask> mask;
    /// Keep the input in its own register (XOR dressing). When false the
    /// input is folded into single-qubit rotations. Amplitude amplification
    /// always uses the rotation form.
    bool use_input_register = true;
};

/// input(n or 0), memory(n), utility(2), control(b).
RegisterLayout retrieval_layout(std::size_t n, std::size_t b, bool use_input_register);

/// One control-qubit round: H, input dressing, U / CU^-2 phases, undressing,
/// H. A layout whose input section has width 0 selects the rotation form.
/// Gate count: 6q+2 with an input register, 4q+2 without, q = known qubits.
Circuit retrieval_round_circuit(const Pattern& input, const RegisterLayout& layout, std::size_t control_index,
                                const std::optional<Mask>& mask = std::nullopt);

/// M followed by all b rounds, over `layout`.
Circuit retrieval_circuit(const PatternSet& set, const Pattern& input, const RegisterLayout& layout,
                          const std::optional<Mask>& mask = std::nullopt);

/// Basis key of the initial state: input register loaded, all else zero.
BasisKey retrieval_initial_key(const RegisterLayout& layout, const Pattern& input);

struct Distribution {
    double p_rec;
    double Z;
    /// Per stored pattern, in set order.
    std::vector<std::pair<Pattern, double>> probs;
};

/// Closed-form recognition probability and output distribution. b = 0 is
/// the uniform case.
Distribution analytic_distribution(const PatternSet& set, const Pattern& input, std::size_t b,
                                   const std::optional<Mask>& mask = std::nullopt);

/// Limit b -> infinity: mass spread evenly over the nearest patterns.
Distribution limiting_distribution(const PatternSet& set, const Pattern& input,
                                   const std::optional<Mask>& mask = std::nullopt);

/// A(i)|0> built gate by gate: M followed by the b rounds.
SparseState prepared_retrieval_state(const PatternSet& set, const Pattern& input, std::size_t b,
                                     bool use_input_register = true, const std::optional<Mask>& mask = std::nullopt);

/// Post-selected output distribution read off the simulated state. Mass on
/// non-stored patterns is reported separately.
struct SimulatedDistribution {
    Distribution dist;
    double spurious_probability;
};

SimulatedDistribution simulated_distribution(const PatternSet& set, const Pattern& input, std::size_t b,
                                             bool use_input_register = true,
                                             const std::optional<Mask>& mask = std::nullopt);

struct RecognitionBound {
    double bound;
    double large_n_estimate;
};

RecognitionBound recognition_lower_bound(std::size_t p, std::size_t n, std::size_t b);

struct RetrievalReport {
    bool recognized = false;
    std::size_t attempts = 0;
    std::optional<Pattern> output;
    double analytic_p_rec = 0.0;
    Distribution analytic;
    RetrievalMode mode = RetrievalMode::RepeatMeasure;
    std::size_t b = 0;
    std::size_t T = 0;
    std::uint64_t seed = 0;
    /// Gates executed, counting the full re-preparation of every attempt.
    std::uint64_t gates_executed = 0;
};

/// Reusable retrieval procedure for one (set, input, config).
class Retriever {
public:
    Retriever(const PatternSet& set, const Pattern& input, RetrievalConfig config);

    /// Runs one retrieval. Each repeat attempt prepares the state afresh.
    RetrievalReport run(Rng& rng) const;

    const Distribution& analytic() const noexcept { return analytic_; }
    const RegisterLayout& layout() const noexcept { return layout_; }

    /// State right before the control register is measured.
    SparseState prepared_state() const;

private:
    PatternSet set_;
    Pattern input_;
    RetrievalConfig config_;
    RegisterLayout layout_;
    Circuit circuit_;
    Circuit inverse_;
    Distribution analytic_;
};

RetrievalReport retrieve(const PatternSet& set, const Pattern& input, const RetrievalConfig& config,
                         std::uint64_t seed);

/// {recognized, attempts, output, p_rec, distribution, mode, b, T, seed}.
std::string retrieval_report_json(const RetrievalReport& report);
std::string distribution_json(const Distribution& dist, std::size_t b);

struct AmplificationResult {
    double success_probability;
    /// sin^2(theta) = p_rec.
    double theta;
    /// floor(pi / (4 theta)).
    std::size_t optimal_iterations;
    SparseState state;
};

/// Applies Q = -A S0 A^-1 S `iterations` times to A|0>, A = R(i) M in the
/// rotation form. S flips the sign of all-zero control states and S0 of the
/// global zero state.
AmplificationResult amplitude_amplify(const PatternSet& set, const Pattern& input, std::size_t b,
                                      long iterations, const std::optional<Mask>& mask = std::nullopt);

/// Same iteration with both reflections replaced by phase shifts e^{i phi}.
/// phi = pi recovers amplitude_amplify.
AmplificationResult amplitude_amplify_phase(const PatternSet& set, const Pattern& input, std::size_t b,
                                            long iterations, double phi,
                                            const std::optional<Mask>& mask = std::nullopt);

struct PhaseSchedule {
    std::size_t iterations;
    double phi;
};

/// Phase-matched schedule that reaches success probability 1 exactly.
PhaseSchedule zero_failure_schedule(double p_rec);

/// Fewest Grover iterations after which the simulated success probability
/// reaches `target`, using the plain iteration or the phase-matched
/// schedule, whichever is shorter.
std::size_t iterations_to_reach(const PatternSet& set, const Pattern& input, std::size_t b, double target);

struct OracleCosts {
    std::optional<std::uint64_t> c_s;
    std::optional<std::uint64_t> c_s0;
};

/// Gate count of a complete retrieval. Oracle costs default to 2n+2b+4.
std::uint64_t complexity_estimate(std::uint64_t p, std::uint64_t n, std::uint64_t b, std::uint64_t T,
                                  RetrievalMode mode, OracleCosts costs = {});

}  // namespace qam
