#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qam {

struct MfParams {
    double alpha = 0.0;
    double Jt = 1.0;
    double g_over_J = 0.0;
    double M_ext = 0.0;
};

struct OrderParameters {
    double m = 0.0;
    double r = 0.0;
};

struct SingleRoot {
    double m;
    bool stable;
};

/// All roots of m = sin(2 Jt (m + g M)) on [-1, 1], ascending, with the
/// local stability test |d RHS / dm| < 1.
std::vector<SingleRoot> single_pattern_roots(double Jt, double g_over_J = 0.0, double M_ext = 0.0);

/// Stable roots only.
std::vector<double> solve_single(double Jt, double g_over_J = 0.0, double M_ext = 0.0);

/// Roots y > 0 of y = -sin(2 Jt y): the transverse (m^y) branch at g = 0.
/// Mirror images -y are also solutions.
std::vector<SingleRoot> transverse_branch_roots(double Jt);

/// Smallest Jt in [lo, hi] at which a stable m > 0 root exists, located by
/// bisection to `tol`.
double single_pattern_bifurcation(double lo = 0.05, double hi = 0.75, double tol = 1e-9);

/// Right-hand sides of the coupled (m, r) equations. `denominator` is the
/// unsquared factor 1 - 2 Jt cos(.) exp(.).
struct MfRhs {
    double m;
    double r;
    double denominator;
};

MfRhs mf_rhs(const MfParams& params, const OrderParameters& x);

struct IterateOptions {
    double eta = 0.5;
    double tol = 1e-10;
    std::size_t max_iter = 10'000;
    /// Damping never drops below this when it is halved on oscillation.
    double eta_min = 1.0 / 256;
};

struct FixedPointResult {
    OrderParameters x;
    bool converged = false;
    bool singular = false;
    std::size_t iterations = 0;
    double final_eta = 0.0;
};

/// Damped iteration x <- (1 - eta) x + eta RHS(x). Eta is halved when
/// successive steps flip sign without shrinking.
FixedPointResult iterate_finite(const MfParams& params, OrderParameters init, const IterateOptions& options = {});

enum class Phase { P, F, SG, FSG, Unclassified };

std::string to_string(Phase phase);

inline constexpr std::array<OrderParameters, 4> kBasinProbes{{{1.0, 0.01}, {0.5, 0.1}, {1e-6, 0.1}, {1e-6, 0.0}}};

struct ProbeResult {
    OrderParameters init;
    FixedPointResult result;
};

struct PhaseCell {
    MfParams params;
    std::vector<ProbeResult> probes;
    Phase phase = Phase::Unclassified;
};

/// Runs the four basin probes and labels the cell. Probes that start at
/// m = 0 are seeded with m = 1e-6 since m = 0 is itself a fixed point.
PhaseCell classify_phase(const MfParams& params, const IterateOptions& options = {});

bool retrieves(const FixedPointResult& r);

struct PhaseDiagram {
    std::vector<double> alpha_grid;
    std::vector<double> Jt_grid;
    /// Row-major: alpha outer, Jt inner.
    std::vector<PhaseCell> cells;
    /// Largest alpha with an F or F+SG cell (nullopt if none).
    std::optional<double> max_retrieval_alpha;
    /// Per Jt column: largest alpha whose (1, .) probe retrieves, refined by
    /// bisection toward the next grid alpha.
    std::vector<std::optional<double>> boundary;

    const PhaseCell& at(std::size_t ia, std::size_t ij) const { return cells[ia * Jt_grid.size() + ij]; }
};

PhaseDiagram scan_phase_diagram(const std::vector<double>& alpha_grid, const std::vector<double>& Jt_grid,
                                unsigned threads = 1, const IterateOptions& options = {});

/// Largest alpha in [lo, hi] at which the (1, 0.01) probe retrieves at this
/// Jt, assuming retrieval at lo and none at hi.
double retrieval_boundary(double Jt, double lo, double hi, double tol = 1e-6, const IterateOptions& options = {});

/// alpha, Jt, m_retrieval, r_retrieval, m_from_zero, r_from_zero, phase.
std::string phase_csv(const PhaseDiagram& diagram);

/// k * step for k = 1..count.
std::vector<double> linear_grid(double step, std::size_t count);

}  // namespace qam
