#include "qam/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "qam/error.hpp"
#include "qam/io.hpp"
#include "qam/parallel.hpp"

namespace qam {

namespace {

constexpr std::size_t kRootGrid = 4001;
constexpr double kRetrievalThreshold = 1e-3;
constexpr double kSingularDenominator = 1e-6;

/// Roots of f on [lo, hi] from sign changes on a uniform grid, refined
/// with TOMS 748. Grid points where f vanishes exactly are roots as well.
template <class F>
std::vector<double> grid_roots(F f, double lo, double hi) {
    std::vector<double> roots;
    double x_prev = lo, f_prev = f(lo);
    if (f_prev == 0.0) roots.push_back(lo);
    for (std::size_t i = 1; i < kRootGrid; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kRootGrid - 1);
        const double fx = f(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev)) {
            std::uintmax_t iters = 200;
            const auto br = boost::math::tools::toms748_solve(f, x_prev, x, f_prev, fx,
                                                              boost::math::tools::eps_tolerance<double>(), iters);
            roots.push_back((br.first + br.second) / 2);
        }
        x_prev = x;
        f_prev = fx;
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                roots.end());
    return roots;
}

void check_params(const MfParams& p) {
    if (!(p.alpha >= 0.0)) throw ValidationError("alpha must be non-negative");
    if (!(p.Jt > 0.0)) throw ValidationError("Jt must be positive");
}

}  // namespace

std::vector<SingleRoot> single_pattern_roots(double Jt, double g_over_J, double M_ext) {
    if (!(Jt > 0.0)) throw ValidationError("Jt must be positive");
    const double h = g_over_J * M_ext;
    auto f = [&](double m) { return std::sin(2 * Jt * (m + h)) - m; };
    std::vector<SingleRoot> out;
    for (double m : grid_roots(f, -1.0, 1.0))
        out.push_back({m, std::abs(2 * Jt * std::cos(2 * Jt * (m + h))) < 1.0});
    return out;
}

std::vector<double> solve_single(double Jt, double g_over_J, double M_ext) {
    std::vector<double> out;
    for (const auto& r : single_pattern_roots(Jt, g_over_J, M_ext))
        if (r.stable) out.push_back(r.m);
    return out;
}

std::vector<SingleRoot> transverse_branch_roots(double Jt) {
    if (!(Jt > 0.0)) throw ValidationError("Jt must be positive");
    auto f = [&](double y) { return y + std::sin(2 * Jt * y); };
    std::vector<SingleRoot> out;
    for (double y : grid_roots(f, 0.0, 1.0))
        if (y > 1e-9) out.push_back({y, std::abs(2 * Jt * std::cos(2 * Jt * y)) < 1.0});
    return out;
}

double single_pattern_bifurcation(double lo, double hi, double tol) {
    auto ordered = [](double Jt) {
        for (double m : solve_single(Jt))
            if (m > 1e-12) return true;
        return false;
    };
    if (ordered(lo) || !ordered(hi)) throw NumericError("bifurcation not bracketed");
    while (hi - lo > tol) {
        const double mid = (lo + hi) / 2;
        (ordered(mid) ? hi : lo) = mid;
    }
    return (lo + hi) / 2;
}

MfRhs mf_rhs(const MfParams& p, const OrderParameters& x) {
    const double h = x.m + p.g_over_J * p.M_ext;
    const double a2 = p.Jt * p.Jt * p.alpha * x.r;
    const double e2 = std::exp(-2 * a2);
    const double den = 1 - 2 * p.Jt * std::cos(2 * p.Jt * h) * e2;
    const double num = 0.5 * (1 - std::cos(4 * p.Jt * h) * std::exp(-8 * a2));
    return {std::sin(2 * p.Jt * h) * e2, num / (den * den), den};
}

FixedPointResult iterate_finite(const MfParams& params, OrderParameters init, const IterateOptions& opt) {
    check_params(params);
    if (!(opt.eta > 0.0 && opt.eta <= 1.0)) throw ValidationError("damping must lie in (0, 1]");
    if (init.r < 0.0 || std::abs(init.m) > 1.0) throw ValidationError("initial order parameters out of range");
    FixedPointResult res;
    res.x = init;
    double eta = opt.eta;
    double prev_dm = 0.0, prev_dr = 0.0, prev_step = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < opt.max_iter; ++k) {
        const MfRhs f = mf_rhs(params, res.x);
        res.iterations = k + 1;
        if (std::abs(f.denominator) < kSingularDenominator) {
            res.singular = true;
            break;
        }
        const double dm = f.m - res.x.m;
        const double dr = f.r - res.x.r;
        const double resid = std::max(std::abs(dm), std::abs(dr));
        const double step = eta * resid;
        if ((dm * prev_dm < 0 || dr * prev_dr < 0) && step > 0.9 * prev_step && eta > opt.eta_min)
            eta = std::max(eta / 2, opt.eta_min);
        res.x.m += eta * dm;
        res.x.r += eta * dr;
        if (resid < opt.tol) {
            res.converged = true;
            break;
        }
        prev_dm = dm;
        prev_dr = dr;
        prev_step = step;
    }
    res.final_eta = eta;
    return res;
}

std::string to_string(Phase phase) {
    switch (phase) {
        case Phase::P: return "P";
        case Phase::F: return "F";
        case Phase::SG: return "SG";
        case Phase::FSG: return "F+SG";
        case Phase::Unclassified: return "U";
    }
    return "U";
}

bool retrieves(const FixedPointResult& r) { return r.converged && r.x.m > kRetrievalThreshold; }

PhaseCell classify_phase(const MfParams& params, const IterateOptions& options) {
    PhaseCell cell;
    cell.params = params;
    bool any_converged = false, any_retrieval = false, any_glass = false, all_para = true;
    for (const auto& init : kBasinProbes) {
        auto res = iterate_finite(params, init, options);
        if (res.converged) {
            any_converged = true;
            const bool small_m = std::abs(res.x.m) <= kRetrievalThreshold;
            const bool glass = small_m && res.x.r > kRetrievalThreshold;
            any_retrieval |= res.x.m > kRetrievalThreshold;
            any_glass |= glass;
            all_para &= small_m && !glass;
        }
        cell.probes.push_back({init, res});
    }
    if (!any_converged)
        cell.phase = Phase::Unclassified;
    else if (any_retrieval)
        cell.phase = any_glass ? Phase::FSG : Phase::F;
    else if (any_glass)
        cell.phase = Phase::SG;
    else if (all_para)
        cell.phase = Phase::P;
    return cell;
}

double retrieval_boundary(double Jt, double lo, double hi, double tol, const IterateOptions& options) {
    auto ok = [&](double a) { return retrieves(iterate_finite({a, Jt, 0.0, 0.0}, kBasinProbes[0], options)); };
    while (hi - lo > tol) {
        const double mid = (lo + hi) / 2;
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

PhaseDiagram scan_phase_diagram(const std::vector<double>& alpha_grid, const std::vector<double>& Jt_grid,
                                unsigned threads, const IterateOptions& options) {
    if (alpha_grid.empty() || Jt_grid.empty()) throw ValidationError("phase scan needs non-empty grids");
    for (std::size_t i = 1; i < alpha_grid.size(); ++i)
        if (!(alpha_grid[i] > alpha_grid[i - 1])) throw ValidationError("alpha grid must be ascending");
    for (std::size_t i = 1; i < Jt_grid.size(); ++i)
        if (!(Jt_grid[i] > Jt_grid[i - 1])) throw ValidationError("Jt grid must be ascending");

    PhaseDiagram dia;
    dia.alpha_grid = alpha_grid;
    dia.Jt_grid = Jt_grid;
    const std::size_t na = alpha_grid.size(), nj = Jt_grid.size();
    dia.cells.resize(na * nj);
    parallel_for(na * nj, threads, [&](std::size_t idx) {
        dia.cells[idx] = classify_phase({alpha_grid[idx / nj], Jt_grid[idx % nj], 0.0, 0.0}, options);
    });

    for (std::size_t ia = 0; ia < na; ++ia)
        for (std::size_t ij = 0; ij < nj; ++ij) {
            const Phase ph = dia.at(ia, ij).phase;
            if (ph == Phase::F || ph == Phase::FSG) dia.max_retrieval_alpha = alpha_grid[ia];
        }

    dia.boundary.resize(nj);
    parallel_for(nj, threads, [&](std::size_t ij) {
        std::optional<std::size_t> last;
        for (std::size_t ia = 0; ia < na; ++ia)
            if (retrieves(dia.at(ia, ij).probes[0].result)) last = ia;
        if (!last) return;
        if (*last + 1 == na)
            dia.boundary[ij] = alpha_grid[*last];
        else
            dia.boundary[ij] = retrieval_boundary(Jt_grid[ij], alpha_grid[*last], alpha_grid[*last + 1], 1e-6, options);
    });
    return dia;
}

std::string phase_csv(const PhaseDiagram& dia) {
    auto value = [](const FixedPointResult& r, double v) {
        return r.converged ? format_double(v) : std::string("nan");
    };
    std::string out = "alpha,Jt,m_retrieval,r_retrieval,m_from_zero,r_from_zero,phase\n";
    for (const auto& c : dia.cells) {
        const auto& ret = c.probes[0].result;
        const auto& zero = c.probes[2].result;
        out += format_double(c.params.alpha) + ',' + format_double(c.params.Jt) + ',' + value(ret, ret.x.m) + ',' +
               value(ret, ret.x.r) + ',' + value(zero, zero.x.m) + ',' + value(zero, zero.x.r) + ',' +
               to_string(c.phase) + '\n';
    }
    return out;
}

std::vector<double> linear_grid(double step, std::size_t count) {
    if (!(step > 0.0) || count == 0) throw ValidationError("linear grid needs a positive step and count");
    std::vector<double> g(count);
    // Snap to 12 decimals so 46 * 0.02 prints as 0.92.
    for (std::size_t k = 0; k < count; ++k) g[k] = std::round(static_cast<double>(k + 1) * step * 1e12) / 1e12;
    return g;
}

}  // namespace qam
