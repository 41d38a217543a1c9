#include "qam/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qam/error.hpp"
#include "qam/io.hpp"
#include "qam/parallel.hpp"

namespace qam {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnderflow = -745.0;

struct Sums {
    double log_Z;
    double U;
};

/// log cos(pi x / 2) written through the complement so that x -> 1 keeps
/// full relative precision.
double log_cos_half_pi(double one_minus_x) { return std::log(std::sin(kPi / 2 * one_minus_x)); }

void check_range(std::size_t d, std::size_t n) {
    if (n == 0) throw ValidationError("n must be positive");
    if (d > n) throw ValidationError("d must not exceed n");
}

Sums discrete_sums(double b, std::size_t d, std::size_t n) {
    if (d == n) return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const double nn = static_cast<double>(n);
    auto lc = [&](std::size_t j) { return log_cos_half_pi(static_cast<double>(n - j) / nn); };
    const double lc0 = lc(d);
    double sw = 0.0, swe = 0.0;
    // Weights fall monotonically in j; the j = n term is exactly zero.
    for (std::size_t j = d; j < n; ++j) {
        const double l = lc(j);
        const double rel = 2 * b * (l - lc0);
        if (rel < kUnderflow) break;
        const double w = std::exp(rel);
        sw += w;
        swe += w * (-2 * l);
    }
    return {2 * b * lc0 + std::log(sw) - std::log(static_cast<double>(n - d + 1)), swe / sw};
}

Sums continuum_sums(double b, double x0) {
    if (x0 >= 1.0) return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    using boost::math::quadrature::gauss_kronrod;
    const double lc0 = log_cos_half_pi(1.0 - x0);
    auto weight = [&](double x) { return std::exp(2 * b * (log_cos_half_pi(1.0 - x) - lc0)); };

    // Decay length of the weight near x0, from its first and second
    // derivatives in log space.
    const double slope = 2 * b * (kPi / 2) * std::tan(kPi * x0 / 2);
    const double curv = 2 * b * (kPi * kPi / 8) / std::pow(std::cos(kPi * x0 / 2), 2);
    double s = 1.0 - x0;
    if (slope > 0) s = std::min(s, 1.0 / slope);
    if (curv > 0) s = std::min(s, 1.0 / std::sqrt(curv));
    s = std::max(s, 1e-14);

    // Roundoff in the exponent grows like b, so tighter tolerances only
    // burn recursion depth.
    constexpr unsigned kDepth = 10;
    constexpr double kTol = 1e-10;
    double I = 0.0, IE = 0.0;
    double a = x0, width = s;
    while (a < 1.0) {
        const double c = std::min(1.0, a + width);
        const double dI = gauss_kronrod<double, 61>::integrate(weight, a, c, kDepth, kTol);
        I += dI;
        IE += gauss_kronrod<double, 61>::integrate(
            [&](double x) {
                const double l = log_cos_half_pi(1.0 - x);
                const double w = std::exp(2 * b * (l - lc0));
                return w == 0.0 ? 0.0 : -2 * l * w;
            },
            a, c, kDepth, kTol);
        a = c;
        width *= 2;
        if (dI < 1e-17 * I) break;
        if (a < 1.0 && 2 * b * (log_cos_half_pi(1.0 - a) - lc0) < kUnderflow) break;
    }
    return {2 * b * lc0 + std::log(I) - std::log(1.0 - x0), IE / I};
}

Sums sums(double b, std::size_t d, std::size_t n, ThermoMethod method) {
    check_range(d, n);
    if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("b must be positive and finite");
    return method == ThermoMethod::Discrete ? discrete_sums(b, d, n)
                                            : continuum_sums(b, static_cast<double>(d) / static_cast<double>(n));
}

}  // namespace

ThermoMethod parse_thermo_method(std::string_view text) {
    if (text == "discrete") return ThermoMethod::Discrete;
    if (text == "continuum") return ThermoMethod::Continuum;
    throw ValidationError("method must be 'discrete' or 'continuum', got '" + std::string(text) + "'");
}

std::string to_string(ThermoMethod method) { return method == ThermoMethod::Discrete ? "discrete" : "continuum"; }

ThermoMethod default_thermo_method(std::size_t n) {
    return n <= 100'000 ? ThermoMethod::Discrete : ThermoMethod::Continuum;
}

double energy_level(std::size_t d, std::size_t n) {
    check_range(d, n);
    if (d == n) return std::numeric_limits<double>::infinity();
    return -2 * log_cos_half_pi(static_cast<double>(n - d) / static_cast<double>(n));
}

double partition_avg(double b, std::size_t d, std::size_t n, ThermoMethod method) {
    check_range(d, n);
    if (b == 0.0) return 1.0;
    return std::exp(sums(b, d, n, method).log_Z);
}

ThermoPoint potentials(double b, std::size_t d, std::size_t n, ThermoMethod method) {
    const Sums s = sums(b, d, n, method);
    if (!std::isfinite(s.log_Z)) throw NumericError("partition function vanishes; potentials undefined");
    ThermoPoint pt;
    pt.b = b;
    pt.n = n;
    pt.d_over_n = static_cast<double>(d) / static_cast<double>(n);
    pt.log_Z_ratio = s.log_Z;
    pt.Z_ratio = std::exp(s.log_Z);
    pt.F = -s.log_Z / b;
    pt.U = s.U;
    pt.S = b * (pt.U - pt.F);
    pt.D_eff = 2 / kPi * std::acos(std::exp(-pt.F / 2));
    return pt;
}

double effective_distance(double b, std::size_t d, std::size_t n, ThermoMethod method) {
    return potentials(b, d, n, method).D_eff;
}

std::size_t distance_from_ratio(double d_over_n, std::size_t n) {
    if (!(d_over_n >= 0.0 && d_over_n <= 1.0)) throw ValidationError("d/n must lie in [0, 1]");
    return static_cast<std::size_t>(std::llround(d_over_n * static_cast<double>(n)));
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw ValidationError("log grid needs 0 < lo <= hi and count >= 1");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        g[i] = std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

TransitionScan scan_transition(double d_over_n, std::size_t n, const std::vector<double>& b_grid,
                               ThermoMethod method, unsigned threads) {
    if (b_grid.empty()) throw ValidationError("b grid is empty");
    for (std::size_t i = 0; i < b_grid.size(); ++i) {
        if (!(b_grid[i] > 0.0)) throw ValidationError("b grid must be positive");
        if (i > 0 && !(b_grid[i] > b_grid[i - 1])) throw ValidationError("b grid must be ascending");
    }
    const std::size_t d = distance_from_ratio(d_over_n, n);
    TransitionScan scan;
    scan.rows.resize(b_grid.size());
    parallel_for(b_grid.size(), threads, [&](std::size_t i) {
        ScanRow& row = scan.rows[i];
        try {
            row.point = potentials(b_grid[i], d, n, method);
        } catch (const NumericError& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.point = {b_grid[i], static_cast<double>(d) / static_cast<double>(n), n, 0.0, nan, nan, nan, nan, nan};
            row.error = e.what();
        }
    });

    double s_min = 0.0;
    for (const auto& r : scan.rows)
        if (r.error.empty()) s_min = std::min(s_min, r.point.S);
    for (auto& r : scan.rows) {
        if (!r.error.empty())
            r.S_rescaled = std::numeric_limits<double>::quiet_NaN();
        else
            r.S_rescaled = s_min < 0.0 ? (r.point.S - s_min) / (0.0 - s_min) : 1.0;
    }

    scan.midpoint = (static_cast<double>(d) / static_cast<double>(n) + 2.0 / 3.0) / 2;
    for (std::size_t i = 0; i + 1 < scan.rows.size(); ++i) {
        const auto& a = scan.rows[i];
        const auto& c = scan.rows[i + 1];
        if (!a.error.empty() || !c.error.empty()) continue;
        if (a.point.D_eff >= scan.midpoint && c.point.D_eff < scan.midpoint) {
            const double t = (a.point.D_eff - scan.midpoint) / (a.point.D_eff - c.point.D_eff);
            scan.b_crossover = std::exp(std::log(a.point.b) + t * (std::log(c.point.b) - std::log(a.point.b)));
            break;
        }
    }
    return scan;
}

std::string scan_csv(const TransitionScan& scan) {
    std::string out = "b,d_over_n,n,Z_ratio,F,U,S,S_rescaled,D_eff\n";
    for (const auto& r : scan.rows) {
        const auto& p = r.point;
        out += format_double(p.b) + ',' + format_double(p.d_over_n) + ',' + std::to_string(p.n) + ',' +
               format_double(p.Z_ratio) + ',' + format_double(p.F) + ',' + format_double(p.U) + ',' +
               format_double(p.S) + ',' + format_double(r.S_rescaled) + ',' + format_double(p.D_eff) + '\n';
    }
    return out;
}

TuneResult tune(double epsilon, double nu, std::size_t n, ThermoMethod method) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
    if (!(nu >= 0.0 && nu <= 1.0)) throw ValidationError("nu must lie in [0, 1]");
    const std::size_t d = distance_from_ratio(epsilon, n);
    const double limit = 1.0 - nu + epsilon;
    auto passes = [&](std::uint64_t b) { return effective_distance(static_cast<double>(b), d, n, method) <= limit; };

    std::uint64_t good = 1;
    if (!passes(1)) {
        std::uint64_t bad = 1;
        good = 2;
        while (!passes(good)) {
            if (good == kMaxTuneB) throw NumericError("tuning target not reachable with b <= 10^7");
            bad = good;
            good = std::min(good * 2, kMaxTuneB);
        }
        while (good - bad > 1) {
            const std::uint64_t mid = bad + (good - bad) / 2;
            (passes(mid) ? good : bad) = mid;
        }
    }
    const ThermoPoint pt = potentials(static_cast<double>(good), d, n, method);
    auto to_count = [](double log_t) {
        const double t = std::ceil(std::exp(log_t));
        if (!(t < 0x1p64)) throw NumericError("iteration count exceeds 2^64");
        return static_cast<std::uint64_t>(t);
    };
    return {good, to_count(-pt.log_Z_ratio), to_count(-pt.log_Z_ratio / 2), pt.D_eff};
}

}  // namespace qam
