#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qam {

/// Discrete: average over j = d..n. Continuum: integral over x = d/n..1.
enum class ThermoMethod { Discrete, Continuum };

ThermoMethod parse_thermo_method(std::string_view text);
std::string to_string(ThermoMethod method);
/// Discrete up to n = 10^5, continuum beyond.
ThermoMethod default_thermo_method(std::size_t n);

struct ThermoPoint {
    double b = 0;
    double d_over_n = 0;
    std::size_t n = 0;
    double Z_ratio = 0;
    double log_Z_ratio = 0;
    double F = 0;
    double U = 0;
    double S = 0;
    double D_eff = 0;
};

/// -2 log cos(pi d / 2n); +infinity at d = n.
double energy_level(std::size_t d, std::size_t n);

/// Mean of cos^{2b}(pi j / 2n) over j = d..n under uniform weights.
double partition_avg(double b, std::size_t d, std::size_t n, ThermoMethod method = ThermoMethod::Discrete);

/// F = -log(Z_ratio)/b, U = weighted mean energy, S = b(U - F),
/// D_eff = (2/pi) arccos e^{-F/2}. Throws NumericError when Z_ratio = 0.
ThermoPoint potentials(double b, std::size_t d, std::size_t n, ThermoMethod method = ThermoMethod::Discrete);

double effective_distance(double b, std::size_t d, std::size_t n, ThermoMethod method = ThermoMethod::Discrete);

/// d = round(d_over_n * n).
std::size_t distance_from_ratio(double d_over_n, std::size_t n);

struct ScanRow {
    ThermoPoint point;
    double S_rescaled = 0;
    /// Empty on success, otherwise the reason the row has no values.
    std::string error;
};

struct TransitionScan {
    std::vector<ScanRow> rows;
    /// (d/n + 2/3) / 2.
    double midpoint = 0;
    /// Where D_eff first crosses the midpoint, log-interpolated in b.
    std::optional<double> b_crossover;
};

TransitionScan scan_transition(double d_over_n, std::size_t n, const std::vector<double>& b_grid,
                               ThermoMethod method, unsigned threads = 1);

/// `count` points spaced evenly in log b between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// b, d_over_n, n, Z_ratio, F, U, S, S_rescaled, D_eff.
std::string scan_csv(const TransitionScan& scan);

struct TuneResult {
    std::uint64_t b;
    std::uint64_t T_repeat;
    std::uint64_t T_amplified;
    double achieved_D;
};

inline constexpr std::uint64_t kMaxTuneB = 10'000'000;

/// Smallest integer b with D_eff(b, eps n, n) - eps <= 1 - nu.
TuneResult tune(double epsilon, double nu, std::size_t n, ThermoMethod method);

}  // namespace qam
