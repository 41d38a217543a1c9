#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qam/patterns.hpp"
#include "qam/rng.hpp"

namespace qam {

using SpinState = std::vector<int>;

/// Symmetric weights with zero diagonal, stored row-major.
class HopfieldNet {
public:
    explicit HopfieldNet(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double weight(std::size_t i, std::size_t j) const noexcept { return w_[i * n_ + j]; }
    const double* row(std::size_t i) const noexcept { return w_.data() + i * n_; }
    const std::vector<double>& weights() const noexcept { return w_; }

    /// Sets w_ij and w_ji. Diagonal entries must stay zero.
    void set_weight(std::size_t i, std::size_t j, double w);

private:
    std::size_t n_;
    std::vector<double> w_;
};

/// w_ij = (1/n) sum_mu xi_i^mu xi_j^mu with spins xi = 2 bit - 1.
HopfieldNet hebb(const PatternSet& set);

double energy(const HopfieldNet& net, const SpinState& s);

/// Local field h_i = sum_j w_ij s_j.
double local_field(const HopfieldNet& net, const SpinState& s, std::size_t i);

struct UpdateResult {
    SpinState state;
    bool converged;
    std::size_t sweeps;
};

/// Random sequential dynamics: each sweep visits all neurons in a fresh
/// seeded permutation and sets s_i = sign(h_i), keeping s_i when h_i = 0.
/// Stops after a sweep without changes or after `max_sweeps`.
UpdateResult update_async(const HopfieldNet& net, SpinState s, Rng& rng, std::size_t max_sweeps);

/// Normalized overlap (1/n) sum_i a_i b_i.
double overlap(const SpinState& a, const SpinState& b);

struct CapacityRow {
    double alpha;
    std::size_t p;
    std::size_t trials;
    double mean_overlap;
    double std_overlap;
};

/// For each alpha, p = max(1, round(alpha n)) random patterns are stored;
/// the first is corrupted in round(corruption n) positions and relaxed.
/// Trial t of grid point a uses seed derive_seed(seed, a * trials + t).
std::vector<CapacityRow> capacity_experiment(std::size_t n, const std::vector<double>& alpha_grid,
                                             std::size_t trials, double corruption, std::uint64_t seed,
                                             unsigned threads = 1, std::size_t max_sweeps = 100);

/// alpha, p, trials, mean_overlap, std_overlap.
std::string capacity_csv(const std::vector<CapacityRow>& rows);

}  // namespace qam
