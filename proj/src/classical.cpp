#include "qam/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qam/error.hpp"
#include "qam/io.hpp"
#include "qam/parallel.hpp"

namespace qam {

HopfieldNet::HopfieldNet(std::size_t n) : n_(n), w_(n * n, 0.0) {
    if (n == 0) throw ValidationError("network needs at least one neuron");
}

void HopfieldNet::set_weight(std::size_t i, std::size_t j, double w) {
    if (i >= n_ || j >= n_) throw ValidationError("neuron index out of range");
    if (i == j && w != 0.0) throw ValidationError("self-coupling must be zero");
    w_[i * n_ + j] = w;
    w_[j * n_ + i] = w;
}

HopfieldNet hebb(const PatternSet& set) {
    const std::size_t n = set.width();
    HopfieldNet net(n);
    std::vector<std::vector<int>> xi;
    xi.reserve(set.size());
    for (const auto& p : set) xi.push_back(p.spins());
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            long sum = 0;
            for (const auto& x : xi) sum += x[i] * x[j];
            net.set_weight(i, j, scale * static_cast<double>(sum));
        }
    return net;
}

namespace {

void check_state(const HopfieldNet& net, const SpinState& s) {
    if (s.size() != net.size()) throw ValidationError("spin state size does not match the network");
    for (int v : s)
        if (v != 1 && v != -1) throw ValidationError("spins must be +1 or -1");
}

}  // namespace

double local_field(const HopfieldNet& net, const SpinState& s, std::size_t i) {
    const double* w = net.row(i);
    double h = 0.0;
    for (std::size_t j = 0; j < net.size(); ++j) h += w[j] * s[j];
    return h;
}

double energy(const HopfieldNet& net, const SpinState& s) {
    check_state(net, s);
    double e = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) e += s[i] * local_field(net, s, i);
    return -0.5 * e;
}

UpdateResult update_async(const HopfieldNet& net, SpinState s, Rng& rng, std::size_t max_sweeps) {
    check_state(net, s);
    if (max_sweeps < 1) throw ValidationError("at least one sweep is required");
    const std::size_t n = net.size();
    std::vector<std::size_t> order(n);
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
        bool changed = false;
        for (auto i : order) {
            const double h = local_field(net, s, i);
            const int next = h > 0 ? 1 : (h < 0 ? -1 : s[i]);
            if (next != s[i]) {
                s[i] = next;
                changed = true;
            }
        }
        if (!changed) return {std::move(s), true, sweep};
    }
    return {std::move(s), false, max_sweeps};
}

double overlap(const SpinState& a, const SpinState& b) {
    if (a.size() != b.size() || a.empty()) throw ValidationError("overlap needs equal, non-empty states");
    long sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return static_cast<double>(sum) / static_cast<double>(a.size());
}

std::vector<CapacityRow> capacity_experiment(std::size_t n, const std::vector<double>& alpha_grid,
                                             std::size_t trials, double corruption, std::uint64_t seed,
                                             unsigned threads, std::size_t max_sweeps) {
    if (n < 2) throw ValidationError("capacity experiment needs n >= 2");
    if (trials == 0) throw ValidationError("capacity experiment needs at least one trial");
    if (!(corruption >= 0.0 && corruption <= 1.0)) throw ValidationError("corruption rate must lie in [0, 1]");
    for (double a : alpha_grid)
        if (!(a >= 0.0)) throw ValidationError("alpha must be non-negative");

    const std::size_t flips = static_cast<std::size_t>(std::llround(corruption * static_cast<double>(n)));
    std::vector<double> overlaps(alpha_grid.size() * trials);
    std::vector<std::size_t> p_of(alpha_grid.size());
    for (std::size_t a = 0; a < alpha_grid.size(); ++a)
        p_of[a] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(alpha_grid[a] * static_cast<double>(n))));

    parallel_for(overlaps.size(), threads, [&](std::size_t task) {
        const std::size_t a = task / trials;
        Rng rng(derive_seed(seed, task));
        std::vector<Pattern> pats;
        std::vector<std::uint8_t> bits(n);
        // Random patterns are distinct with overwhelming probability at this
        // size; redraw on the rare collision to honor the set invariant.
        while (pats.size() < p_of[a]) {
            for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
            Pattern cand(bits);
            if (std::find(pats.begin(), pats.end(), cand) == pats.end()) pats.push_back(std::move(cand));
        }
        const PatternSet set(std::move(pats));
        const HopfieldNet net = hebb(set);
        const Pattern start = corrupt(set[0], flips, rng);
        const auto res = update_async(net, start.spins(), rng, max_sweeps);
        overlaps[task] = overlap(res.state, set[0].spins());
    });

    std::vector<CapacityRow> rows;
    for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
        double mean = 0.0;
        for (std::size_t t = 0; t < trials; ++t) mean += overlaps[a * trials + t];
        mean /= static_cast<double>(trials);
        double var = 0.0;
        for (std::size_t t = 0; t < trials; ++t) var += std::pow(overlaps[a * trials + t] - mean, 2);
        const double sd = trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1)) : 0.0;
        rows.push_back({alpha_grid[a], p_of[a], trials, mean, sd});
    }
    return rows;
}

std::string capacity_csv(const std::vector<CapacityRow>& rows) {
    std::string out = "alpha,p,trials,mean_overlap,std_overlap\n";
    for (const auto& r : rows)
        out += format_double(r.alpha) + ',' + std::to_string(r.p) + ',' + std::to_string(r.trials) + ',' +
               format_double(r.mean_overlap) + ',' + format_double(r.std_overlap) + '\n';
    return out;
}

}  // namespace qam
