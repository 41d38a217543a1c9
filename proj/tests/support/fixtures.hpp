#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "qam/patterns.hpp"
#include "qam/rng.hpp"

namespace fixtures {

inline qam::Pattern from_index(std::uint64_t v, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t j = 0; j < n; ++j) bits[j] = (v >> j) & 1;
    return qam::Pattern(bits);
}

/// p distinct random patterns of width n.
inline qam::PatternSet random_set(std::size_t n, std::size_t p, qam::Rng& rng) {
    std::vector<std::uint64_t> pool(std::size_t{1} << n);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::vector<qam::Pattern> out;
    for (std::size_t i = 0; i < p; ++i) {
        const auto j = i + qam::uniform_below(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
        out.push_back(from_index(pool[i], n));
    }
    return qam::PatternSet(out);
}

/// Closed-form weights cos^{2b}(pi d / 2n) evaluated term by term:
/// returns (recognition probability, normalized probabilities in set order).
/// `known` restricts the distance to those positions; n stays the full width.
inline std::pair<double, std::vector<double>> closed_form(const qam::PatternSet& set, const qam::Pattern& in,
                                                          std::size_t b, const std::vector<std::size_t>& known = {}) {
    const std::size_t n = in.size();
    std::vector<double> w;
    double total = 0;
    for (const auto& p : set) {
        std::size_t d = 0;
        for (std::size_t j = 0; j < n; ++j) {
            bool use = known.empty();
            for (auto k : known) use |= k == j;
            if (use && p[j] != in[j]) ++d;
        }
        const double c = std::cos(std::numbers::pi * static_cast<double>(d) / (2.0 * n));
        w.push_back(std::pow(c * c, static_cast<double>(b)));
        total += w.back();
    }
    for (auto& x : w) x /= total;
    return {total / static_cast<double>(set.size()), w};
}

}  // namespace fixtures
