#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qam/rng.hpp"

namespace qam {

/// A fixed-length binary string. Bit 0 is the leftmost character of the
/// textual form and the lowest-order qubit once placed in a register.
class Pattern {
public:
    explicit Pattern(std::vector<std::uint8_t> bits);

    /// Parses a string over {'0','1'}.
    static Pattern parse(std::string_view text);
    static Pattern zeros(std::size_t n);

    /// Spin form s = 2 * bit - 1.
    static Pattern from_spins(std::span<const int> spins);

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    Pattern complement() const;
    Pattern flipped(std::span<const std::size_t> positions) const;
    std::vector<int> spins() const;
    std::string str() const;

    auto operator<=>(const Pattern&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Ordered collection of distinct, equal-length patterns (1 <= p <= 2^n).
class PatternSet {
public:
    explicit PatternSet(std::vector<Pattern> patterns);

    std::size_t size() const noexcept { return patterns_.size(); }
    std::size_t width() const noexcept { return patterns_.front().size(); }
    const Pattern& operator[](std::size_t i) const noexcept { return patterns_[i]; }
    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }
    auto begin() const noexcept { return patterns_.begin(); }
    auto end() const noexcept { return patterns_.end(); }

    bool contains(const Pattern& p) const;

private:
    std::vector<Pattern> patterns_;
};

/// Indices of the known input qubits. Stored sorted.
class Mask {
public:
    Mask(std::vector<std::size_t> known, std::size_t n);

    static Mask full(std::size_t n);
    /// Comma separated index list, e.g. "0,2,3".
    static Mask parse(std::string_view list, std::size_t n);

    std::size_t width() const noexcept { return n_; }
    const std::vector<std::size_t>& indices() const noexcept { return known_; }
    bool contains(std::size_t i) const;
    bool is_full() const noexcept { return known_.size() == n_; }

private:
    std::vector<std::size_t> known_;
    std::size_t n_;
};

std::size_t hamming(const Pattern& a, const Pattern& b);
std::size_t hamming_masked(const Pattern& a, const Pattern& b, const Mask& mask);

/// k distinct positions drawn uniformly from [0, n), in draw order.
std::vector<std::size_t> corrupt_positions(std::size_t n, std::size_t k, Rng& rng);
Pattern corrupt(const Pattern& p, std::size_t k, Rng& rng);

PatternSet parse_pattern_text(std::string_view text);
std::string format_pattern_text(const PatternSet& set);
PatternSet read_pattern_file(const std::filesystem::path& path);
void write_pattern_file(const PatternSet& set, const std::filesystem::path& path);

}  // namespace qam
