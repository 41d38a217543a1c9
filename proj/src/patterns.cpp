#include "qam/patterns.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "qam/error.hpp"

namespace qam {

Pattern::Pattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw ValidationError("pattern must have at least one bit");
    for (auto b : bits_)
        if (b > 1) throw ValidationError("pattern bits must be 0 or 1");
}

Pattern Pattern::parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw ValidationError("pattern '" + std::string(text) + "' contains a non-binary character");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Pattern(std::move(bits));
}

Pattern Pattern::zeros(std::size_t n) { return Pattern(std::vector<std::uint8_t>(n, 0)); }

Pattern Pattern::from_spins(std::span<const int> spins) {
    std::vector<std::uint8_t> bits;
    bits.reserve(spins.size());
    for (int s : spins) {
        if (s != 1 && s != -1) throw ValidationError("spins must be +1 or -1");
        bits.push_back(s > 0 ? 1 : 0);
    }
    return Pattern(std::move(bits));
}

Pattern Pattern::complement() const {
    auto out = bits_;
    for (auto& b : out) b ^= 1;
    return Pattern(std::move(out));
}

Pattern Pattern::flipped(std::span<const std::size_t> positions) const {
    auto out = bits_;
    for (auto i : positions) {
        if (i >= out.size()) throw ValidationError("flip position out of range");
        out[i] ^= 1;
    }
    return Pattern(std::move(out));
}

std::vector<int> Pattern::spins() const {
    std::vector<int> s(bits_.size());
    std::transform(bits_.begin(), bits_.end(), s.begin(), [](std::uint8_t b) { return 2 * int(b) - 1; });
    return s;
}

std::string Pattern::str() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
    return s;
}

PatternSet::PatternSet(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {
    if (patterns_.empty()) throw ValidationError("pattern set is empty");
    const std::size_t n = patterns_.front().size();
    std::set<Pattern> seen;
    for (const auto& p : patterns_) {
        if (p.size() != n) throw ValidationError("patterns have different lengths");
        if (!seen.insert(p).second) throw ValidationError("duplicate pattern " + p.str());
    }
}

bool PatternSet::contains(const Pattern& p) const {
    return std::find(patterns_.begin(), patterns_.end(), p) != patterns_.end();
}

Mask::Mask(std::vector<std::size_t> known, std::size_t n) : known_(std::move(known)), n_(n) {
    if (known_.empty()) throw ValidationError("mask must name at least one known qubit");
    std::sort(known_.begin(), known_.end());
    if (std::adjacent_find(known_.begin(), known_.end()) != known_.end())
        throw ValidationError("mask indices must be unique");
    if (known_.back() >= n_) throw ValidationError("mask index out of range");
}

Mask Mask::full(std::size_t n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return Mask(std::move(all), n);
}

Mask Mask::parse(std::string_view list, std::size_t n) {
    std::vector<std::size_t> known;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const auto comma = std::min(list.find(',', pos), list.size());
        const auto item = list.substr(pos, comma - pos);
        if (item.empty() || item.find_first_not_of("0123456789") != std::string_view::npos)
            throw ValidationError("mask '" + std::string(list) + "' is not a comma separated index list");
        known.push_back(std::stoul(std::string(item)));
        pos = comma + 1;
    }
    return Mask(std::move(known), n);
}

bool Mask::contains(std::size_t i) const { return std::binary_search(known_.begin(), known_.end(), i); }

std::size_t hamming(const Pattern& a, const Pattern& b) {
    if (a.size() != b.size()) throw ValidationError("hamming: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

std::size_t hamming_masked(const Pattern& a, const Pattern& b, const Mask& mask) {
    if (a.size() != b.size()) throw ValidationError("hamming: length mismatch");
    if (mask.width() != a.size()) throw ValidationError("hamming: mask width does not match pattern length");
    std::size_t d = 0;
    for (auto i : mask.indices()) d += a[i] != b[i];
    return d;
}

std::vector<std::size_t> corrupt_positions(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw ValidationError("cannot flip more bits than the pattern has");
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + uniform_below(rng, n - i)]);
    idx.resize(k);
    return idx;
}

Pattern corrupt(const Pattern& p, std::size_t k, Rng& rng) {
    return p.flipped(corrupt_positions(p.size(), k, rng));
}

PatternSet parse_pattern_text(std::string_view text) {
    using Kind = PatternFileError::Kind;
    if (text.empty()) throw PatternFileError(Kind::Empty, 0, "pattern file is empty");
    if (text.back() != '\n') {
        const auto lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
        throw PatternFileError(Kind::MissingNewline, lines, "line " + std::to_string(lines) + ": missing trailing newline");
    }
    std::vector<Pattern> patterns;
    std::set<std::string_view> seen;
    std::size_t line_no = 0;
    std::size_t width = 0;
    for (std::size_t pos = 0; pos < text.size();) {
        const auto eol = text.find('\n', pos);
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        const auto where = "line " + std::to_string(line_no) + ": ";
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) throw PatternFileError(Kind::BlankLine, line_no, where + "blank line");
        if (line.find_first_not_of("01") != std::string_view::npos)
            throw PatternFileError(Kind::NonBinary, line_no, where + "non-binary character in '" + std::string(line) + "'");
        if (width == 0) width = line.size();
        if (line.size() != width)
            throw PatternFileError(Kind::Ragged, line_no,
                                   where + "length " + std::to_string(line.size()) + " differs from " + std::to_string(width));
        if (!seen.insert(line).second)
            throw PatternFileError(Kind::Duplicate, line_no, where + "duplicate pattern " + std::string(line));
        if (width < 64 && patterns.size() + 1 > (std::size_t{1} << width))
            throw PatternFileError(Kind::TooMany, line_no, where + "more patterns than 2^n");
        patterns.push_back(Pattern::parse(line));
    }
    return PatternSet(std::move(patterns));
}

std::string format_pattern_text(const PatternSet& set) {
    std::string out;
    out.reserve(set.size() * (set.width() + 1));
    for (const auto& p : set) {
        out += p.str();
        out += '\n';
    }
    return out;
}

PatternSet read_pattern_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PatternFileError(PatternFileError::Kind::Io, 0, "cannot open pattern file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pattern_text(buf.str());
}

void write_pattern_file(const PatternSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PatternFileError(PatternFileError::Kind::Io, 0, "cannot write pattern file " + path.string());
    out << format_pattern_text(set);
    if (!out) throw PatternFileError(PatternFileError::Kind::Io, 0, "write failed for " + path.string());
}

}  // namespace qam
