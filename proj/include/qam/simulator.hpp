#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qam/patterns.hpp"
#include "qam/rng.hpp"

namespace qam {

using Amplitude = std::complex<double>;
using BasisKey = std::uint64_t;

inline constexpr double kPruneThreshold = 1e-12;
inline constexpr std::size_t kMaxQubits = 64;

/// Named, contiguous qubit sections. Qubit q of the system is bit q of a
/// basis key; local index j of a section maps to offset + j.
class RegisterLayout {
public:
    struct Section {
        std::string name;
        std::size_t offset;
        std::size_t width;

        bool operator==(const Section&) const = default;
    };

    RegisterLayout& add(std::string name, std::size_t width);

    const Section& section(std::string_view name) const;
    bool has(std::string_view name) const;
    std::size_t qubit(std::string_view name, std::size_t local) const;
    std::size_t total() const noexcept { return total_; }
    const std::vector<Section>& sections() const noexcept { return sections_; }

    bool operator==(const RegisterLayout&) const = default;

private:
    std::vector<Section> sections_;
    std::size_t total_ = 0;
};

/// Bits of `key` belonging to `sec`, as a pattern (local bit 0 first).
Pattern section_pattern(BasisKey key, const RegisterLayout::Section& sec);
/// Key with the section's bits replaced by `value`.
BasisKey with_section(BasisKey key, const RegisterLayout::Section& sec, const Pattern& value);

/// Sparse amplitude vector kept as (key, amplitude) pairs sorted by key.
/// Amplitudes below kPruneThreshold in magnitude are dropped after every
/// operation.
class SparseState {
public:
    using Term = std::pair<BasisKey, Amplitude>;

    /// Builds a state from explicit terms. Duplicate keys are summed. Throws
    /// unless the result has unit norm within 1e-10.
    static SparseState from_terms(RegisterLayout layout, std::vector<Term> terms);

    const RegisterLayout& layout() const noexcept { return layout_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    Amplitude amplitude(BasisKey key) const;
    double norm() const;

private:
    friend struct StateAccess;

    SparseState(RegisterLayout layout, std::vector<Term> terms)
        : layout_(std::move(layout)), terms_(std::move(terms)) {}

    RegisterLayout layout_;
    std::vector<Term> terms_;
};

enum class GateKind { Not, H, Xor, Toffoli, NXor, CS, CSInv, U, CUInv2, RotY, CRotY };

/// Elementary gate: a 2x2 unitary on `target`, conditioned on every control
/// qubit holding its required value (1 unless stated otherwise).
struct Gate {
    GateKind kind;
    std::size_t target = 0;
    std::vector<std::size_t> controls;
    std::vector<std::uint8_t> control_values;
    int index = 0;
    double angle = 0.0;

    static Gate Not(std::size_t t);
    static Gate H(std::size_t t);
    static Gate Xor(std::size_t c, std::size_t t);
    static Gate Toffoli(std::size_t c1, std::size_t c2, std::size_t t);
    static Gate NXor(std::vector<std::size_t> controls, std::size_t t);
    /// Multi-controlled NOT firing when the controls read `values`.
    static Gate NXorMatch(std::vector<std::size_t> controls, std::vector<std::uint8_t> values, std::size_t t);
    static Gate CS(int i, std::size_t c, std::size_t t);
    static Gate CSInv(int i, std::size_t c, std::size_t t);
    /// diag(e^{i theta}, 1).
    static Gate U(double theta, std::size_t t);
    /// Controlled diag(e^{-2 i theta}, 1).
    static Gate CUInv2(double theta, std::size_t c, std::size_t t);
    /// [[cos a, -sin a], [sin a, cos a]].
    static Gate RotY(double a, std::size_t t);
    static Gate CRotY(double a, std::size_t c, std::size_t t);

    Gate inverse() const;
    /// Row-major 2x2 matrix acting on the target.
    std::array<Amplitude, 4> matrix() const;
    bool is_permutation() const noexcept;
    bool is_diagonal() const noexcept;
    std::string name() const;
    /// `KIND(param) controls -> target`; negated controls carry a '!'.
    std::string str() const;
};

/// Ordered gate list bound to a layout.
class Circuit {
public:
    explicit Circuit(RegisterLayout layout) : layout_(std::move(layout)) {}

    Circuit& add(Gate g);
    Circuit& append(const Circuit& other);
    Circuit inverse() const;

    const RegisterLayout& layout() const noexcept { return layout_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }
    std::size_t size() const noexcept { return gates_.size(); }
    std::string dump() const;

private:
    RegisterLayout layout_;
    std::vector<Gate> gates_;
};

SparseState basis_state(const RegisterLayout& layout, BasisKey key);
/// `bits[q]` is the value of qubit q.
SparseState basis_state(const RegisterLayout& layout, std::string_view bits);

void apply(SparseState& state, const Gate& gate);
/// Returns the number of gates applied.
std::size_t apply_circuit(SparseState& state, const Circuit& circuit);

/// Applies diag(phase) to every basis state for which `predicate(key)` holds.
/// Used for reflection oracles that are not elementary gates.
template <class Pred>
void apply_phase_if(SparseState& state, Amplitude phase, Pred&& predicate);

struct Measurement {
    Pattern outcome;
    double probability;
    SparseState state;
};

Measurement measure_section(const SparseState& state, std::string_view section, Rng& rng);

struct Postselection {
    double probability;
    std::optional<SparseState> state;
};

Postselection postselect(const SparseState& state, std::string_view section, const Pattern& bits);

/// Probability of each observed value of a section, ordered by value key.
std::vector<std::pair<Pattern, double>> marginal(const SparseState& state, std::string_view section);

/// The state of one section, provided every term agrees on all other
/// sections. Throws otherwise.
SparseState extract_section(const SparseState& state, std::string_view section);

Amplitude overlap(const SparseState& a, const SparseState& b);

/// Raw term access for in-module algorithms that maintain the invariants
/// themselves.
struct StateAccess {
    static std::vector<SparseState::Term>& terms(SparseState& s) { return s.terms_; }
    static SparseState make(RegisterLayout layout, std::vector<SparseState::Term> terms) {
        return SparseState(std::move(layout), std::move(terms));
    }
};

template <class Pred>
void apply_phase_if(SparseState& state, Amplitude phase, Pred&& predicate) {
    for (auto& [key, amp] : StateAccess::terms(state))
        if (predicate(key)) amp *= phase;
}

}  // namespace qam
