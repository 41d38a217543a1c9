#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qam/patterns.hpp"
#include "qam/simulator.hpp"

namespace qam {

/// Layout used by the memory operator: memory(n) then utility(2).
RegisterLayout memory_layout(std::size_t n);

/// Gates of the memory operator M on any layout with "memory" (width n) and
/// "utility" (width 2) sections. Applied to |0...0; 00> it produces
/// |m; 00>. With `alternate_signs` the odd/even patterns use CS and its
/// inverse, which yields the dual state |d; 00> instead.
///
/// Per pattern i the bracket is
///   CP^i (n CROT_Y on u2), XOR u2->u1, CS(p+1-i) u1->u2,
///   NXOR[memory == p^i] -> u1, inverse CP^i
/// i.e. 2n+3 gates, plus one leading NOT on u2: p(2n+3)+1 in total.
Circuit memory_operator_circuit(const PatternSet& set, const RegisterLayout& layout, bool alternate_signs = false);

std::size_t memory_gate_count(std::size_t p, std::size_t n);

struct MemoryBuild {
    PatternSet set;
    Circuit circuit;
    std::size_t gate_count;
    SparseState final_state;
};

MemoryBuild build_memory_operator(const PatternSet& set);

/// (1/sqrt p) sum_i (-1)^{i+1} |p^i; 00> over memory_layout(n).
SparseState build_dual_state(const PatternSet& set);

struct SequentialStorage {
    /// Final state over pattern(n), utility(2), memory(n).
    SparseState state;
    /// State right after the restoring steps of pattern i (before the
    /// processing term's memory is cleared), one per pattern.
    std::vector<SparseState> after_pattern;
    std::size_t gate_count;
};

/// Sequential loading through a pattern register, one pattern at a time.
SequentialStorage store_sequential(const PatternSet& set);

/// Memory register contents as (pattern, amplitude) pairs in key order.
std::vector<std::pair<Pattern, Amplitude>> memory_amplitudes(const SparseState& state);

/// {"n","p","gate_count","amplitudes":[{"pattern","re","im"}]}.
std::string memory_build_json(const MemoryBuild& build, bool include_amplitudes);

}  // namespace qam
