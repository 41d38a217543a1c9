"""Quantum associative memory simulator."""

from ._qam import (
    NumericError,
    __version__,
    amplitude_amplify,
    analytic_distribution,
    build_memory,
    capacity_experiment,
    classify_phase,
    complexity_estimate,
    dual_state,
    effective_distance,
    energy,
    energy_level,
    hamming,
    hebb,
    iterate_finite,
    memory_gate_count,
    partition_avg,
    potentials,
    recognition_lower_bound,
    retrieve,
    scan_phase_diagram,
    scan_transition,
    simulated_distribution,
    solve_single,
    store_sequential,
    tune,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
