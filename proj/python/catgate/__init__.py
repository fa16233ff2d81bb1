"""Truncated-Fock-space simulation of a probabilistic Hadamard gate for
coherent-state qubits: state factories, the conditioned four-mode gate,
Wigner/fidelity analysis, and homodyne tomography."""

from ._core import (  # noqa: F401
    BalanceResult,
    CapacityError,
    ConditioningError,
    CsqSpec,
    DensityOperator,
    DetectorSpec,
    DimensionError,
    FockKet,
    GateParams,
    GateResult,
    QuadratureDataset,
    ReconstructionReport,
    ResourceSpec,
    TruncationError,
    Window,
    balance_window,
    basis_ket,
    best_target_alpha,
    cat,
    coherent,
    csq_ket,
    default_phases,
    fidelity,
    fidelity_curve,
    hadamard_target,
    ideal_output,
    maxlik_reconstruct,
    optimal_heralding_x,
    process_fidelity,
    projector,
    sample_homodyne,
    simulate_gate,
    squeeze_db,
    squeeze_from_db,
    squeezed_resource_output,
    squeezed_vacuum,
    thermal,
    wigner,
    wigner_grid,
    y1_coefficient,
    y2_coefficient,
)

__all__ = [name for name in dir() if not name.startswith("_")]
