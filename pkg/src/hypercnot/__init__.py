"""State-vector simulator for a two-photon spatial-polarization hyper-CNOT
gate mediated by charged-dot microcavity spins."""

__version__ = "0.1.0"

from .hilbert import (
    MeasurementRecord,
    Register,
    StateVector,
    apply_operator,
    attach_register,
    basis_state,
    discard_register,
    fidelity_up_to_global_phase,
    measure,
    measure_all_branches,
    normalize,
    outcome_weights,
    reorder_registers,
    state_from_terms,
    tensor_product,
    tensor_state,
)
from .cavity import (
    CavityParams,
    ReflectionPair,
    qd_scatter,
    reflect_cold,
    reflect_hot,
    scatter_matrix,
)
from .optics import ElementKind, apply_element, conditional_element, element_matrix
from .protocols import (
    BellAnalysis,
    ClusterStages,
    GateRun,
    HyperBellState,
    TruthTableRow,
    analyze_hyper_bell,
    bell_decoding_table,
    cz_stage,
    expected_truth_table_output,
    feed_forward,
    hyper_bell_state,
    hyper_cnot,
    hyper_cnot_checkpoints,
    hyper_cnot_state,
    photon_registers,
    photon_state,
    polarization_stage_matrix,
    prepare_cluster,
    prepare_cluster_stages,
    spatial_stage_matrix,
    spin_readout,
    spin_register,
    truth_table,
    uniform_two_photon_state,
)
from .analysis import (
    PerformancePoint,
    ReferenceCheckRow,
    ReferencePoint,
    REFERENCE_POINTS,
    REFERENCE_TOLERANCE,
    SweepResult,
    efficiency_oracle,
    formula_performance,
    performance_point,
    reference_check,
    simulated_performance,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
