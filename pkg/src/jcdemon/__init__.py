"""Resonant qubit-cavity simulator with an autonomous-thermodynamics ledger."""

from .config import ScenarioConfig, bloch_to_density, preset
from .dynamics import (
    JointState,
    Propagator,
    build_propagator,
    conserved_excitation,
    decompose_thermal_branches,
    evolve,
    reduced_cavity,
    reduced_qubit,
)
from .errors import (
    ConfigError,
    DimensionMismatch,
    DomainError,
    InvariantViolation,
    TruncationError,
)
from .fock import (
    CavityMoments,
    DensityOperator,
    SpaceConfig,
    annihilation,
    auto_truncation,
    cavity_moments,
    covariance,
    displaced_thermal,
    displacement,
    partial_trace_cavity,
    partial_trace_qubit,
    tensor,
    thermal_state,
)
from .oracle import (
    ExpansionPrediction,
    branch_overlap,
    collapse_time,
    conditional_amplitudes,
    cross_trace,
    demon_predictions,
    feedback_drive,
    measurement_basis,
    purification_schedule,
    regime_prediction,
    unitary_expansion,
)
from .runner import (
    RunReport,
    locate_extrema,
    run_compare,
    run_scenario,
    write_csv,
)
from .thermo import (
    ThermoRecord,
    beta_of_nbar,
    binary_entropy,
    bose_entropy,
    cavity_effective_occupation,
    clausius_sigma,
    entropy_from_factors,
    gaussian_entropy,
    heat_and_work,
    mutual_information,
    qubit_effective_occupation,
    von_neumann_entropy,
)

__version__ = "0.1.0"
