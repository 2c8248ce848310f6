"""Frequency-domain coupled-mode simulator for a three-mode quantum converter.

The package models damped bosonic modes with beam-splitter couplings through
input-output theory: build a network (`new_network` or the converter
constructors), evaluate its scattering matrix and conversion efficiency, reduce
a microscopic atomic-ensemble model to the effective three-mode picture, and
analyse conversion bandwidth as a function of damping.
"""

from .analysis import (
    BandwidthReport,
    ConverterFamily,
    EfficiencyCurve,
    EfficiencyMap,
    Interval,
    branch_count,
    efficiency_curve,
    efficiency_map,
    high_efficiency_intervals,
    max_bandwidth,
    optimize_kappa,
)
from .converter import (
    DetunedParams,
    ResonantParams,
    detuned_network,
    direct_coupling_strength,
    efficiency_closed_form,
    reflection_coefficients,
    resonant_network,
    two_mode_network,
)
from .ensemble import (
    AtomEnsemble,
    AtomParams,
    CollectiveCouplings,
    collective_couplings,
    default_validation_ensemble,
    effective_network,
    elimination_error,
    ensemble_from_dict,
    ensemble_to_dict,
    microscopic_network,
    uniform_ensemble,
)
from .errors import (
    DegenerateParametersError,
    DuplicateLabelError,
    EmptyEnsembleError,
    HighMismatchWarning,
    ModeconvError,
    NegativeDampingError,
    NonConvergentError,
    NoPortsError,
    NotHermitianError,
    SingularAtFrequencyError,
    SingularMatrixError,
    StepTooLargeError,
    ZeroDetuningError,
)
from .linalg import eigenvalues_hermitian, solve_linear, solve_with_condition
from .network import (
    CoupledModeNetwork,
    network_from_dict,
    network_from_json,
    network_to_json,
    new_network,
)
from .scattering import (
    ScatteringResult,
    dynamical_matrix,
    internal_amplitudes,
    scattering_matrix,
    transmission,
    transmission_grid,
)
from .timedomain import (
    DriveSignal,
    SimResult,
    frequency_domain_check,
    integrate,
    steady_state_response,
    steady_state_transmission,
    trace_csv_text,
)

__version__ = "0.1.0"

__all__ = [
    "AtomEnsemble",
    "AtomParams",
    "BandwidthReport",
    "CollectiveCouplings",
    "ConverterFamily",
    "CoupledModeNetwork",
    "DegenerateParametersError",
    "DetunedParams",
    "DriveSignal",
    "DuplicateLabelError",
    "EfficiencyCurve",
    "EfficiencyMap",
    "EmptyEnsembleError",
    "HighMismatchWarning",
    "Interval",
    "ModeconvError",
    "NegativeDampingError",
    "NonConvergentError",
    "NoPortsError",
    "NotHermitianError",
    "ResonantParams",
    "ScatteringResult",
    "SimResult",
    "SingularAtFrequencyError",
    "SingularMatrixError",
    "StepTooLargeError",
    "ZeroDetuningError",
    "branch_count",
    "collective_couplings",
    "default_validation_ensemble",
    "detuned_network",
    "direct_coupling_strength",
    "dynamical_matrix",
    "effective_network",
    "efficiency_closed_form",
    "efficiency_curve",
    "efficiency_map",
    "elimination_error",
    "ensemble_from_dict",
    "ensemble_to_dict",
    "eigenvalues_hermitian",
    "frequency_domain_check",
    "high_efficiency_intervals",
    "integrate",
    "internal_amplitudes",
    "max_bandwidth",
    "microscopic_network",
    "network_from_dict",
    "network_from_json",
    "network_to_json",
    "new_network",
    "optimize_kappa",
    "reflection_coefficients",
    "resonant_network",
    "scattering_matrix",
    "solve_linear",
    "solve_with_condition",
    "steady_state_response",
    "steady_state_transmission",
    "trace_csv_text",
    "transmission",
    "transmission_grid",
    "two_mode_network",
    "uniform_ensemble",
]
