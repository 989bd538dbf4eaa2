"""1-D wavepacket propagation and virtual-detector momentum spectroscopy.

Library layout mirrors the processing pipeline: build a state (core),
propagate it while recording detector taps (propagator), turn records into
momentum spectra (detectors), compare against exact references (analysis),
or run a whole benchmark in one call (scenarios).
"""

__version__ = "0.1.0"

from .core import (
    ATOMIC,
    GaussianParams,
    Grid1D,
    Units,
    Wavefunction,
    centered_grid,
    gaussian_packet,
    measure_local,
    superpose,
)
from .propagator import (
    EvolutionConfig,
    PotentialSpec,
    PropagationError,
    analytic_free_gaussian,
    apply_uniform_potential,
    free_step,
    propagate,
)
from .detectors import (
    CvdSpectrum,
    DetectorRecord,
    DirectionalComponents,
    Spectrum,
    TapConfig,
    TemporalAmplitude,
    bqvd_spectrum_continuous,
    bqvd_spectrum_discrete,
    cvd_on_grid,
    cvd_spectrum,
    directional_components,
    omega_to_k,
    phase_unwind,
    qvd_spectrum,
    temporal_spectrum,
)
from .analysis import (
    ComparisonReport,
    analytic_gaussian_spectrum,
    compare,
    exact_spectrum,
)
from .scenarios import (
    ScenarioConfig,
    ScenarioError,
    ScenarioResult,
    build_scenario,
    initial_state,
    run_scenario,
    scenario_catalog,
    scenario_names,
    validate_config,
)

__all__ = [
    "__version__",
    "ATOMIC",
    "Units",
    "Grid1D",
    "centered_grid",
    "Wavefunction",
    "GaussianParams",
    "gaussian_packet",
    "superpose",
    "measure_local",
    "PotentialSpec",
    "EvolutionConfig",
    "PropagationError",
    "free_step",
    "apply_uniform_potential",
    "propagate",
    "analytic_free_gaussian",
    "TapConfig",
    "DetectorRecord",
    "TemporalAmplitude",
    "Spectrum",
    "CvdSpectrum",
    "DirectionalComponents",
    "phase_unwind",
    "temporal_spectrum",
    "omega_to_k",
    "directional_components",
    "bqvd_spectrum_discrete",
    "bqvd_spectrum_continuous",
    "qvd_spectrum",
    "cvd_spectrum",
    "cvd_on_grid",
    "ComparisonReport",
    "exact_spectrum",
    "analytic_gaussian_spectrum",
    "compare",
    "ScenarioConfig",
    "ScenarioResult",
    "ScenarioError",
    "scenario_names",
    "scenario_catalog",
    "build_scenario",
    "initial_state",
    "validate_config",
    "run_scenario",
]
