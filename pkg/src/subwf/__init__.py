"""Phase retrieval from subgaussian measurements.

Spectral initialization plus Wirtinger-flow refinement for four measurement
regimes (complex/real, with or without a fourth-moment excess), the matching
measurement ensembles and noise models, population-identity diagnostics, and
a seeded Monte-Carlo experiment harness with a CSV-emitting CLI.
"""

from .diagnostics import (
    ExpectationReport,
    RicProbeReport,
    closed_form_expected_gradient,
    closed_form_expected_hessian,
    mc_expected_gradient_check,
    mc_expected_m_check,
    population_m_target,
    ric_probe,
)
from .ensembles import ENSEMBLES, MeasurementEnsemble, get_ensemble
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DivergenceError,
    InitializationError,
    SubwfError,
)
from .flow import (
    RunTrace,
    SolverConfig,
    loss,
    relative_error,
    run_wf,
    wirtinger_gradient,
    wirtinger_hessian,
)
from .harness import (
    ConvergenceResult,
    ExperimentConfig,
    SweepResult,
    SweepRow,
    TrialResult,
    run_convergence,
    run_init_quality,
    run_success_sweep,
)
from .config import parse_config
from .instance import (
    Instance,
    NoiseSpec,
    generate_signal,
    load_instance,
    mu_flatness,
    noise_admissibility,
    save_instance,
    synthesize,
)
from .linalg import (
    align_phase,
    hermitize,
    is_hermitian,
    leading_eigenpair,
    phase_aligned_distance,
    sign_distance,
    spectral_norm,
)
from .seeds import derive_trial_seed, mix_seed
from .spectral import (
    InitResult,
    auto_select_algorithm,
    build_m,
    build_m0_and_gamma,
    m_correction_coefficients,
    spectral_initialize,
    validate_algorithm,
)

__version__ = "0.1.0"
