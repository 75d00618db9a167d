"""Sparse recovery under perturbed sensing systems.

Greedy pursuits with replacement (CoSaMP, subspace pursuit, iterative hard
thresholding), an oracle least-squares baseline, restricted-isometry
analysis, closed-form recovery guarantees, and a deterministic Monte Carlo
experiment harness with CSV and SVG output.

Numerical kernels are numba-compiled when numba is available; set the
environment variable ``PURSUITLAB_NO_NUMBA=1`` before import to force the
pure-numpy path.
"""

from ._kernels import USING_NUMBA
from .bounds import (
    ALGORITHMS,
    BoundConstants,
    OutOfRegimeError,
    PerturbedBoundConstants,
    contraction_breakdown,
    contraction_factor,
    decay_ratio_bounds,
    iteration_estimate,
    pseudoinverse_norm_bound,
    remark3_bound,
    table1_constants,
    table2_constants,
    theorem2_bound,
    theorem3_bound,
)
from .experiments import (
    AggregateRow,
    ExperimentConfig,
    TrialRecord,
    aggregate,
    config_from_text,
    config_to_text,
    derive_seed,
    emit_csv,
    emit_plot,
    read_csv,
    run_study,
    small_profile,
)
from .matrix_analysis import (
    EnumerationBudgetError,
    RicEstimate,
    exact_ric,
    k_col_spectral_norm,
    mc_ric_lower_bound,
    perturbed_ric_bound,
    spectral_norm,
)
from .oracle import (
    AdversarialInstance,
    build_adversarial_instance,
    error_decomposition,
    oracle_lower_bound,
    oracle_ls,
)
from .pursuits import (
    PursuitOptions,
    RecoveryOutput,
    cosamp,
    hard_threshold,
    iht,
    ls_on_support,
    sp,
)
from .sensing import (
    SCENARIOS,
    PerturbedSystem,
    equivalent_noise,
    gen_gaussian_sensing,
    make_system,
)
from .signals import (
    ApproxRatios,
    BestKSplit,
    approx_ratios,
    best_k_split,
    gen_power_law,
    gen_sparse,
    gen_strong_decay,
)

__version__ = "0.1.0"

__all__ = [
    "USING_NUMBA",
    "ALGORITHMS",
    "BoundConstants",
    "OutOfRegimeError",
    "PerturbedBoundConstants",
    "contraction_breakdown",
    "contraction_factor",
    "decay_ratio_bounds",
    "iteration_estimate",
    "pseudoinverse_norm_bound",
    "remark3_bound",
    "table1_constants",
    "table2_constants",
    "theorem2_bound",
    "theorem3_bound",
    "AggregateRow",
    "ExperimentConfig",
    "TrialRecord",
    "aggregate",
    "config_from_text",
    "config_to_text",
    "derive_seed",
    "emit_csv",
    "emit_plot",
    "read_csv",
    "run_study",
    "small_profile",
    "EnumerationBudgetError",
    "RicEstimate",
    "exact_ric",
    "k_col_spectral_norm",
    "mc_ric_lower_bound",
    "perturbed_ric_bound",
    "spectral_norm",
    "AdversarialInstance",
    "build_adversarial_instance",
    "error_decomposition",
    "oracle_lower_bound",
    "oracle_ls",
    "PursuitOptions",
    "RecoveryOutput",
    "cosamp",
    "hard_threshold",
    "iht",
    "ls_on_support",
    "sp",
    "SCENARIOS",
    "PerturbedSystem",
    "equivalent_noise",
    "gen_gaussian_sensing",
    "make_system",
    "ApproxRatios",
    "BestKSplit",
    "approx_ratios",
    "best_k_split",
    "gen_power_law",
    "gen_sparse",
    "gen_strong_decay",
    "__version__",
]
