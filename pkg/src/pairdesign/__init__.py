"""Accelerated greedy D-optimal design for pairwise comparison selection."""

from .bench import ALGORITHMS, BASELINES, ENGINES, RunConfig, run_bench, run_evaluation, run_selection, verify_equivalence
from .design import (
    DesignState,
    brute_force_select,
    init_design,
    marginal_gain_exact,
    objective_value,
    pair_universe,
    proxy_gain,
)
from .greedy import factorization_greedy, naive_greedy, scalar_greedy
from .lazy import factorization_lazy, naive_lazy, scalar_lazy
from .model import (
    FitResult,
    LabeledData,
    ModelParams,
    auc,
    entropy_select,
    fisher_select,
    map_fit,
    random_select,
    sample_synthetic,
)
from .trace import SelectionTrace

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BASELINES",
    "ENGINES",
    "DesignState",
    "FitResult",
    "LabeledData",
    "ModelParams",
    "RunConfig",
    "SelectionTrace",
    "auc",
    "brute_force_select",
    "entropy_select",
    "factorization_greedy",
    "factorization_lazy",
    "fisher_select",
    "init_design",
    "map_fit",
    "marginal_gain_exact",
    "naive_greedy",
    "naive_lazy",
    "objective_value",
    "pair_universe",
    "proxy_gain",
    "random_select",
    "run_bench",
    "run_evaluation",
    "run_selection",
    "sample_synthetic",
    "scalar_greedy",
    "scalar_lazy",
    "verify_equivalence",
]
