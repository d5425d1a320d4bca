"""Piecewise-smooth signal estimation with an exact jump-penalized solver."""

from .core import (
    ModelParams,
    Partition,
    Segment,
    SolveResult,
    as_signal,
    difference_stencil,
    functional_value,
    kth_difference,
)
from .errors import (
    POLY,
    SPLINE,
    ErrorState,
    RotationTable,
    extend,
    init_state,
    precompute_poly,
    precompute_spline,
    prefix_errors,
)
from .metrics import rand_index, rel_l2_error
from .reconstruct import fit_segment_poly, fit_segment_spline, reconstruct
from .signals import KINDS, add_noise, generate, random_pw_poly, true_partition
from .solver import PRUNING_MODES, backtrack, solve

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "Partition",
    "Segment",
    "SolveResult",
    "as_signal",
    "difference_stencil",
    "functional_value",
    "kth_difference",
    "POLY",
    "SPLINE",
    "ErrorState",
    "RotationTable",
    "extend",
    "init_state",
    "precompute_poly",
    "precompute_spline",
    "prefix_errors",
    "rand_index",
    "rel_l2_error",
    "fit_segment_poly",
    "fit_segment_spline",
    "reconstruct",
    "KINDS",
    "add_noise",
    "generate",
    "random_pw_poly",
    "true_partition",
    "PRUNING_MODES",
    "backtrack",
    "solve",
    "__version__",
]
