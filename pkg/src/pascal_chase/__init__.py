"""Value-preserving weight chasing on Pascal's triangle, in exact arithmetic.

The main entry points are re-exported here; see the submodules for details.
"""

__version__ = "0.1.0"

from .chase import (
    CheckReport,
    Drop,
    Lift,
    ProofScript,
    ShiftRight,
    StepError,
    SwapSym,
    WeightedConfig,
    apply_step,
    check_script,
    eval_config,
    lift_row,
)
from .exact import Weight, format_weight, parse_weight
from .harness import Certificate, SweepSpec, oracle_sum, sweep
from .lang import check_instance, eval_expr, format_identity, parse_identity
from .scripts import builtin_identity, catalog_list, generate_script
from .triangle import Coord, binom, binom_row, fib

__all__ = [
    "Certificate", "CheckReport", "Coord", "Drop", "Lift", "ProofScript", "ShiftRight",
    "StepError", "SwapSym", "SweepSpec", "Weight", "WeightedConfig", "apply_step", "binom",
    "binom_row", "builtin_identity", "catalog_list", "check_instance", "check_script",
    "eval_config", "eval_expr", "fib", "format_identity", "format_weight", "generate_script",
    "lift_row", "oracle_sum", "parse_identity", "parse_weight", "sweep",
]
