from ._merglift import (
    chi,
    counterexample_directional,
    differentiate,
    estimate_path_bound,
    evaluate,
    lift,
    numeric_derivative,
    parse_print,
)

__all__ = [
    "chi",
    "counterexample_directional",
    "differentiate",
    "estimate_path_bound",
    "evaluate",
    "lift",
    "numeric_derivative",
    "parse_print",
]
