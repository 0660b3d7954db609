"""Exact lower and upper bound games for online bin stretching."""

from fractions import Fraction

from . import _core
from ._core import (  # noqa: F401
    IllegalSequenceError,
    IncompleteStrategyError,
    InfeasibleItemError,
    MalformedTreeError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    StretchError,
    canonicalize,
    compute_g_prime_int,
    distinct_bin_moves,
    evaluate_lifted,
    find_packing,
    fits,
    g_prime_real,
    legal_items_lower,
    legal_moves_upper,
    repack_incremented,
    lift_playout,
    lower_proof,
    solve_lower,
    solve_upper,
    upper_proof,
    verify_proof,
)


def _rational(value):
    if isinstance(value, float):
        raise TypeError("pass an exact rational (Fraction, int or 'p/q'), not a float")
    if isinstance(value, (Fraction, int)):
        value = Fraction(value)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def optimum_lower_bound(u, g, m, ceil_gprime=False):
    """Lower bound on the optimal stretching factor implied by u_g."""
    return _core.optimum_lower_bound(_rational(u), g, m, ceil_gprime)


def sandwich_interval(l, g, m):
    """(lo, hi) sandwich around the optimum from the lower-game value at g'."""
    return _core.sandwich_interval(_rational(l), g, m)


__version__ = "0.1.0"
