"""Scalar bracketing primitives shared by every solver in the package."""

from __future__ import annotations

import math
from typing import Callable

from .errors import NoConvergence

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

XTOL = 1e-12
MAXITER = 200


def bisect_sign(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = XTOL,
    maxiter: int = MAXITER,
) -> float:
    """Root of ``fn`` on ``[lo, hi]`` where ``fn(lo) > 0 >= fn(hi)`` or the reverse.

    Only the sign of ``fn`` at ``lo`` is used to orient the bracket, so the
    function need not be evaluated at ``hi`` (useful when ``hi`` sits on a
    singularity).
    """
    lo_positive = fn(lo) > 0.0
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if (fn(mid) > 0.0) == lo_positive:
            lo = mid
        else:
            hi = mid
    else:
        if hi - lo > xtol:
            raise NoConvergence(f"bisection stalled on [{lo}, {hi}]")
    return 0.5 * (lo + hi)


def bisect_predicate(
    pred: Callable[[float], bool],
    lo: float,
    hi: float,
    xtol: float = XTOL,
    maxiter: int = MAXITER,
) -> float:
    """Boundary of a monotone predicate: false at ``lo``, true at ``hi``.

    Returns the smallest point (to ``xtol``) at which ``pred`` holds.
    """
    for _ in range(maxiter):
        if hi - lo <= xtol:
            return hi
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    raise NoConvergence(f"predicate bisection stalled on [{lo}, {hi}]")


def golden_max(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = XTOL,
    maxiter: int = MAXITER,
) -> tuple[float, float, float]:
    """Golden-section search for the maximum of a unimodal ``fn`` on ``[lo, hi]``.

    Returns ``(lo, hi, x_best)`` where ``[lo, hi]`` is the final bracket.
    Endpoints are compared against the interior estimate so a monotone
    function yields the correct boundary maximizer.
    """
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = fn(d)
    best = c if fc >= fd else d
    fbest = max(fc, fd)
    for edge in (lo, hi):
        fe = fn(edge)
        if fe > fbest:
            best, fbest = edge, fe
    return a, b, best
