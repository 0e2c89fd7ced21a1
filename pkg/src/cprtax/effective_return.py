"""Effective rate of return and the per-player critical quantities.

Every function here applies the player's tax sensitivity, so player ``i``
faces the effective rate ``gamma_i * t``.  With ``gamma_i = 1`` this is the
uniform-tax game.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateDenominator,
    EmptyRegion,
    NoPositiveReturn,
    NonpositiveDenominator,
    OutsideGainBranch,
)
from .model import DECREASING, INCREASING, GameInstance
from .roots import bisect_predicate, bisect_sign

KINK_GAP = 1e-10
LARGE_SLOPE_GAP = 1e-12
DENOM_EPS = 1e-14


def effective_tax(game: GameInstance, i: int, t: float) -> float:
    return game.players[i].gamma * t


def _f(game: GameInstance, i: int, x: float, tau: float) -> float:
    pl = game.players[i]
    if x >= 1.0:
        return -pl.k * (1.0 + tau) ** pl.alpha
    p = game.p.raw(x)
    margin = game.r.raw(x) - tau
    if margin >= 0.0:
        return margin**pl.alpha * (1.0 - p) - pl.k * (1.0 + tau) ** pl.alpha * p
    return -pl.k * ((-margin) ** pl.alpha * (1.0 - p) + (1.0 + tau) ** pl.alpha * p)


class Slope(NamedTuple):
    value: float
    large_magnitude: bool


def _f_x(game: GameInstance, i: int, x: float, tau: float) -> Slope:
    pl = game.players[i]
    if x > 1.0:
        return Slope(0.0, False)
    r, dr = game.r.raw(x), game.r.raw_deriv(x)
    p, dp = game.p.raw(x), game.p.raw_deriv(x)
    margin = r - tau
    if margin < 0.0:
        raise OutsideGainBranch(f"r({x}) = {r} below effective tax {tau}")
    a = pl.alpha
    loss_part = -(margin**a) * dp - pl.k * (1.0 + tau) ** a * dp
    if a == 1.0:
        return Slope(dr * (1.0 - p) + loss_part, False)
    if margin < LARGE_SLOPE_GAP:
        gain = dr * (1.0 - p)
        if gain == 0.0:
            return Slope(loss_part, False)
        return Slope(math.copysign(math.inf, gain), True)
    return Slope(a * margin ** (a - 1.0) * dr * (1.0 - p) + loss_part, False)


def f(game: GameInstance, i: int, x: float, t: float) -> float:
    """Effective rate of return of player ``i`` at utilization ``x``, tax ``t``."""
    return _f(game, i, x, effective_tax(game, i, t))


def f_x_flagged(game: GameInstance, i: int, x: float, t: float) -> Slope:
    """Analytic x-derivative of ``f`` plus a flag for the kink at the gain boundary."""
    return _f_x(game, i, x, effective_tax(game, i, t))


def f_x(game: GameInstance, i: int, x: float, t: float) -> float:
    return _f_x(game, i, x, effective_tax(game, i, t)).value


def f_values(game: GameInstance, i: int, xs, t: float) -> np.ndarray:
    """Vectorised ``f`` over an array of utilizations."""
    pl = game.players[i]
    tau = effective_tax(game, i, t)
    xs = np.asarray(xs, dtype=float)
    inside = np.minimum(xs, 1.0)
    p = game.p.values(inside)
    margin = game.r.raw(inside) - tau
    scale = (1.0 + tau) ** pl.alpha
    gain = np.abs(margin) ** pl.alpha * (1.0 - p) - pl.k * scale * p
    loss = -pl.k * (np.abs(margin) ** pl.alpha * (1.0 - p) + scale * p)
    out = np.where(margin >= 0.0, gain, loss)
    return np.where(xs >= 1.0, -pl.k * scale, out)


@dataclass(frozen=True)
class FeasibleRegion:
    direction: str
    lower: float
    upper: float

    def __contains__(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def _level_crossing(game: GameInstance, level: float) -> float:
    """Solve r(x) = level on [0, 1]; r is strictly monotone."""
    c = game.r.coefficients
    if len(c) == 2:
        return min(1.0, max(0.0, (level - c[0]) / c[1]))
    return bisect_sign(lambda x: game.r.raw(x) - level, 0.0, 1.0)


def _region(game: GameInstance, tau: float) -> FeasibleRegion:
    r0, r1 = game.r.raw(0.0), game.r.raw(1.0)
    if game.direction == DECREASING:
        if r0 < tau:
            raise EmptyRegion(f"r(0) = {r0} below effective tax {tau}")
        upper = 1.0 if r1 >= tau else _level_crossing(game, tau)
        return FeasibleRegion(DECREASING, 0.0, upper)
    if r1 < tau:
        raise EmptyRegion(f"r(1) = {r1} below effective tax {tau}")
    lower = 0.0 if r0 >= tau else _level_crossing(game, tau)
    return FeasibleRegion(INCREASING, lower, 1.0)


def feasible_region(game: GameInstance, i: int, t: float) -> FeasibleRegion:
    """Utilizations at which player ``i``'s return stays at or above her tax."""
    return _region(game, effective_tax(game, i, t))


@dataclass(frozen=True)
class CriticalQuantities:
    z: float
    z_hat: float
    y: float
    t_bar_i: float
    interval: tuple[float, float]
    interval_closed_left: bool = False
    f_max: float = 0.0

    @property
    def active(self) -> bool:
        return self.y > 0.0


def _peak(game: GameInstance, i: int, tau: float, region: FeasibleRegion) -> tuple[float, float]:
    """Maximizer of f over the feasible region and the maximum value."""
    if region.direction == DECREASING:
        return 0.0, _f(game, i, 0.0, tau)
    lo = region.lower
    if game.players[i].alpha < 1.0 and game.r.raw(lo) - tau < KINK_GAP:
        lo = min(lo + KINK_GAP, 1.0)
    slope = lambda x: _f_x(game, i, x, tau).value
    if lo >= 1.0 or slope(lo) <= 0.0:
        z = lo if lo < 1.0 else 1.0
    else:
        # strict concavity on the gain branch: the slope crosses zero once
        z = bisect_sign(slope, lo, 1.0)
    return z, _f(game, i, z, tau)


def _critical(game: GameInstance, i: int, tau: float) -> tuple[float, float, float, float]:
    try:
        region = _region(game, tau)
    except EmptyRegion:
        return 0.0, 0.0, 0.0, -math.inf
    z, fmax = _peak(game, i, tau, region)
    if fmax <= 0.0:
        return 0.0, 0.0, 0.0, fmax
    y = bisect_sign(lambda x: _f(game, i, x, tau), z, 1.0)
    alpha = game.players[i].alpha
    slope_z = _f_x(game, i, z, tau).value
    z_hat = z
    if z > 0.0 or slope_z >= 0.0:
        clamp = lambda x: alpha * _f(game, i, x, tau) + _f_x(game, i, x, tau).value
        if clamp(z) > 0.0:
            z_hat = bisect_sign(clamp, z, y)
    return z, z_hat, y, fmax


@lru_cache(maxsize=1024)
def _tau_bar(game: GameInstance, i: int) -> float:
    """Largest effective tax at which player ``i`` still sees a positive return."""
    if _critical(game, i, 0.0)[3] <= 0.0:
        return 0.0
    if game.direction == DECREASING:
        hi = game.r.raw(0.0)
    else:
        hi = game.r.raw(1.0)
    return bisect_predicate(lambda tau: _critical(game, i, tau)[3] <= 0.0, 0.0, hi)


def t_bar_i(game: GameInstance, i: int) -> float:
    """Tax ceiling of player ``i`` investing in isolation (inf if gamma_i = 0)."""
    gamma = game.players[i].gamma
    tau = _tau_bar(game, i)
    if gamma == 0.0:
        return math.inf if tau > 0.0 else 0.0
    return tau / gamma


def t_bar(game: GameInstance) -> float:
    value = max(t_bar_i(game, i) for i in range(game.n))
    if value <= 0.0:
        raise NoPositiveReturn("no player has a positive effective return at t = 0")
    return value


@lru_cache(maxsize=65536)
def critical_points(game: GameInstance, i: int, t: float) -> CriticalQuantities:
    """Peak ``z``, clamp point ``z_hat`` and zero crossing ``y`` for player ``i``."""
    tau = effective_tax(game, i, t)
    z, z_hat, y, fmax = _critical(game, i, tau)
    decreasing = game.direction == DECREASING
    return CriticalQuantities(
        z=z,
        z_hat=z_hat,
        y=y,
        t_bar_i=t_bar_i(game, i),
        interval=(z, y),
        interval_closed_left=decreasing,
        f_max=fmax,
    )


def g(game: GameInstance, i: int, x: float, t: float) -> float:
    """Investment that satisfies the player's first-order condition at total ``x``."""
    slope = f_x(game, i, x, t)
    if abs(slope) < DENOM_EPS:
        raise DegenerateDenominator(f"f_x vanishes at x={x}")
    return game.players[i].alpha * f(game, i, x, t) / (-slope)


def g_hat(game: GameInstance, i: int, x: float, t: float) -> float:
    """Bounded, non-increasing extension of ``g`` to all of [0, 1]."""
    cq = critical_points(game, i, t)
    if x >= cq.y:
        return 0.0
    if game.direction == INCREASING and x < cq.z_hat:
        return 1.0
    return g(game, i, x, t)


def q(game: GameInstance, i: int, x: float, t: float) -> float:
    """Loss-aversion threshold above which ``g_i`` falls with the tax rate."""
    if game.direction != INCREASING:
        raise ValueError("q is defined for increasing rate of return only")
    tau = effective_tax(game, i, t)
    a = game.players[i].alpha
    r, dr = game.r.raw(x), game.r.raw_deriv(x)
    p, dp = game.p.raw(min(x, 1.0)), game.p.raw_deriv(min(x, 1.0))
    if r - tau <= 0.0:
        raise OutsideGainBranch(f"q needs r(x) > effective tax at x={x}")
    denom = (r + 1.0) * dp - a * dr * (1.0 - p) * p
    if denom <= 0.0:
        raise NonpositiveDenominator(f"q denominator {denom} at x={x}, t={t}")
    return dr * (1.0 - p) ** 2 / denom * ((1.0 + tau) / (r - tau)) ** (1.0 - a)
