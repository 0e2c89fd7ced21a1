"""Tax-rate sweeps, jump detection, monotonicity certificates and tax design."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from . import effective_return as er
from .equilibrium import EquilibriumResult, solve_pne
from .errors import CPRError, NotAchievable
from .model import DECREASING, GameInstance
from .roots import bisect_predicate, golden_max
from .welfare import social_optimum

JUMP_REFINE = 1e-5
BAR_STANDOFF = 1e-6
OBJECTIVE_STANDOFF = 1e-4
OBJECTIVE_POINTS = 2000
SCAN_CELLS = 2000

PROP3 = "prop3_q_condition"
PROP4 = "prop4_classical"
PROP5 = "prop5_decreasing"
NONE = "none"


@dataclass(frozen=True)
class SweepRow:
    t: float
    x_ne: float
    fragility: float
    revenue: float
    support_size: int
    investments: tuple[float, ...]

    @classmethod
    def from_result(cls, res: EquilibriumResult) -> "SweepRow":
        return cls(res.t, res.x_ne, res.fragility, res.revenue, res.support_size, res.investments)


def sweep(game: GameInstance, t_grid: Sequence[float]) -> list[SweepRow]:
    """Solve the equilibrium at every grid point, in grid order."""
    ts = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be strictly increasing")
    rows = []
    for t in ts:
        try:
            rows.append(SweepRow.from_result(solve_pne(game, t)))
        except CPRError as exc:
            raise type(exc)(f"at t={t}: {exc}") from exc
    return rows


def uniform_grid(t_min: float, t_max: float, step: float) -> np.ndarray:
    count = int(math.floor((t_max - t_min) / step + 1e-9)) + 1
    return t_min + step * np.arange(count)


@dataclass(frozen=True)
class Jump:
    t: float
    jump: float
    bracket: tuple[float, float]


def jump_threshold(step: float) -> float:
    return max(10.0 * step, 0.02)


def _refine_jump(game: GameInstance, a: float, b: float, xa: float, xb: float) -> Jump:
    while b - a > JUMP_REFINE:
        mid = 0.5 * (a + b)
        xm = solve_pne(game, mid).x_ne
        if abs(xm - xa) >= abs(xb - xm):
            b, xb = mid, xm
        else:
            a, xa = mid, xm
    return Jump(0.5 * (a + b), xb - xa, (a, b))


def detect_discontinuities(
    rows: Sequence[SweepRow], step: float, game: GameInstance | None = None
) -> list[Jump]:
    """Adjacent rows whose utilization differs by more than the jump threshold.

    With ``game`` supplied each flagged cell is narrowed by bisection so the
    reported location is accurate to ``JUMP_REFINE`` in t.
    """
    thr = jump_threshold(step)
    found = []
    for lo, hi in zip(rows, rows[1:]):
        if abs(hi.x_ne - lo.x_ne) <= thr:
            continue
        if game is None:
            found.append(Jump(0.5 * (lo.t + hi.t), hi.x_ne - lo.x_ne, (lo.t, hi.t)))
        else:
            found.append(_refine_jump(game, lo.t, hi.t, lo.x_ne, hi.x_ne))
    return found


@dataclass(frozen=True)
class MonotonicityCertificate:
    kind: str
    holds: bool
    witnesses: dict[int, tuple[float, float]] = field(default_factory=dict)


def _classical(game: GameInstance) -> bool:
    return all(pl.alpha == 1.0 and pl.k >= 1.0 for pl in game.players)


def _q_condition(game: GameInstance, t1: float, t2: float) -> MonotonicityCertificate:
    x2 = solve_pne(game, t2).x_ne
    witnesses = {}
    holds = True
    for i, pl in enumerate(game.players):
        try:
            lower = er.feasible_region(game, i, t1).lower
            qi = er.q(game, i, x2, t1)
        except (CPRError, ValueError):
            return MonotonicityCertificate(NONE, False, witnesses)
        witnesses[i] = (pl.k, qi)
        if not (x2 > lower and pl.k > qi):
            holds = False
    if holds:
        return MonotonicityCertificate(PROP3, True, witnesses)
    return MonotonicityCertificate(NONE, False, witnesses)


def monotonicity_certificate(game: GameInstance, t1: float, t2: float) -> MonotonicityCertificate:
    """Sufficient condition for x_ne(t1) <= x_ne(t2) when t2 < t1."""
    if not t2 < t1:
        raise ValueError("expected t2 < t1")
    if game.direction == DECREASING:
        return MonotonicityCertificate(PROP5, True)
    if _classical(game):
        return MonotonicityCertificate(PROP4, True)
    return _q_condition(game, t1, t2)


@dataclass(frozen=True)
class AchievableRange:
    j: int | None
    t_bar_min: float
    x_bar_j: float | None
    interval: tuple[float, float]
    opt_achievable: bool
    x_opt: float
    x_ne0: float


def achievable_range(game: GameInstance, seed: int = 0) -> AchievableRange:
    """Utilizations reachable by some tax rate and whether the optimum is among them."""
    x_ne0 = solve_pne(game, 0.0).x_ne
    x_opt = social_optimum(game, seed=seed).x_opt
    bars = [er.t_bar_i(game, i) for i in range(game.n)]
    if game.direction == DECREASING:
        return AchievableRange(None, min(bars), None, (0.0, x_ne0), True, x_opt, x_ne0)
    j = int(np.argmin(bars))
    x_bar = er.critical_points(game, j, bars[j] - BAR_STANDOFF).z
    lo, hi = sorted((x_bar, x_ne0))
    return AchievableRange(j, bars[j], x_bar, (lo, hi), x_bar < x_opt, x_opt, x_ne0)


def _ceiling(game: GameInstance) -> float:
    bar = er.t_bar(game)
    return bar if math.isfinite(bar) else max(er.t_bar_i(game, i) for i in range(game.n) if game.players[i].gamma > 0)


def _limit_only(game: GameInstance, t: float) -> bool:
    """True when ``t`` sits just below a ceiling, where utilization is only a limit."""
    if game.direction == DECREASING:
        return False
    return any(0.0 <= er.t_bar_i(game, i) - t < BAR_STANDOFF for i in range(game.n))


def _design_monotone(game: GameInstance, x_star: float, tol: float, t_hi: float) -> float:
    x_hi = solve_pne(game, t_hi).x_ne
    if x_hi > x_star + tol:
        raise NotAchievable(x_star, t_hi, x_hi)
    t = bisect_predicate(lambda s: solve_pne(game, s).x_ne <= x_star + tol, 0.0, t_hi)
    x = solve_pne(game, t).x_ne
    if abs(x - x_star) > tol or _limit_only(game, t):
        raise NotAchievable(x_star, t, x)
    return t


def _design_scan(game: GameInstance, x_star: float, tol: float, t_hi: float) -> float:
    ts = np.linspace(0.0, t_hi, SCAN_CELLS + 1)
    xs = [solve_pne(game, t).x_ne for t in ts]
    for a, b, xa, xb in zip(ts, ts[1:], xs, xs[1:]):
        if abs(xa - x_star) <= tol:
            return float(a)
        if (xa - x_star) * (xb - x_star) > 0.0:
            continue
        above = xa > x_star
        t = bisect_predicate(lambda s: (solve_pne(game, s).x_ne > x_star) != above, a, b)
        for cand in (t, t - 1e-12):
            x = solve_pne(game, max(cand, 0.0)).x_ne
            if abs(x - x_star) <= tol and not _limit_only(game, cand):
                return float(max(cand, 0.0))
    k = int(np.argmin([abs(x - x_star) for x in xs]))
    raise NotAchievable(x_star, float(ts[k]), xs[k])


def design_tax(game: GameInstance, x_star: float, tol: float = 1e-6) -> float:
    """Smallest tax rate whose equilibrium utilization is within ``tol`` of ``x_star``.

    Raises ``NotAchievable`` carrying the nearest attainable point otherwise.
    """
    if not 0.0 <= x_star <= 1.0:
        raise ValueError("target utilization must lie in [0, 1]")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    x0 = solve_pne(game, 0.0).x_ne
    if abs(x0 - x_star) <= tol:
        return 0.0
    t_hi = _ceiling(game)
    if game.direction == DECREASING or _classical(game):
        return _design_monotone(game, x_star, tol, t_hi)
    return _design_scan(game, x_star, tol, t_hi)


Objective = Union[str, Callable[[float, float], float]]


def default_t_max(game: GameInstance) -> float:
    if game.direction == DECREASING:
        return er.t_bar(game)
    return min(er.t_bar_i(game, i) for i in range(game.n)) - OBJECTIVE_STANDOFF


def _objective(game: GameInstance, w: Objective) -> Callable[[float], float]:
    if w == "revenue":
        return lambda t: solve_pne(game, t).revenue
    if isinstance(w, str):
        raise ValueError(f"unknown built-in objective {w!r}")
    return lambda t: float(w(solve_pne(game, t).x_ne, t))


def maximize_objective(
    game: GameInstance, w: Objective = "revenue", t_max: float | None = None
) -> tuple[float, float]:
    """Tax rate maximizing ``w(x_ne(t), t)`` on ``[0, t_max]``."""
    if t_max is None:
        t_max = default_t_max(game)
    fn = _objective(game, w)
    ts = np.linspace(0.0, t_max, OBJECTIVE_POINTS)
    vals = [fn(t) for t in ts]
    k = int(np.argmax(vals))
    best_t, best_val = float(ts[k]), vals[k]
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]
    _, _, t_ref = golden_max(fn, lo, hi)
    v_ref = fn(t_ref)
    if v_ref > best_val:
        best_t, best_val = float(t_ref), v_ref
    return best_t, best_val
