"""Social welfare and the untaxed social optimum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from . import effective_return as er
from .equilibrium import solve_pne
from .errors import InvariantViolation
from .model import GameInstance
from .roots import golden_max

OPT_SLACK = 1e-6
STARTS = 32
GRID_AXIS = 21
STEP0 = 1e-2
MAX_ITER = 10_000
SCAN_STEP = 1e-4
X_FLOOR = 1e-12


@dataclass(frozen=True)
class WelfareResult:
    profile: tuple[float, ...]
    x_opt: float
    psi: float
    method: str


def social_welfare(game: GameInstance, profile: Sequence[float], t: float = 0.0) -> float:
    """Sum of the players' expected prospect utilities at ``profile``."""
    total = math.fsum(profile)
    return math.fsum(
        xi ** pl.alpha * er.f(game, i, total, t)
        for i, (pl, xi) in enumerate(zip(game.players, profile))
        if xi > 0.0
    )


def _loss_slope(game: GameInstance, i: int, x: float, tau: float) -> float:
    pl = game.players[i]
    gap = tau - game.r.raw(x)
    p, dp = game.p.raw(x), game.p.raw_deriv(x)
    dr = game.r.raw_deriv(x)
    core = -pl.alpha * gap ** (pl.alpha - 1.0) * dr * (1.0 - p) - gap**pl.alpha * dp
    return -pl.k * (core + (1.0 + tau) ** pl.alpha * dp)


def _slope_any_branch(game: GameInstance, i: int, x: float, t: float) -> float:
    tau = er.effective_tax(game, i, t)
    if x > 1.0:
        return 0.0
    if game.r.raw(x) >= tau:
        return er.f_x(game, i, x, t)
    return _loss_slope(game, i, x, tau)


def welfare_gradient(game: GameInstance, profile: Sequence[float], t: float = 0.0) -> np.ndarray:
    """Partial derivatives of social welfare in each player's investment."""
    total = math.fsum(profile)
    fs = [er.f(game, i, total, t) for i in range(game.n)]
    spill = math.fsum(
        max(xi, 0.0) ** pl.alpha * _slope_any_branch(game, i, total, t)
        for i, (pl, xi) in enumerate(zip(game.players, profile))
    )
    grad = np.empty(game.n)
    for i, (pl, xi) in enumerate(zip(game.players, profile)):
        xi = max(xi, X_FLOOR)
        grad[i] = pl.alpha * xi ** (pl.alpha - 1.0) * fs[i] + spill
    return grad


def _ascend(game: GameInstance, start: np.ndarray) -> tuple[np.ndarray, float]:
    """Projected gradient ascent on [0, 1]^n with step halving."""
    x = np.clip(start, 0.0, 1.0)
    val = social_welfare(game, x)
    step = STEP0
    for _ in range(MAX_ITER):
        grad = welfare_gradient(game, x)
        while step > 1e-16:
            cand = np.clip(x + step * grad, 0.0, 1.0)
            cand_val = social_welfare(game, cand)
            if cand_val > val:
                break
            step *= 0.5
        else:
            break
        moved = float(np.max(np.abs(cand - x)))
        x, val = cand, cand_val
        step = min(step * 2.0, 1.0)
        if moved < 1e-13:
            break
    return x, val


def _line_max(fn, lo: float = 0.0, hi: float = 1.0) -> tuple[float, float]:
    xs = np.arange(lo, hi + SCAN_STEP / 2, SCAN_STEP)
    vals = [fn(x) for x in xs]
    k = int(np.argmax(vals))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
    _, _, best = golden_max(fn, a, b)
    return best, fn(best)


def _homogeneous(game: GameInstance) -> bool:
    first = game.players[0]
    return all(pl == first for pl in game.players)


def _reduced_optimum(game: GameInstance) -> WelfareResult:
    n = game.n
    pl = game.players[0]
    # equal split is optimal for a fixed total whenever the common return is positive
    sym_x, sym_val = _line_max(lambda x: social_welfare(game, [x / n] * n))
    solo_x, solo_val = _line_max(lambda x: social_welfare(game, [x] + [0.0] * (n - 1)))
    if sym_val <= 0.0 and solo_val <= 0.0:
        return WelfareResult(tuple([0.0] * n), 0.0, 0.0, "reduced")
    if sym_val >= solo_val or pl.alpha == 1.0:
        profile = tuple([sym_x / n] * n)
        return WelfareResult(profile, math.fsum(profile), sym_val, "reduced")
    profile = tuple([solo_x] + [0.0] * (n - 1))
    return WelfareResult(profile, solo_x, solo_val, "reduced")


def _grid_starts(n: int) -> list[np.ndarray]:
    if n > 3:
        return []
    axis = np.linspace(0.0, 1.0, GRID_AXIS)
    return [np.array(pt) for pt in product(axis, repeat=n) if sum(pt) <= 1.0 + 1e-12]


def multistart_optimum(game: GameInstance, starts: int = STARTS, seed: int = 0) -> WelfareResult:
    """Best projected-gradient ascent over random starts plus a coarse grid seed."""
    rng = np.random.default_rng(seed)
    n = game.n
    inits = [rng.dirichlet(np.ones(n)) * rng.uniform(0.05, 1.0) for _ in range(starts)]
    grid = _grid_starts(n)
    if grid:
        vals = [social_welfare(game, pt) for pt in grid]
        inits.append(grid[int(np.argmax(vals))])
    best_x, best_val = np.zeros(n), 0.0
    for init in inits:
        x, val = _ascend(game, init)
        if val > best_val:
            best_x, best_val = x, val
    profile = tuple(float(v) for v in best_x)
    return WelfareResult(profile, math.fsum(profile), best_val, "multistart")


def social_optimum(game: GameInstance, seed: int = 0) -> WelfareResult:
    """Welfare-maximizing profile at zero tax."""
    if _homogeneous(game):
        return _reduced_optimum(game)
    return multistart_optimum(game, seed=seed)


@dataclass(frozen=True)
class OptimumComparison:
    x_opt: float
    x_ne: float
    holds: bool


def check_opt_leq_ne(game: GameInstance, seed: int = 0) -> OptimumComparison:
    """Social-optimum utilization never exceeds the untaxed equilibrium utilization."""
    x_opt = social_optimum(game, seed=seed).x_opt
    x_ne = solve_pne(game, 0.0).x_ne
    holds = x_opt <= x_ne + OPT_SLACK
    if not holds:
        raise InvariantViolation(f"x_opt={x_opt:.9g} exceeds x_ne(0)={x_ne:.9g}")
    return OptimumComparison(x_opt, x_ne, holds)
