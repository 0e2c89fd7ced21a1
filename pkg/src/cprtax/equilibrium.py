"""Pure Nash equilibrium of the taxed game and independent cross-checks.

``solve_pne`` finds the utilization as the root of the strictly increasing
map ``x - sum_i g_hat_i(x, t)``.  ``best_response`` and
``best_response_dynamics`` work player by player from the first-order
condition; ``best_response_grid`` is a brute-force oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import effective_return as er
from .errors import NoConvergence
from .model import GameInstance
from .roots import bisect_sign, golden_max

FOC_TOL = 1e-7
RESIDUAL_TOL = 1e-9
CONDITIONED_TOL = 1e-6
SUPPORT_GAP = 1e-10
BR_GRID_STEP = 1e-4
DYNAMICS_TOL = 1e-10


@dataclass(frozen=True)
class EquilibriumResult:
    t: float
    x_ne: float
    investments: tuple[float, ...]
    support: frozenset[int]
    fragility: float
    revenue: float
    foc_residuals: dict[int, float]
    residual: float

    @property
    def support_size(self) -> int:
        return len(self.support)


def expected_utility(game: GameInstance, i: int, x_i: float, xbar_minus: float, t: float) -> float:
    if x_i <= 0.0:
        return 0.0
    return x_i ** game.players[i].alpha * er.f(game, i, x_i + xbar_minus, t)


def _foc(game: GameInstance, i: int, x_i: float, total: float, t: float) -> float:
    return x_i * er.f_x(game, i, total, t) + game.players[i].alpha * er.f(game, i, total, t)


def best_response(game: GameInstance, i: int, xbar_minus: float, t: float) -> float:
    """Unique utility-maximizing investment of player ``i`` given the others' total."""
    cq = er.critical_points(game, i, t)
    if xbar_minus >= cq.y:
        return 0.0
    lo = max(0.0, cq.z - xbar_minus)
    hi = cq.y - xbar_minus
    if hi - lo <= 0.0:
        return lo
    # strictly positive at lo, negative at hi: the response sum lands in (z, y)
    return bisect_sign(lambda x: _foc(game, i, x, x + xbar_minus, t), lo, hi)


def best_response_grid(game: GameInstance, i: int, xbar_minus: float, t: float, step: float = BR_GRID_STEP) -> float:
    """Brute-force maximizer of expected utility over a uniform grid, then refined."""
    alpha = game.players[i].alpha
    xs = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    util = xs**alpha * er.f_values(game, i, xs + xbar_minus, t)
    util[0] = 0.0
    k = int(np.argmax(util))
    if util[k] <= 0.0:
        return 0.0
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
    _, _, best = golden_max(lambda x: expected_utility(game, i, x, xbar_minus, t), lo, hi)
    return best


def aggregate_response(game: GameInstance, x: float, t: float) -> float:
    return sum(er.g_hat(game, i, x, t) for i in range(game.n))


def aggregate_residual(game: GameInstance, x: float, t: float) -> float:
    """Non-positive score whose unique maximizer (value 0) is the utilization."""
    return -((x - aggregate_response(game, x, t)) ** 2)


def _result(
    game: GameInstance, t: float, x_ne: float, investments: Sequence[float], residual: float
) -> EquilibriumResult:
    support = frozenset(i for i, xi in enumerate(investments) if xi > 0.0)
    residuals = {i: abs(_foc(game, i, investments[i], x_ne, t)) for i in sorted(support)}
    revenue = sum(pl.gamma * t * xi for pl, xi in zip(game.players, investments))
    return EquilibriumResult(
        t=t,
        x_ne=x_ne,
        investments=tuple(investments),
        support=support,
        fragility=game.p.values(np.array(x_ne)).item(),
        revenue=revenue,
        foc_residuals=residuals,
        residual=residual,
    )


def solve_pne(game: GameInstance, t: float) -> EquilibriumResult:
    """Unique pure Nash equilibrium at tax rate ``t``."""
    if t < 0.0:
        raise ValueError("tax rate must be non-negative")
    if aggregate_response(game, 0.0, t) <= 0.0:
        return _result(game, t, 0.0, [0.0] * game.n, 0.0)
    # bisect to machine precision: the aggregate response is steep near t_bar
    root = bisect_sign(lambda x: aggregate_response(game, x, t) - x, 0.0, 1.0, xtol=0.0)
    investments = _responses(game, root, t)
    residual = abs(root - math.fsum(investments))
    x_ne = root
    if residual > RESIDUAL_TOL:
        # adjacent floats straddle the root: interpolate the response vectors
        investments = _straddle(game, root, investments, t)
        x_ne = math.fsum(investments)
        residual = abs(x_ne - root)
        if residual > CONDITIONED_TOL:
            raise NoConvergence(f"fixed-point residual {residual:.3g} at t={t}")
    return _result(game, t, x_ne, investments, residual)


def _responses(game: GameInstance, x: float, t: float) -> list[float]:
    out = []
    for i in range(game.n):
        cq = er.critical_points(game, i, t)
        out.append(er.g_hat(game, i, x, t) if x < cq.y else 0.0)
    return out


def _straddle(game: GameInstance, root: float, at_root: list[float], t: float) -> list[float]:
    gap = math.fsum(at_root) - root
    partner = math.nextafter(root, 1.0 if gap > 0.0 else 0.0)
    at_partner = _responses(game, partner, t)
    gap_partner = math.fsum(at_partner) - partner
    if gap * gap_partner > 0.0:
        return at_root
    lam = gap / (gap - gap_partner)
    return [(1.0 - lam) * a + lam * b for a, b in zip(at_root, at_partner)]


def solve_pne_gamma(game: GameInstance, t: float) -> EquilibriumResult:
    """Equilibrium where player ``i`` pays ``gamma_i * t``; the solver is sensitivity-aware."""
    return solve_pne(game, t)


@dataclass
class Trajectory:
    steps: list[tuple[int, tuple[float, ...], float]] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0

    @property
    def final(self) -> tuple[float, ...]:
        return self.steps[-1][1]

    @property
    def utilization(self) -> float:
        return self.steps[-1][2]


def best_response_dynamics(
    game: GameInstance, t: float, init: Sequence[float], max_iter: int = 10_000
) -> Trajectory:
    """Round-robin best-response updates in fixed player order."""
    x = [float(v) for v in init]
    if len(x) != game.n or any(not 0.0 <= v <= 1.0 for v in x):
        raise ValueError("init must hold one investment in [0, 1] per player")
    traj = Trajectory(steps=[(0, tuple(x), math.fsum(x))])
    for it in range(1, max_iter + 1):
        moved = 0.0
        for i in range(game.n):
            others = math.fsum(x) - x[i]
            new = best_response(game, i, max(others, 0.0), t)
            moved = max(moved, abs(new - x[i]))
            x[i] = new
        if moved < DYNAMICS_TOL:
            traj.converged = True
            traj.iterations = it - 1
            return traj
        traj.steps.append((it, tuple(x), math.fsum(x)))
        traj.iterations = it
    return traj
