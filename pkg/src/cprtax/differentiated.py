"""Player-specific tax sensitivities and the uniform-tax comparison."""

from __future__ import annotations

from dataclasses import dataclass

from . import effective_return as er
from .equilibrium import EquilibriumResult, solve_pne
from .errors import DegenerateDenominator, HeterogeneousK, InvariantViolation
from .model import GameInstance

ORDER_SLACK = 1e-8
DENOM_EPS = 1e-14

HOLDS = "holds"
OUTSIDE = "outside theorem hypotheses"


def solve_pne_gamma(game: GameInstance, t: float) -> EquilibriumResult:
    """Equilibrium when player ``i`` faces the tax rate ``gamma_i * t``."""
    return solve_pne(game, t)


def _common_k(game: GameInstance) -> float:
    ks = {pl.k for pl in game.players}
    if len(ks) != 1:
        raise HeterogeneousK(f"players differ in loss aversion: {sorted(ks)}")
    return ks.pop()


def f_hat_and_v(game: GameInstance, x: float) -> tuple[float, float]:
    """Tax-free part of the return and the per-unit tax weight at utilization ``x``."""
    k = _common_k(game)
    p, r = game.p(x), game.r.raw(min(x, 1.0))
    return r * (1.0 - p) - k * p, 1.0 + (k - 1.0) * p


def _derivs(game: GameInstance, x: float) -> tuple[float, float]:
    k = _common_k(game)
    p, dp = game.p(x), game.p.deriv(x)
    r, dr = game.r.raw(x), game.r.raw_deriv(x)
    return dr * (1.0 - p) - r * dp - k * dp, (k - 1.0) * dp


def h_gamma(game: GameInstance, x: float, t: float, gamma: float) -> float:
    """Investment a player with sensitivity ``gamma`` would make at total ``x`` (linear utility)."""
    fh, v = f_hat_and_v(game, x)
    dfh, dv = _derivs(game, x)
    denom = -dfh + gamma * t * dv
    if abs(denom) < DENOM_EPS:
        raise DegenerateDenominator(f"denominator vanishes at x={x}, gamma={gamma}")
    return (fh - gamma * t * v) / denom


@dataclass(frozen=True)
class GammaComparison:
    gammas: tuple[float, ...]
    gamma_mean: float
    x_h: float
    x_m: float
    revenue_h: float
    revenue_m: float
    supports: tuple[frozenset[int], frozenset[int]]
    status: str

    @property
    def full_supports(self) -> bool:
        n = len(self.gammas)
        return all(len(s) == n for s in self.supports)


def _hypotheses(game: GameInstance, uniform: GameInstance, t: float) -> bool:
    if not all(pl.alpha == 1.0 for pl in game.players):
        return False
    ks = {pl.k for pl in game.players}
    if len(ks) != 1 or ks.pop() <= 1.0:
        return False
    return t < er.t_bar_i(uniform, 0)


def compare_uniform(game: GameInstance, t: float) -> GammaComparison:
    """Solve the game with its own sensitivities and with every player at the mean."""
    gammas = tuple(pl.gamma for pl in game.players)
    mean = sum(gammas) / len(gammas)
    uniform = game.with_gammas([mean] * game.n)
    het, uni = solve_pne(game, t), solve_pne(uniform, t)
    cmp = GammaComparison(
        gammas=gammas,
        gamma_mean=mean,
        x_h=het.x_ne,
        x_m=uni.x_ne,
        revenue_h=het.revenue,
        revenue_m=uni.revenue,
        supports=(het.support, uni.support),
        status=OUTSIDE,
    )
    if not _hypotheses(game, uniform, t):
        return cmp
    if cmp.x_m > cmp.x_h + ORDER_SLACK:
        raise InvariantViolation(f"uniform utilization {cmp.x_m:.9g} exceeds {cmp.x_h:.9g}")
    if cmp.full_supports and cmp.revenue_m < cmp.revenue_h - ORDER_SLACK:
        raise InvariantViolation(f"uniform revenue {cmp.revenue_m:.9g} below {cmp.revenue_h:.9g}")
    return GammaComparison(**{**cmp.__dict__, "status": HOLDS})
