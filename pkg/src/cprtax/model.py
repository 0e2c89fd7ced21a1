"""Curves, player preferences and validated game instances.

A game is a failure probability ``p`` and a net rate of return ``r`` on
total utilization in [0, 1], plus a list of prospect-theoretic players.
Admissibility is checked numerically on a uniform grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import AssumptionViolation, ConfigError, CurveEvaluationError, EmptyPlayerList

GRID_POINTS = 1001
GRID_TOL = 1e-9
MIDPOINT_TOL = 1e-12
MAX_DEGREE = 8
X_MAX = 1.5

INCREASING = "increasing"
DECREASING = "decreasing"


@dataclass(frozen=True)
class Curve:
    """Polynomial on [0, 1] with coefficients in ascending powers."""

    coefficients: tuple[float, ...]
    kind: str = "polynomial"
    clamp_at_one: bool = False

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("curve needs at least one coefficient")
        if self.kind not in ("polynomial", "affine"):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        limit = 1 if self.kind == "affine" else MAX_DEGREE
        if len(coeffs) - 1 > limit:
            raise ValueError(f"{self.kind} curve has degree {len(coeffs) - 1} > {limit}")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("curve coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def polynomial(cls, coeffs: Sequence[float], clamp_at_one: bool = False) -> "Curve":
        kind = "affine" if len(coeffs) <= 2 else "polynomial"
        return cls(tuple(coeffs), kind, clamp_at_one)

    @classmethod
    def affine(cls, intercept: float, slope: float, clamp_at_one: bool = False) -> "Curve":
        return cls((intercept, slope), "affine", clamp_at_one)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def raw(self, x):
        """Unclamped Horner evaluation; works on floats and numpy arrays."""
        acc = 0.0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def raw_deriv(self, x):
        acc = 0.0 * x
        for power in range(self.degree, 0, -1):
            acc = acc * x + power * self.coefficients[power]
        return acc

    def __call__(self, x: float) -> float:
        return curve_eval(self, x)

    def deriv(self, x: float) -> float:
        return curve_deriv(self, x)

    def values(self, xs: np.ndarray) -> np.ndarray:
        v = self.raw(np.asarray(xs, dtype=float))
        if self.clamp_at_one:
            v = np.where(xs >= 1.0, np.minimum(v, 1.0), v)
        return v

    def derivs(self, xs: np.ndarray) -> np.ndarray:
        d = self.raw_deriv(np.asarray(xs, dtype=float))
        if self.clamp_at_one:
            d = np.where(xs > 1.0, 0.0, d)
        return d


def curve_eval(c: Curve, x: float) -> float:
    if not -1e-12 <= x <= X_MAX:
        raise CurveEvaluationError(f"argument {x} outside [0, {X_MAX}]")
    v = c.raw(x)
    if c.clamp_at_one and x >= 1.0:
        v = min(v, 1.0)
    if not math.isfinite(v):
        raise CurveEvaluationError(f"non-finite curve value at {x}")
    return v


def curve_deriv(c: Curve, x: float) -> float:
    # left derivative at x == 1; the clamped curve is flat beyond it
    if c.clamp_at_one and x > 1.0:
        return 0.0
    d = c.raw_deriv(x)
    if not math.isfinite(d):
        raise CurveEvaluationError(f"non-finite curve slope at {x}")
    return d


@dataclass(frozen=True)
class PlayerPrefs:
    alpha: float = 1.0
    k: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.k > 0.0:
            raise ValueError(f"k must be positive, got {self.k}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")


@dataclass(frozen=True)
class Violation:
    prop: str
    witness: float
    observed: float


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def format(self) -> str:
        if self.passed:
            return "validation passed"
        lines = ["validation failed:"]
        for v in self.violations:
            lines.append(f"  {v.prop}: at x={v.witness:.6g} observed {v.observed:.6g}")
        return "\n".join(lines)


def prospect_value(z: float, z0: float, alpha: float, k: float) -> float:
    """Reference-dependent value: concave gains, loss-averse convex losses."""
    if z >= z0:
        return (z - z0) ** alpha
    return -k * (z0 - z) ** alpha


def _grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, GRID_POINTS)


def _midpoint_gap(values: np.ndarray, half_values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(f(a)+f(b))/2 - f((a+b)/2) over all grid pairs, with the pair midpoints."""
    n = len(values)
    idx = np.arange(n)
    gap = 0.5 * (values[:, None] + values[None, :]) - half_values[idx[:, None] + idx[None, :]]
    mids = (idx[:, None] + idx[None, :]) / (2.0 * (n - 1))
    return gap, mids


@lru_cache(maxsize=256)
def check_probability(p: Curve) -> tuple[Violation, ...]:
    xs = _grid()
    half = np.linspace(0.0, 1.0, 2 * GRID_POINTS - 1)
    # convexity and monotonicity only required on [0, 1)
    vals = p.raw(xs)
    found: list[Violation] = []
    if vals[0] < -GRID_TOL:
        found.append(Violation("p_nonnegative", 0.0, float(vals[0])))
    if abs(vals[-1] - 1.0) > GRID_TOL:
        found.append(Violation("p_one_at_one", 1.0, float(vals[-1])))
    steps = np.diff(vals)
    bad = np.flatnonzero(steps <= 0.0)
    if bad.size:
        i = int(bad[0])
        found.append(Violation("p_strictly_increasing", float(xs[i]), float(steps[i])))
    gap, mids = _midpoint_gap(vals, p.raw(half))
    worst = np.unravel_index(np.argmin(gap), gap.shape)
    if gap[worst] < -MIDPOINT_TOL:
        found.append(Violation("p_convex", float(mids[worst]), float(gap[worst])))
    if not np.all(np.isfinite(vals)):
        found.append(Violation("p_finite", float(xs[np.argmax(~np.isfinite(vals))]), math.nan))
    return tuple(found)


@lru_cache(maxsize=256)
def check_return(r: Curve) -> tuple[Violation, ...]:
    xs = _grid()
    half = np.linspace(0.0, 1.0, 2 * GRID_POINTS - 1)
    vals = r.raw(xs)
    slopes = r.raw_deriv(xs)
    found: list[Violation] = []
    i = int(np.argmin(vals))
    if vals[i] <= 0.0:
        found.append(Violation("r_positive", float(xs[i]), float(vals[i])))
    if not (np.all(slopes > GRID_TOL) or np.all(slopes < -GRID_TOL)):
        j = int(np.argmin(np.abs(slopes)))
        found.append(Violation("r_strictly_monotone", float(xs[j]), float(slopes[j])))
    gap, mids = _midpoint_gap(vals, r.raw(half))
    worst = np.unravel_index(np.argmax(gap), gap.shape)
    if gap[worst] > MIDPOINT_TOL:
        found.append(Violation("r_concave", float(mids[worst]), float(gap[worst])))
    return tuple(found)


def _positive_return_somewhere(p: Curve, r: Curve, players: Sequence[PlayerPrefs]) -> float:
    """Largest untaxed effective return over players and grid points."""
    xs = _grid()
    pv, rv = p.values(xs), r.values(xs)
    best = -math.inf
    for pl in players:
        fv = np.clip(rv, 0.0, None) ** pl.alpha * (1.0 - pv) - pl.k * pv
        best = max(best, float(fv.max()))
    return best


def validate(p: Curve, r: Curve, players: Sequence[PlayerPrefs]) -> ValidationReport:
    found = list(check_probability(p)) + list(check_return(r))
    if not found and players:
        best = _positive_return_somewhere(p, r, players)
        if best <= 0.0:
            found.append(Violation("positive_tax_ceiling", 0.0, best))
    return ValidationReport(tuple(found))


@dataclass(frozen=True)
class GameInstance:
    p: Curve
    r: Curve
    players: tuple[PlayerPrefs, ...]
    direction: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if not self.players:
            raise EmptyPlayerList("a game needs at least one player")
        if not self.p.clamp_at_one:
            object.__setattr__(self, "p", replace(self.p, clamp_at_one=True))
        report = validate(self.p, self.r, self.players)
        if not report.passed:
            raise AssumptionViolation(report)
        slope = self.r.raw_deriv(0.5)
        object.__setattr__(self, "direction", INCREASING if slope > 0 else DECREASING)

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def increasing(self) -> bool:
        return self.direction == INCREASING

    def with_players(self, players: Sequence[PlayerPrefs]) -> "GameInstance":
        return GameInstance(self.p, self.r, tuple(players))

    def with_gammas(self, gammas: Sequence[float]) -> "GameInstance":
        if len(gammas) != self.n:
            raise ValueError("one gamma per player required")
        return self.with_players([replace(pl, gamma=float(g)) for pl, g in zip(self.players, gammas)])


def make_game(
    p_coeffs: Sequence[float],
    r_coeffs: Sequence[float],
    players: Sequence[PlayerPrefs | tuple] | PlayerPrefs,
    n: int | None = None,
) -> GameInstance:
    """Convenience constructor; ``n`` replicates a single player spec."""
    if isinstance(players, PlayerPrefs):
        players = [players] * (n or 1)
    prefs = [pl if isinstance(pl, PlayerPrefs) else PlayerPrefs(*pl) for pl in players]
    return GameInstance(Curve.polynomial(p_coeffs, clamp_at_one=True), Curve.polynomial(r_coeffs), tuple(prefs))


def _coeffs(config: Mapping[str, Any], key: str) -> list[float]:
    node = config.get(key)
    if not isinstance(node, Mapping):
        raise ConfigError(key, "expected a mapping with 'coeffs'")
    coeffs = node.get("coeffs")
    if not isinstance(coeffs, (list, tuple)) or not coeffs:
        raise ConfigError(f"{key}.coeffs", "expected a non-empty list of numbers")
    out = []
    for i, c in enumerate(coeffs):
        if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c):
            raise ConfigError(f"{key}.coeffs[{i}]", f"not a finite number: {c!r}")
        out.append(float(c))
    if len(out) - 1 > MAX_DEGREE:
        raise ConfigError(f"{key}.coeffs", f"degree above {MAX_DEGREE}")
    return out


def _player(node: Any, i: int) -> PlayerPrefs:
    path = f"players[{i}]"
    if not isinstance(node, Mapping):
        raise ConfigError(path, "expected a mapping with alpha and k")
    unknown = set(node) - {"alpha", "k", "gamma"}
    if unknown:
        raise ConfigError(path, f"unknown keys {sorted(unknown)}")
    vals = {}
    for key in ("alpha", "k", "gamma"):
        if key not in node:
            if key == "gamma":
                continue
            raise ConfigError(f"{path}.{key}", "missing")
        v = node[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{path}.{key}", f"not a number: {v!r}")
        vals[key] = float(v)
    try:
        return PlayerPrefs(**vals)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def build_game(config: Mapping[str, Any]) -> GameInstance:
    """Parse a game description ``{p: {coeffs}, r: {coeffs}, players: [...]}``.

    Raises ConfigError for malformed input, EmptyPlayerList, or
    AssumptionViolation carrying the full ValidationReport.
    """
    if not isinstance(config, Mapping):
        raise ConfigError("<root>", "expected a mapping")
    p = Curve.polynomial(_coeffs(config, "p"), clamp_at_one=True)
    r = Curve.polynomial(_coeffs(config, "r"))
    players_node = config.get("players")
    if players_node is None:
        raise ConfigError("players", "missing")
    if not isinstance(players_node, (list, tuple)):
        raise ConfigError("players", "expected a list")
    if not players_node:
        raise EmptyPlayerList("players list is empty")
    players = tuple(_player(node, i) for i, node in enumerate(players_node))
    return GameInstance(p, r, players)


def game_to_config(game: GameInstance) -> dict:
    return {
        "p": {"coeffs": list(game.p.coefficients)},
        "r": {"coeffs": list(game.r.coefficients)},
        "players": [{"alpha": pl.alpha, "k": pl.k, "gamma": pl.gamma} for pl in game.players],
    }
