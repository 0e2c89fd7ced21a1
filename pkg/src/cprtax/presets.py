"""Reference games used throughout the tests, scripts and sample configs."""

from __future__ import annotations

from .errors import AssumptionViolation
from .model import GameInstance, PlayerPrefs, make_game

QUARTIC_P = (0.2, 0.0, 0.0, 0.0, 0.8)
CONGESTION_R = (3.0, -1.0)
NETWORK_R = (1.0, 3.0)


def congestion(n: int = 2, k: float = 1.5, alpha: float = 1.0) -> GameInstance:
    """Decreasing return ``3 - x`` with quartic failure probability."""
    return make_game(QUARTIC_P, CONGESTION_R, PlayerPrefs(alpha, k), n=n)


def network(n: int = 2, k: float = 1.0, alpha: float = 1.0) -> GameInstance:
    """Increasing return ``3x + 1`` with quartic failure probability."""
    return make_game(QUARTIC_P, NETWORK_R, PlayerPrefs(alpha, k), n=n)


def network_neutral() -> GameInstance:
    return network(2, k=1.0)


def network_gain_seeking(n: int = 2) -> GameInstance:
    return network(n, k=0.05)


def network_mixed() -> GameInstance:
    """One linear player (k=1.1) and one curved player (alpha=0.3, k=1.5)."""
    return make_game(QUARTIC_P, NETWORK_R, [PlayerPrefs(1.0, 1.1), PlayerPrefs(0.3, 1.5)])


def fragility_trio() -> GameInstance:
    """Three strongly concave players whose fragility is non-monotone in the tax."""
    return make_game((0.0, 1.0), (5.0, 8.0), PlayerPrefs(0.15, 1.2), n=3)


def sensitivity_pair(gammas=(0.3, 0.7), k: float = 1.5) -> GameInstance:
    return congestion(len(gammas), k=k).with_gammas(gammas)


def random_game(rng, max_players: int = 4) -> GameInstance:
    """Draw an admissible game; redraws until the validity checks pass."""
    while True:
        p0 = rng.uniform(0.0, 0.5)
        w = rng.uniform(0.0, 1.0)
        m = int(rng.integers(2, 5))
        p = [0.0] * (m + 1)
        p[0] += p0
        p[1] += (1.0 - p0) * w
        p[m] += (1.0 - p0) * (1.0 - w)
        a, b = rng.uniform(1.0, 5.0), rng.uniform(0.5, 4.0)
        kind = rng.integers(0, 3)
        if kind == 0:
            r = [a + b, -b]
        elif kind == 1:
            r = [a, b]
        else:
            r = [a, b, -rng.uniform(0.0, 0.45) * b]
        n = int(rng.integers(1, max_players + 1))
        players = [PlayerPrefs(float(rng.uniform(0.2, 1.0)), float(rng.uniform(0.2, 3.0))) for _ in range(n)]
        try:
            return make_game(p, r, players)
        except AssumptionViolation:
            continue
