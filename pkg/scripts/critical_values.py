#!/usr/bin/env python3
"""Print peaks, clamp points, zero crossings and tax ceilings of the reference games."""

from cprtax import effective_return as er
from cprtax import presets
from cprtax.model import PlayerPrefs, make_game


def single(r, alpha, k):
    return make_game(presets.QUARTIC_P, r, [PlayerPrefs(alpha, k)])


def show(label, game, taxes):
    print(f"{label}: t_bar = {er.t_bar(game):.6f}")
    for t in taxes:
        for i in range(game.n):
            cq = er.critical_points(game, i, t)
            print(f"  t={t:<8.4g} player {i + 1}: z={cq.z:.6f} z_hat={cq.z_hat:.6f} y={cq.y:.6f}")


def main():
    show("congestion, k=1.5", single(presets.CONGESTION_R, 1.0, 1.5), [0.0, 1.0])
    gain = single(presets.NETWORK_R, 1.0, 0.05)
    show("network, k=0.05", gain, [0.0, 1.5, er.t_bar(gain) - 1e-4])
    show("network, alpha=0.3, k=1.5", single(presets.NETWORK_R, 0.3, 1.5), [1.5])
    show("mixed pair", presets.network_mixed(), [1.583])


if __name__ == "__main__":
    main()
