#!/usr/bin/env python3
"""Social optimum, achievable range and revenue-maximizing tax for each reference game."""

from cprtax import presets
from cprtax import taxation as tx
from cprtax.equilibrium import solve_pne
from cprtax.errors import NotAchievable


def main():
    for name, game in [
        ("network_neutral", presets.network_neutral()),
        ("network_gain_seeking_2", presets.network_gain_seeking(2)),
        ("network_gain_seeking_8", presets.network_gain_seeking(8)),
        ("congestion_pair", presets.congestion()),
    ]:
        ar = tx.achievable_range(game)
        print(f"{name}: x_ne(0)={ar.x_ne0:.4f} x_opt={ar.x_opt:.4f} interval={ar.interval}")
        try:
            t = tx.design_tax(game, ar.x_opt)
            print(f"  optimum reached at t={t:.6f} (x_ne={solve_pne(game, t).x_ne:.6f})")
        except NotAchievable as exc:
            print(f"  {exc}")
        t_rev, rev = tx.maximize_objective(game, "revenue")
        print(f"  revenue peaks at t={t_rev:.4f} with {rev:.4f}")


if __name__ == "__main__":
    main()
