#!/usr/bin/env python3
"""Write utilization/fragility/revenue sweeps of the reference games as CSV."""

import argparse
from pathlib import Path

from cprtax import effective_return as er
from cprtax import presets
from cprtax import taxation as tx
from cprtax.cli import sweep_csv

GAMES = {
    "network_neutral": presets.network_neutral,
    "network_gain_seeking_2": lambda: presets.network_gain_seeking(2),
    "network_gain_seeking_8": lambda: presets.network_gain_seeking(8),
    "network_mixed": presets.network_mixed,
    "fragility_trio": presets.fragility_trio,
    "congestion_pair": presets.congestion,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="sweeps")
    parser.add_argument("--step", type=float, default=0.005)
    args = parser.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in GAMES.items():
        game = make()
        top = er.t_bar(game) * 1.05
        rows = tx.sweep(game, tx.uniform_grid(0.0, top, args.step))
        (out / f"{name}.csv").write_text(sweep_csv(rows, game.n))
        jumps = tx.detect_discontinuities(rows, args.step, game)
        desc = ", ".join(f"t={j.t:.5f} dx={j.jump:+.4f}" for j in jumps) or "none"
        print(f"{name}: {len(rows)} rows, jumps: {desc}")


if __name__ == "__main__":
    main()
