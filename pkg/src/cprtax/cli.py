"""Command-line front end: ``python -m cprtax <command> --config game.yaml``."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Iterable, Sequence

import yaml

from . import effective_return as er
from .differentiated import compare_uniform
from .equilibrium import solve_pne
from .errors import (
    AssumptionViolation,
    ConfigError,
    CPRError,
    EmptyPlayerList,
    NotAchievable,
)
from .model import GameInstance, build_game
from .taxation import SweepRow, design_tax, sweep, uniform_grid
from .welfare import check_opt_leq_ne, social_optimum

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNACHIEVABLE = 2
EXIT_SOLVER = 3


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def key_values(pairs: Iterable[tuple[str, object]]) -> str:
    return "".join(f"{k} = {fmt(v)}\n" for k, v in pairs)


def sweep_csv(rows: Sequence[SweepRow], n: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x_ne", "fragility", "revenue", "support_size"] + [f"x_{i + 1}" for i in range(n)])
    for row in rows:
        w.writerow(
            [fmt(float(row.t)), fmt(row.x_ne), fmt(row.fragility), fmt(row.revenue), row.support_size]
            + [fmt(float(x)) for x in row.investments]
        )
    return buf.getvalue()


def load_game(path: str) -> GameInstance:
    try:
        with open(path) as fh:
            config = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(path, exc.strerror or str(exc)) from None
    except yaml.YAMLError as exc:
        raise ConfigError(path, f"unparseable YAML: {exc}") from None
    return build_game(config)


def _cmd_validate(game: GameInstance, args) -> str:
    return key_values([("valid", True), ("n", game.n), ("direction", game.direction)])


def _cmd_critical(game: GameInstance, args) -> str:
    pairs: list[tuple[str, object]] = [("t", args.t)]
    for i in range(game.n):
        cq = er.critical_points(game, i, args.t)
        tag = f"player_{i + 1}"
        pairs += [
            (f"{tag}.z", cq.z),
            (f"{tag}.z_hat", cq.z_hat),
            (f"{tag}.y", cq.y),
            (f"{tag}.t_bar", cq.t_bar_i),
        ]
    return key_values(pairs)


def _cmd_solve(game: GameInstance, args) -> str:
    res = solve_pne(game, args.t)
    pairs = [
        ("t", res.t),
        ("x_ne", res.x_ne),
        ("fragility", res.fragility),
        ("revenue", res.revenue),
        ("support_size", res.support_size),
    ]
    pairs += [(f"x_{i + 1}", float(x)) for i, x in enumerate(res.investments)]
    pairs.append(("residual", res.residual))
    return key_values(pairs)


def _cmd_sweep(game: GameInstance, args) -> str:
    grid = uniform_grid(args.t_min, args.t_max, args.t_step)
    return sweep_csv(sweep(game, grid), game.n)


def _cmd_design(game: GameInstance, args) -> str:
    t = design_tax(game, args.target, args.tol)
    return key_values([("target", args.target), ("t", t), ("x_ne", solve_pne(game, t).x_ne)])


def _cmd_welfare(game: GameInstance, args) -> str:
    opt = social_optimum(game, seed=args.seed)
    cmp = check_opt_leq_ne(game, seed=args.seed)
    pairs = [("method", opt.method), ("x_opt", opt.x_opt), ("psi", opt.psi)]
    pairs += [(f"x_{i + 1}", float(x)) for i, x in enumerate(opt.profile)]
    pairs += [("x_ne0", cmp.x_ne), ("opt_leq_ne", cmp.holds)]
    return key_values(pairs)


def _cmd_compare(game: GameInstance, args) -> str:
    c = compare_uniform(game, args.t)
    return key_values(
        [
            ("t", args.t),
            ("gamma_mean", c.gamma_mean),
            ("x_h", c.x_h),
            ("x_m", c.x_m),
            ("revenue_h", c.revenue_h),
            ("revenue_m", c.revenue_m),
            ("support_h", len(c.supports[0])),
            ("support_m", len(c.supports[1])),
            ("status", c.status),
        ]
    )


COMMANDS = {
    "validate": _cmd_validate,
    "critical": _cmd_critical,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "design": _cmd_design,
    "welfare": _cmd_welfare,
    "compare-gamma": _cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cprtax", description="Taxation of fragile common-pool resources")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="YAML game description")
        cmd.add_argument("--out", help="output file (default: stdout)")
        if name in ("critical", "solve", "compare-gamma"):
            cmd.add_argument("--t", type=float, default=0.0, help="tax rate")
        if name == "sweep":
            cmd.add_argument("--t-min", type=float, default=0.0)
            cmd.add_argument("--t-max", type=float, required=True)
            cmd.add_argument("--t-step", type=float, required=True)
        if name == "design":
            cmd.add_argument("--target", type=float, required=True)
            cmd.add_argument("--tol", type=float, default=1e-6)
        if name == "welfare":
            cmd.add_argument("--seed", type=int, default=0)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        game = load_game(args.config)
    except AssumptionViolation as exc:
        print(exc.report.format(), file=sys.stderr)
        return EXIT_INVALID
    except (ConfigError, EmptyPlayerList) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        text = COMMANDS[args.command](game, args)
    except NotAchievable as exc:
        _emit(
            key_values(
                [("target", exc.target), ("achievable", False), ("nearest_t", exc.nearest_t), ("nearest_x_ne", exc.nearest_x)]
            ),
            args.out,
        )
        print(str(exc), file=sys.stderr)
        return EXIT_UNACHIEVABLE
    except (CPRError, ValueError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(text, args.out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
