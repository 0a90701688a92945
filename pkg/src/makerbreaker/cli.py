"""Command-line front end.

Subcommands: `play` runs one full game and writes transcript/report JSON;
`boxgame` runs a standalone box game; `sweep` runs a bias/seed grid and
writes one CSV row per game; `verify` replays and audits a transcript file.
Every output embeds its full configuration and the code version, and no
output contains timestamps, so reruns are byte-identical.

Exit codes: 0 success / verification passed; 1 runtime invariant tripped or
verification failed; 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from . import __version__
from .analysis import verify_transcript
from .breaker_strategies import make_breaker
from .errors import ConfigError, GameError
from .maker_engine import RealGameParams, make_maker, run_game
from .spookybox import (
    AlwaysHauntGhost,
    BoxGameConfig,
    ConcentrateBoxBreaker,
    NullBoxBreaker,
    NullGhost,
    RandomBoxBreaker,
    RandomGhost,
    derive_parameters,
    run_box_game,
)
from .transcript import Transcript

BREAKER_NAMES = ["random", "vertex-focus", "triangle-blocker", "k4-blocker", "null"]
MAKER_NAMES = ["potential", "random", "greedy"]


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip() != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="makerbreaker",
        description="Biased Maker-Breaker games on K_n: simulation and verification.",
    )
    parser.add_argument("--version", action="version", version=f"makerbreaker {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="run one full game")
    play.add_argument("--n", type=int, required=True)
    play.add_argument("--p", type=float, required=True)
    play.add_argument("--b", type=int, required=True)
    play.add_argument("--eps", type=float, default=0.5)
    play.add_argument("--seed", type=int, default=0)
    play.add_argument("--breaker", choices=BREAKER_NAMES, default="random")
    play.add_argument("--maker", choices=MAKER_NAMES, default="potential")
    play.add_argument("--target", type=int, default=0, help="vertex-focus target")
    play.add_argument("--v0", type=int, default=0, help="k4-blocker protected vertex")
    play.add_argument("--ell", choices=["default", "auto"], default="default")
    play.add_argument("--breaker-first", action="store_true")
    play.add_argument("--strict", action="store_true")
    play.add_argument("--transcript", default="transcript.json")
    play.add_argument("--report", default="report.json")
    play.set_defaults(func=cmd_play)

    box = sub.add_parser("boxgame", help="run a standalone box game")
    box.add_argument("--m", type=int, default=1)
    box.add_argument("--b", type=int, default=2)
    box.add_argument("--vertices", type=int, default=256)
    box.add_argument("--boxes", type=int, default=16)
    box.add_argument("--max-size", type=int, default=128)
    box.add_argument("--ell", default="auto", help="slack value, or 'auto' for the minimum")
    box.add_argument("--seed", type=int, default=0)
    box.add_argument("--ghost", choices=["null", "random", "always-haunt"], default="random")
    box.add_argument(
        "--box-breaker", choices=["null", "random", "concentrate"], default="random"
    )
    box.add_argument("--strict", action="store_true")
    box.add_argument("--transcript", default="boxgame.json")
    box.set_defaults(func=cmd_boxgame)

    sweep = sub.add_parser("sweep", help="run a bias/seed grid, write CSV")
    sweep.add_argument("--n", type=int, required=True)
    sweep.add_argument("--p", type=float, required=True)
    sweep.add_argument("--eps", type=float, default=0.5)
    sweep.add_argument("--b", type=_int_list, required=True, help="comma-separated biases")
    sweep.add_argument("--seeds", type=_int_list, required=True, help="comma-separated seeds")
    sweep.add_argument("--breaker", choices=BREAKER_NAMES, default="random")
    sweep.add_argument("--maker", choices=MAKER_NAMES, default="potential")
    sweep.add_argument("--target", type=int, default=0)
    sweep.add_argument("--v0", type=int, default=0)
    sweep.add_argument("--ell", choices=["default", "auto"], default="auto")
    sweep.add_argument("--out", default="sweep.csv")
    sweep.set_defaults(func=cmd_sweep)

    ver = sub.add_parser("verify", help="audit a transcript file")
    ver.add_argument("path")
    ver.set_defaults(func=cmd_verify)
    return parser


def cmd_play(args) -> int:
    params = RealGameParams(
        n=args.n,
        p=args.p,
        b=args.b,
        epsilon=args.eps,
        ell_mode=args.ell,
        seed=args.seed,
        breaker_first=args.breaker_first,
        strict=args.strict,
    )
    params.validate()
    breaker = make_breaker(args.breaker, seed=args.seed, target=args.target, v0=args.v0)
    maker = make_maker(args.maker, seed=args.seed)
    transcript, report = run_game(params, breaker, maker)
    transcript.write(args.transcript)
    payload = {"config": transcript.header, "report": report.to_dict(), "version": __version__}
    with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(
        f"game n={args.n} p={args.p} b={args.b}: min_degree={report.min_maker_degree} "
        f"min_nbhd_edges={report.min_nbhd_edges_revealed} "
        f"triangle_free={str(report.triangle_free).lower()} hash={report.transcript_hash}"
    )
    return 0


def _resolve_box_config(args) -> BoxGameConfig:
    if args.ell == "auto":
        probe = BoxGameConfig(args.m, args.b, args.vertices, args.boxes, args.max_size, 0.0)
        ell = derive_parameters(probe).ell_min
    else:
        ell = float(args.ell)
    return BoxGameConfig(
        m=args.m,
        b=args.b,
        vertex_count=args.vertices,
        e=args.boxes,
        M=args.max_size,
        ell=ell,
        strict_preconditions=args.strict,
    )


def random_initial_boxes(cfg: BoxGameConfig, seed: int) -> list[list[int]]:
    """Seeded random initial multihypergraph within the size cap."""
    rng = np.random.default_rng([seed, 23])
    top = min(cfg.M, max(cfg.vertex_count // 2, 1))
    boxes = []
    for _ in range(cfg.e):
        size = int(rng.integers(0, top + 1))
        boxes.append(sorted(int(v) for v in rng.choice(cfg.vertex_count, size, replace=False)))
    return boxes


def cmd_boxgame(args) -> int:
    cfg = _resolve_box_config(args)
    ghost = {
        "null": NullGhost(),
        "random": RandomGhost(args.seed),
        "always-haunt": AlwaysHauntGhost(),
    }[args.ghost]
    if cfg.b == 0:
        breaker = NullBoxBreaker()
    else:
        breaker = {
            "null": NullBoxBreaker(),
            "random": RandomBoxBreaker(args.seed),
            "concentrate": ConcentrateBoxBreaker(),
        }[args.box_breaker]
    transcript = run_box_game(cfg, random_initial_boxes(cfg, args.seed), ghost, breaker)
    transcript.header["seed"] = args.seed
    transcript.write(args.transcript)
    summary = transcript.header["summary"]
    print(
        f"boxgame m={cfg.m} b={cfg.b} e={cfg.e}: rounds={summary['rounds']} "
        f"max_deficit={summary['max_deficit']:.6g} guaranteed={str(transcript.header['guaranteed']).lower()}"
    )
    if transcript.header["guaranteed"] and summary["max_deficit"] > 1e-9:
        print("fair-share violation in a guaranteed configuration", file=sys.stderr)
        return 1
    return 0


SWEEP_COLUMNS = [
    "n",
    "p",
    "b",
    "eps",
    "seed",
    "min_degree",
    "min_nbhd_edges",
    "max_deficit_degree_game",
    "max_deficit_nbhd_game",
    "triangle_free",
    "k4_free_at_v0",
    "transcript_hash",
]


def cmd_sweep(args) -> int:
    if not args.b or not args.seeds:
        print("empty bias or seed list", file=sys.stderr)
        return 2
    if min(args.b) < 1:
        print("bias must be at least 1", file=sys.stderr)
        return 2
    config = {
        "n": args.n,
        "p": args.p,
        "eps": args.eps,
        "b": args.b,
        "seeds": args.seeds,
        "breaker": args.breaker,
        "maker": args.maker,
        "ell": args.ell,
    }
    rows = []
    for b in args.b:
        for seed in args.seeds:
            params = RealGameParams(
                n=args.n, p=args.p, b=b, epsilon=args.eps, ell_mode=args.ell, seed=seed
            )
            params.validate()
            breaker = make_breaker(args.breaker, seed=seed, target=args.target, v0=args.v0)
            maker = make_maker(args.maker, seed=seed)
            _, report = run_game(params, breaker, maker)
            rows.append(
                [
                    args.n,
                    repr(args.p),
                    b,
                    repr(args.eps),
                    seed,
                    report.min_maker_degree,
                    report.min_nbhd_edges_revealed,
                    repr(report.max_deficit_degree),
                    repr(report.max_deficit_nbhd),
                    str(report.triangle_free).lower(),
                    str(report.k4_free_at_v0).lower(),
                    report.transcript_hash,
                ]
            )
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# makerbreaker {__version__} {json.dumps(config, sort_keys=True)}\n")
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_verify(args) -> int:
    try:
        transcript = Transcript.load(args.path)
    except FileNotFoundError:
        print(f"no such file: {args.path}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"parse error at byte {exc.pos}: {exc.msg}", file=sys.stderr)
        return 2
    report = verify_transcript(transcript)
    for line in report.lines():
        print(line)
    if report.verdict:
        print("verdict: pass")
        return 0
    first = report.first_failure()
    print(f"verdict: fail ({first.name})")
    return 1


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except GameError as exc:
        print(f"runtime invariant tripped: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
