"""Command-line front end.

Subcommands: gen-surface (emit a grid JSON document), deadlines (emit a
deadline-curve CSV), allocate (one-shot allocation printed as JSON), and
sweep (full Monte Carlo producing records and summary CSVs). Exit codes:
0 success, 2 config or validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

from .allocator import allocate_benchmark1, allocate_benchmark2, allocate_proposed, evaluate_allocation
from .channel import LinkSpec, db_to_linear
from .deadline import curve_to_csv, deadline_curve
from .sim import SimConfig, build_surface, load_config, records_to_csv, run_sweep, summarize, summary_to_csv
from .surface import QualitySurface
from .toy_diffusion import generate_grid, grid_document


def _load_sim_config(args) -> SimConfig:
    config = load_config(args.config) if args.config else SimConfig()
    overrides = {}
    if getattr(args, "trials", None) is not None:
        overrides["trials"] = args.trials
    if getattr(args, "k", None) is not None:
        overrides["K"] = args.k
    if getattr(args, "eps_th", None) is not None:
        overrides["eps_th"] = args.eps_th
    if getattr(args, "surface", None) is not None:
        overrides["surface_source"] = f"file:{args.surface}"
    if getattr(args, "bandwidth", None) is not None:
        overrides["bandwidth_sweep"] = tuple(float(b) for b in args.bandwidth.split(","))
    if getattr(args, "seed", None) is not None:
        overrides["base_seed"] = args.seed
        overrides["toy"] = dataclasses.replace(config.toy, seed=args.seed)
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _cmd_gen_surface(args) -> int:
    config = _load_sim_config(args)
    kind = args.kind
    if kind == "toy":
        document = grid_document(config.toy, generate_grid(config.toy))
    else:
        p = config.parametric
        surface = QualitySurface.from_parametric(
            p.weight_mask, p.weight_text, p.exponent, p.steps, p.step_duration
        )
        document = surface.to_document()
    _emit(json.dumps(document) + "\n", args.out)
    return 0


def _cmd_deadlines(args) -> int:
    config = _load_sim_config(args)
    surface = build_surface(config)
    curve = deadline_curve(surface, config.eps_th, config.K)
    _emit(curve_to_csv(curve), args.out)
    return 0


def _allocation_json(alloc) -> str:
    payload = {
        "policy": alloc.policy,
        "B_s": alloc.B_s,
        "B_l": alloc.B_l,
        "t_s": None if math.isinf(alloc.t_s) else alloc.t_s,
        "t_l": None if math.isinf(alloc.t_l) else alloc.t_l,
        "eps_star": alloc.eps_star,
        "achieved_psnr": alloc.achieved_psnr,
        "achieved_q": alloc.achieved_q,
    }
    return json.dumps(payload, indent=2) + "\n"


def _cmd_allocate(args) -> int:
    config = _load_sim_config(args)
    surface = build_surface(config)
    links = (
        LinkSpec(config.mask_bits, db_to_linear(args.gamma_s_db)),
        LinkSpec(config.text_bits, db_to_linear(args.gamma_l_db)),
    )
    if args.policy == "proposed":
        alloc = allocate_proposed(surface, links, args.bandwidth, config.K, config.eps_th)
    elif args.policy == "benchmark1":
        alloc = evaluate_allocation(allocate_benchmark1(links, args.bandwidth), links, surface)
    else:
        alloc = evaluate_allocation(allocate_benchmark2(links, args.bandwidth), links, surface)
    _emit(_allocation_json(alloc), args.out)
    return 0


def _cmd_sweep(args) -> int:
    config = _load_sim_config(args)
    records = run_sweep(config)
    summary = summarize(records)
    _emit(records_to_csv(records), args.out)
    summary_path = args.summary_out
    if summary_path is None and args.out is not None:
        stem, dot, ext = args.out.rpartition(".")
        summary_path = f"{stem}_summary.{ext}" if dot else f"{args.out}_summary"
    if summary_path is not None:
        _emit(summary_to_csv(summary), summary_path)
    elif args.out is None:
        sys.stdout.write(summary_to_csv(summary))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semalloc",
        description="Deadline-aware bandwidth allocation for two semantic links",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON simulation config file")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, help="override base and surface seeds")
        p.add_argument("--k", type=int, help="override curve resolution K")
        p.add_argument("--eps-th", dest="eps_th", type=float, help="override lowest threshold")
        p.add_argument("--surface", help="load the quality surface from a grid JSON file")

    gen = sub.add_parser("gen-surface", help="emit a PSNR grid document as JSON")
    add_common(gen)
    gen.add_argument("--kind", choices=("toy", "parametric"), default="toy")
    gen.set_defaults(func=_cmd_gen_surface)

    dl = sub.add_parser("deadlines", help="emit the deadline curve as CSV")
    add_common(dl)
    dl.set_defaults(func=_cmd_deadlines)

    alloc = sub.add_parser("allocate", help="one-shot allocation, printed as JSON")
    add_common(alloc)
    alloc.add_argument("--bandwidth", type=float, default=3e5, help="total budget in Hz")
    alloc.add_argument("--gamma-s-db", dest="gamma_s_db", type=float, default=2.3,
                       help="mask link SNR in dB")
    alloc.add_argument("--gamma-l-db", dest="gamma_l_db", type=float, default=3.5,
                       help="text link SNR in dB")
    alloc.add_argument("--policy", choices=("proposed", "benchmark1", "benchmark2"),
                       default="proposed")
    alloc.set_defaults(func=_cmd_allocate)

    sweep = sub.add_parser("sweep", help="full Monte Carlo sweep, records + summary CSV")
    add_common(sweep)
    sweep.add_argument("--trials", type=int, help="override trial count")
    sweep.add_argument("--bandwidth", help="override sweep as comma-separated Hz values")
    sweep.add_argument("--summary-out", dest="summary_out", help="summary CSV path")
    sweep.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:  # includes config, grid-format, and JSON errors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
