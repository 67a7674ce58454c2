"""Command-line driver with bit-stable CSV/JSON serialization.

Four subcommands: evolve (densities after N periods), perturbative
(first-order density against the full numerics), scan (detuning sweeps),
scaling (width power laws). Numeric fields are written with the shortest
representation that parses back to the identical float, so identical
physics yields identical bytes. Wall-clock time lives only in the
standalone manifest file; the manifest block embedded in data files omits
it (and the thread count), keeping outputs byte-stable across re-runs and
across --threads values.

Exit codes: 0 success, 2 bad usage or invalid parameters, 3 a numerical
invariant failed (the message names it).
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import TruncationError, perturbative_density
from .observables import (
    DegenerateDensityError,
    NoCrossingError,
    momentum_density,
    position_density,
)
from .propagator import LeakageError, evolve
from .scanner import (
    FitRefusalError,
    RangeCapError,
    auto_range,
    compare_modes,
    fit_widths,
    scan_epsilon,
    scan_width,
    width_scaling,
)
from .wavepacket import SimConfig, SpatialGrid, default_n_points, to_position

_NUMERICAL_ERRORS = (
    LeakageError,
    TruncationError,
    NoCrossingError,
    RangeCapError,
    FitRefusalError,
    DegenerateDensityError,
)


def _fmt(x) -> str:
    # shortest representation that parses back to the identical value
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _listify(arr) -> list[float]:
    return [float(v) for v in np.asarray(arr).ravel()]


def _manifest(command: str, config: dict, health: dict | None = None) -> dict:
    block = {
        "command": command,
        "version": __version__,
        "config": config,
    }
    if health is not None:
        block["health"] = health
    return block


def _write_manifest_file(out: Path, block: dict, started: float) -> None:
    full = dict(block)
    full["wall_time_s"] = time.monotonic() - started
    _write_json(out / "manifest.json", full)


def _config_dict(cfg: SimConfig) -> dict:
    return {
        "phi_d": cfg.phi_d,
        "epsilon": cfg.epsilon,
        "l": cfg.l,
        "kicks": cfg.kicks,
        "half_width": cfg.half_width,
        "n_points": cfg.n_points,
    }


def _out_dir(raw: str) -> Path:
    out = Path(raw)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        return max(1, args.threads)
    env = os.environ.get("QKR_THREADS", "")
    return max(1, int(env)) if env.strip() else 1


def _cmd_evolve(args) -> int:
    started = time.monotonic()
    cfg = SimConfig(
        phi_d=args.phi_d,
        epsilon=args.epsilon,
        l=args.l,
        kicks=args.kicks,
        half_width=args.basis,
        n_points=args.grid,
    )
    state = evolve(cfg)
    # auto-grow may have widened the ladder; resize the grid to match
    grid = SpatialGrid(max(cfg.n_points, default_n_points(state.half_width)))
    pos = position_density(to_position(state, grid))
    mom = momentum_density(state)
    health = {
        "norm_drift": abs(1.0 - state.norm_sq()),
        "edge_occupancy": state.edge_occupancy(),
        "half_width_used": state.half_width,
    }
    manifest = _manifest("evolve", _config_dict(cfg), health)
    out = _out_dir(args.out)
    if args.format == "csv":
        _write_csv(out / "position_density.csv", ["X", "density"],
                   zip(pos.support, pos.values))
        _write_csv(out / "momentum_density.csv", ["m", "prob"],
                   zip(mom.support.astype(int), mom.values))
    else:
        _write_json(out / "position_density.json", {
            "manifest": manifest,
            "data": {"X": _listify(pos.support), "density": _listify(pos.values)},
        })
        _write_json(out / "momentum_density.json", {
            "manifest": manifest,
            "data": {"m": [int(v) for v in mom.support],
                     "prob": _listify(mom.values)},
        })
    _write_manifest_file(out, manifest, started)
    return 0


def _cmd_perturbative(args) -> int:
    started = time.monotonic()
    cfg = SimConfig(
        phi_d=args.phi_d,
        epsilon=args.epsilon,
        l=args.l,
        kicks=args.kicks,
        n_points=args.grid,
    )
    state = evolve(cfg, auto_grow=False)
    grid = cfg.grid()
    numeric = position_density(to_position(state, grid)).values
    approx = perturbative_density(
        cfg.kicks, cfg.phi_d, cfg.epsilon, grid, cfg.half_width
    ).values
    diff = numeric - approx
    manifest = _manifest("perturbative", _config_dict(cfg), {
        "norm_drift": abs(1.0 - state.norm_sq()),
        "edge_occupancy": state.edge_occupancy(),
    })
    out = _out_dir(args.out)
    if args.format == "csv":
        _write_csv(out / "density_comparison.csv",
                   ["X", "numeric", "perturbative", "difference"],
                   zip(grid.nodes, numeric, approx, diff))
    else:
        _write_json(out / "density_comparison.json", {
            "manifest": manifest,
            "data": {
                "X": _listify(grid.nodes),
                "numeric": _listify(numeric),
                "perturbative": _listify(approx),
                "difference": _listify(diff),
            },
        })
    _write_manifest_file(out, manifest, started)
    return 0


def _cmd_scan(args) -> int:
    started = time.monotonic()
    threads = _threads(args)
    if args.eps_max == "auto":
        eps_max = auto_range(args.kicks, args.phi_d, args.l, args.mode,
                             threads=threads)
    else:
        eps_max = float(args.eps_max)
    scan = scan_epsilon(args.kicks, args.phi_d, args.l, args.mode,
                        eps_max, args.points, threads)
    manifest = _manifest("scan", {
        "phi_d": args.phi_d,
        "l": args.l,
        "kicks": args.kicks,
        "mode": args.mode,
        "epsilon_max": eps_max,
        "points": args.points,
    })
    out = _out_dir(args.out)
    if args.format == "csv":
        _write_csv(out / "scan.csv", ["epsilon", "value"],
                   zip(scan.epsilons, scan.values))
    else:
        _write_json(out / "scan.json", {
            "manifest": manifest,
            "data": {
                "kicks": scan.kicks,
                "mode": scan.mode,
                "epsilon": _listify(scan.epsilons),
                "value": _listify(scan.values),
            },
            "fwhm": scan_width(scan),
        })
    _write_manifest_file(out, manifest, started)
    return 0


def _read_fixture(path: str) -> tuple[list[int], list[float]]:
    ns, widths = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                n = float(row[0])
            except ValueError:
                continue  # header row
            ns.append(int(n))
            widths.append(float(row[1]))
    return ns, widths


def _fit_block(ws) -> dict:
    return {
        "gamma": ws.gamma,
        "intercept": ws.intercept,
        "r_squared": ws.r_squared,
    }


def _cmd_scaling(args) -> int:
    started = time.monotonic()
    threads = _threads(args)
    out = _out_dir(args.out)
    if args.fixture:
        ns, widths = _read_fixture(args.fixture)
        ws = fit_widths(ns, widths)
        manifest = _manifest("scaling", {"fixture": args.fixture,
                                         "mode": args.mode})
        if args.format == "csv":
            _write_csv(out / "scaling.csv", ["N", "width"],
                       zip(ws.kick_numbers, ws.widths))
        else:
            _write_json(out / "scaling.json", {
                "manifest": manifest,
                "data": {"N": [int(n) for n in ws.kick_numbers],
                         "width": _listify(ws.widths)},
                "fit": _fit_block(ws),
            })
        _write_manifest_file(out, manifest, started)
        return 0

    n_list = list(range(args.n_from, args.n_to + 1))
    base = {
        "phi_d": args.phi_d,
        "l": args.l,
        "n_from": args.n_from,
        "n_to": args.n_to,
        "mode": args.mode,
        "points": args.points,
    }
    manifest = _manifest("scaling", base)
    if args.mode == "both":
        cmp = compare_modes(n_list, args.phi_d, args.l, args.points, threads)
        if args.format == "csv":
            _write_csv(out / "scaling.csv",
                       ["N", "position", "fidelity", "ratio"], cmp.table)
        else:
            _write_json(out / "scaling.json", {
                "manifest": manifest,
                "data": {
                    "N": [r[0] for r in cmp.table],
                    "position": [r[1] for r in cmp.table],
                    "fidelity": [r[2] for r in cmp.table],
                    "ratio": [r[3] for r in cmp.table],
                },
                "fit": {
                    "position": _fit_block(cmp.position),
                    "fidelity": _fit_block(cmp.fidelity),
                    "crossover_first_exceed": cmp.crossover_first_exceed,
                    "crossover_fit": cmp.crossover_fit,
                },
            })
    else:
        ws = width_scaling(n_list, args.phi_d, args.l, args.mode,
                           args.points, threads)
        if args.format == "csv":
            _write_csv(out / "scaling.csv", ["N", "width"],
                       zip(ws.kick_numbers, ws.widths))
        else:
            _write_json(out / "scaling.json", {
                "manifest": manifest,
                "data": {"N": [int(n) for n in ws.kick_numbers],
                         "width": _listify(ws.widths)},
                "fit": _fit_block(ws),
            })
    _write_manifest_file(out, manifest, started)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkr",
        description="Kicked-ring revival simulator and width-scaling toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kicks=True):
        p.add_argument("--phi-d", type=float, default=0.485,
                       help="effective kick strength (default 0.485)")
        p.add_argument("--l", type=int, default=1,
                       help="revival order (default 1)")
        if kicks:
            p.add_argument("--kicks", type=int, required=True,
                           help="number of kick periods")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("evolve", help="densities after N periods")
    common(p)
    p.add_argument("--epsilon", type=float, default=0.0,
                   help="period detuning (default 0)")
    p.add_argument("--basis", type=int, default=None,
                   help="momentum ladder half width (default: sized from N)")
    p.add_argument("--grid", type=int, default=None,
                   help="position grid points (default: sized from basis)")
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("perturbative",
                       help="first-order density vs full numerics")
    common(p)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=None)
    p.set_defaults(func=_cmd_perturbative)

    p = sub.add_parser("scan", help="observable swept over detuning")
    common(p)
    p.add_argument("--mode", choices=("position", "fidelity"), required=True)
    p.add_argument("--eps-max", default="auto",
                   help="sweep half range, or 'auto' (default)")
    p.add_argument("--points", type=int, default=65,
                   help="odd sweep point count (default 65)")
    p.add_argument("--threads", type=int, default=None,
                   help="sweep worker threads (default: QKR_THREADS or 1)")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("scaling", help="width power law over kick numbers")
    common(p, kicks=False)
    p.add_argument("--n-from", type=int, default=5)
    p.add_argument("--n-to", type=int, default=12)
    p.add_argument("--mode", choices=("position", "fidelity", "both"),
                   required=True)
    p.add_argument("--points", type=int, default=65)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--fixture", default=None,
                   help="test hook: fit a CSV of N,width rows, no simulation")
    p.set_defaults(func=_cmd_scaling)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
