"""Command-line front end: solve, enumerate, trace, and verification drivers.

Every command writes plain comma-separated data files plus a key-value
manifest listing the exact parameters and outputs; the report-style commands
(``spectrum``, ``trace``, ``resurgence``) also render a PNG figure next to
the data.  All numeric output carries 17 significant digits so reruns with
the manifest's parameters reproduce the data files byte for byte.

Exit codes: 0 success, 1 verification FAIL, 2 usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, report
from .errors import BetheTraceError, InvalidQuantumNumbers, NonConvergence
from .model import ModelParams, PartitionShape, QuantumNumbers, TWO_PI
from .partitions import binomial_identity_check, enumerate_partitions
from .solver import enumerate_spectrum, solve_state
from .trace import (
    GridSpec,
    TraceSettings,
    default_workers,
    resurgence_profile,
    rho_total,
)
from .twobody import compare_with_bethe
from .weyl import DEFAULT_QUADRATURE, QuadratureSpec

USAGE_ERROR = 2
NUMERICAL_ERROR = 3


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _fmt_qn(doubled: int) -> str:
    return str(doubled // 2) if doubled % 2 == 0 else f"{doubled}/2"


def _write_manifest(outdir: Path, prefix: str, command: str, params: dict,
                    outputs: list[Path], started: float) -> Path:
    path = outdir / f"{prefix}_manifest.txt"
    lines = [f"command = {command}", f"version = {__version__}"]
    lines.append("units = hbar^2/(2m) = 1; lengths in ring units")
    for key, value in params.items():
        lines.append(f"{key} = {_fmt(value) if isinstance(value, (int, float, np.floating, np.integer)) else value}")
    lines.append(f"duration_seconds = {time.perf_counter() - started:.3f}")
    for out in outputs:
        lines.append(f"output = {out.name}")
    path.write_text("\n".join(lines) + "\n")
    return path


def _add_common(sub, *, coupling=True):
    sub.add_argument("--n", type=int, required=True, help="particle number")
    if coupling:
        sub.add_argument("--g", type=float, required=True, help="repulsive coupling")
    sub.add_argument("--l", type=float, default=TWO_PI, help="ring length (default 2*pi)")
    sub.add_argument("--outdir", type=Path, default=Path("."), help="output directory")
    sub.add_argument("--prefix", type=str, default=None, help="output file prefix")
    sub.add_argument("--no-figure", action="store_true", help="skip PNG rendering")


def _parse_blocks(text: str | None, n: int) -> PartitionShape:
    if text is None:
        return PartitionShape((1,) * n)
    blocks = tuple(int(b) for b in text.split(","))
    if sum(blocks) != n:
        raise InvalidQuantumNumbers(f"blocks {blocks} do not sum to n={n}")
    return PartitionShape(tuple(sorted(blocks, reverse=True)))


def _parse_partitions(text: str | None):
    if text is None:
        return None
    return tuple(tuple(int(b) for b in part.split("+")) for part in text.split(","))


def cmd_solve(args) -> int:
    started = time.perf_counter()
    params = ModelParams(args.n, args.g, args.l)
    doubled = tuple(int(v) for v in args.i.split(","))
    shape = _parse_blocks(args.blocks, args.n)
    qn = QuantumNumbers(doubled, params.parity_offset)
    state = solve_state(params, shape, qn)

    outdir = args.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or "solve"
    record = outdir / f"{prefix}.txt"
    lines = [
        f"n_particles = {params.n_particles}",
        f"coupling = {_fmt(params.coupling)}",
        f"ring_length = {_fmt(params.ring_length)}",
        f"blocks = {','.join(str(b) for b in shape.blocks)}",
        f"quantum_numbers = {';'.join(_fmt_qn(d) for d in qn.doubled)}",
        f"rapidities = {';'.join(_fmt(k) for k in state.rapidities)}",
        f"energy = {_fmt(state.energy)}",
        f"momentum = {_fmt(state.momentum)}",
        f"gaudin_det = {_fmt(state.gaudin_det)}",
        f"residual_norm = {_fmt(state.residual_norm)}",
        f"iterations = {state.iterations}",
    ]
    record.write_text("\n".join(lines) + "\n")
    _write_manifest(outdir, prefix, "solve",
                    {"n": params.n_particles, "g": params.coupling,
                     "l": params.ring_length, "i": args.i,
                     "blocks": ",".join(str(b) for b in shape.blocks)},
                    [record], started)
    print(f"E = {_fmt(state.energy)}  P = {_fmt(state.momentum)}  "
          f"residual = {_fmt(state.residual_norm)}")
    print(f"wrote {record}")
    return 0


def _write_levels_csv(path: Path, table) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "energy", "momentum", "quantum_numbers"])
        for idx, state in enumerate(table.levels):
            writer.writerow([
                idx,
                _fmt(state.energy),
                _fmt(state.momentum),
                ";".join(_fmt_qn(d) for d in state.quantum_numbers.doubled),
            ])


def cmd_spectrum(args) -> int:
    started = time.perf_counter()
    params = ModelParams(args.n, args.g, args.l)
    table = enumerate_spectrum(params, args.emax)

    outdir = args.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or "spectrum"
    data = outdir / f"{prefix}.csv"
    _write_levels_csv(data, table)
    outputs = [data]
    if not args.no_figure:
        fig = outdir / f"{prefix}.png"
        report.staircase_figure(table, fig, title=f"N={args.n}, g={args.g:g}")
        outputs.append(fig)
    _write_manifest(outdir, prefix, "spectrum",
                    {"n": params.n_particles, "g": params.coupling,
                     "l": params.ring_length, "emax": args.emax},
                    outputs, started)
    print(f"{len(table.levels)} levels below {args.emax}; wrote {data}")
    return 0


def cmd_trace(args) -> int:
    started = time.perf_counter()
    params = ModelParams(args.n, args.g, args.l)
    settings = TraceSettings(m_max=args.mmax,
                             partitions_included=_parse_partitions(args.parts))
    grid_spec = GridSpec(args.emin, args.emax, args.step)
    quad = QuadratureSpec(args.nodes) if args.nodes else DEFAULT_QUADRATURE
    grid = rho_total(params, grid_spec, settings, quad, workers=args.workers)

    outdir = args.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or "trace"
    data = outdir / f"{prefix}.csv"
    with data.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["energy", "smooth", "oscillatory", "total"])
        for e, s, o, t in zip(grid.energies, grid.values_smooth,
                              grid.values_osc, grid.values_total):
            writer.writerow([_fmt(e), _fmt(s), _fmt(o), _fmt(t)])
    outputs = [data]

    level_energies = None
    if args.levels_overlay:
        table = enumerate_spectrum(params, args.emax)
        levels_path = outdir / f"{prefix}_levels.csv"
        _write_levels_csv(levels_path, table)
        outputs.append(levels_path)
        level_energies = table.energies
    if not args.no_figure:
        fig = outdir / f"{prefix}.png"
        report.density_figure(grid, fig, level_energies=level_energies,
                              title=f"N={args.n}, g={args.g:g}, windings up to {args.mmax}")
        outputs.append(fig)
    _write_manifest(outdir, prefix, "trace",
                    {"n": params.n_particles, "g": params.coupling,
                     "l": params.ring_length, "mmax": args.mmax,
                     "emin": args.emin, "emax": args.emax, "step": args.step,
                     "parts": args.parts or "all",
                     "nodes": args.nodes or DEFAULT_QUADRATURE.nodes_per_angle,
                     "workers": args.workers or default_workers()},
                    outputs, started)
    print(f"wrote {data} ({grid.energies.size} grid points)")
    return 0


def cmd_resurgence(args) -> int:
    started = time.perf_counter()
    params = ModelParams(args.n, args.g, args.l)
    ladder = tuple(int(v) for v in args.mmax_ladder.split(","))
    lo, hi = (float(v) for v in args.window.split(","))
    rows = resurgence_profile(params, ladder, (lo, hi))

    outdir = args.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or "resurgence"
    data = outdir / f"{prefix}.csv"
    with data.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m_max", "mean_osc_between_levels", "weyl_mean", "gap"])
        for row in rows:
            writer.writerow([row.m_max, _fmt(row.mean_osc_between_levels),
                             _fmt(row.weyl_mean), _fmt(row.gap)])
    outputs = [data]
    if not args.no_figure:
        fig = outdir / f"{prefix}.png"
        report.resurgence_figure(rows, fig, title=f"N={args.n}, g={args.g:g}")
        outputs.append(fig)
    _write_manifest(outdir, prefix, "resurgence",
                    {"n": params.n_particles, "g": params.coupling,
                     "l": params.ring_length, "mmax_ladder": args.mmax_ladder,
                     "window": args.window},
                    outputs, started)
    print(f"wrote {data}")
    for row in rows:
        print(f"m_max={row.m_max}: gap = {_fmt(row.gap)}")
    return 0


def cmd_crosscheck2(args) -> int:
    started = time.perf_counter()
    params = ModelParams(2, args.g, args.l)
    rep = compare_with_bethe(params, args.emax)

    outdir = args.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or "crosscheck2"
    path = outdir / f"{prefix}.txt"
    verdict = "PASS" if rep.passed else "FAIL"
    lines = [
        f"result = {verdict}",
        f"g = {_fmt(rep.coupling)}",
        f"e_max = {_fmt(rep.e_max)}",
        f"levels_vector_solver = {rep.n_levels_bethe}",
        f"levels_secular = {rep.n_levels_secular}",
        f"max_abs_deviation = {_fmt(rep.max_abs_deviation)}",
        f"tolerance = {_fmt(rep.tolerance)}",
    ]
    path.write_text("\n".join(lines) + "\n")
    _write_manifest(outdir, prefix, "crosscheck2",
                    {"n": 2, "g": params.coupling, "l": params.ring_length,
                     "emax": args.emax}, [path], started)
    print(f"{verdict}: {rep.n_levels_bethe} levels, max deviation "
          f"{_fmt(rep.max_abs_deviation)}")
    return 0 if rep.passed else 1


def cmd_verify_combinatorics(args) -> int:
    started = time.perf_counter()
    failures = []
    for n in range(1, args.nmax + 1):
        for r in range(1, args.rmax + 1):
            if not binomial_identity_check(n, r):
                failures.append((n, r))
    counts_ok = all(
        len(enumerate_partitions(n).shapes) == expected
        for n, expected in ((2, 2), (3, 3), (4, 5), (10, 42))
    )

    outdir = args.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or "combinatorics"
    path = outdir / f"{prefix}.txt"
    passed = not failures and counts_ok
    lines = [
        f"result = {'PASS' if passed else 'FAIL'}",
        f"identity_checked_n = 1..{args.nmax}",
        f"identity_checked_r = 1..{args.rmax}",
        f"identity_failures = {len(failures)}",
        f"partition_counts_ok = {counts_ok}",
    ]
    path.write_text("\n".join(lines) + "\n")
    _write_manifest(outdir, prefix, "verify-combinatorics",
                    {"nmax": args.nmax, "rmax": args.rmax}, [path], started)
    print(f"{'PASS' if passed else 'FAIL'}: {len(failures)} identity failures")
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bethetrace",
        description="Exact spectra and semiclassical densities of states for "
                    "bosons with contact interaction on a ring.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one state from its quantum numbers")
    _add_common(p)
    p.add_argument("--i", type=str, required=True,
                   help="comma-separated doubled quantum numbers (2*I)")
    p.add_argument("--blocks", type=str, default=None,
                   help="comma-separated block multiplicities (default all ones)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", help="enumerate all levels below a cutoff")
    _add_common(p)
    p.add_argument("--emax", type=float, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("trace", help="density of states on an energy grid")
    _add_common(p)
    p.add_argument("--mmax", type=int, required=True, help="winding cutoff")
    p.add_argument("--emin", type=float, required=True)
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--parts", type=str, default=None,
                   help="partition filter, e.g. '1+1,2' (default all)")
    p.add_argument("--levels-overlay", action="store_true",
                   help="also write the exact levels file")
    p.add_argument("--nodes", type=int, default=None,
                   help="quadrature nodes per angle for the smooth part")
    p.add_argument("--workers", type=int, default=None,
                   help="thread count (default BETHETRACE_WORKERS or cpu count)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("resurgence", help="oscillatory-vs-smooth cancellation ladder")
    _add_common(p)
    p.add_argument("--mmax-ladder", type=str, default="3,10,20",
                   help="comma-separated winding cutoffs")
    p.add_argument("--window", type=str, required=True,
                   help="energy window 'lo,hi'")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_resurgence)

    p = sub.add_parser("crosscheck2", help="two-particle secular-equation comparison")
    _add_common(p)
    p.add_argument("--emax", type=float, required=True)
    p.set_defaults(func=cmd_crosscheck2)

    p = sub.add_parser("verify-combinatorics", help="exact partition identity checks")
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--rmax", type=int, default=30)
    p.add_argument("--outdir", type=Path, default=Path("."))
    p.add_argument("--prefix", type=str, default=None)
    p.set_defaults(func=cmd_verify_combinatorics)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "crosscheck2" and args.n != 2:
        parser.error("crosscheck2 requires --n 2")
    try:
        return args.func(args)
    except (InvalidQuantumNumbers, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except NonConvergence as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except BetheTraceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
