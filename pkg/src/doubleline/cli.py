"""Command-line surface over the pattern, folding and thickening modules.

Angles are degrees on the command line and radians inside the library.
CSV output uses '.' decimals, ',' separators and 12 significant digits.
No subcommand consults the clock or global RNG, so repeated runs on the
same inputs write byte-identical files.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .dl import (
    FINITE,
    GENERIC_MODES,
    MULTIPLIER_KEY,
    DoubleLineParams,
    assign_mode_mv,
    classify_theta,
    construct_dl,
    mode_from_label,
    pattern_multipliers,
)
from .fold3d import export_obj, network_multipliers, propagate_fold, solve_fold_angles, sweep_motion
from .fold_io import get_extra, load_fold, save_fold, set_extra
from .pattern import CreasePattern, PatternError, is_flat_foldable_deg4, vertex_star
from .patterns import (
    gen_dl_miura,
    gen_dl_yoshimura,
    gen_miura,
    gen_single_deg4,
    gen_symmetric_vertex,
    gen_yoshimura,
    infer_modes,
)
from .svg import save_svg
from .symmetric import count_modes, enumerate_mode_sequences
from .thicken import (
    ThickPanelParams,
    clearance_records,
    export_clearance_csv,
    export_solids_obj,
    flat_fold_parameter,
    thicken,
)

GEN_SHAPES = ("miura", "yoshimura", "dl-miura", "dl-yoshimura", "single", "symmetric")


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _load(path: str) -> CreasePattern:
    return load_fold(Path(path).read_bytes())


def _motion_multipliers(pattern: CreasePattern) -> np.ndarray:
    """Per-crease speed multipliers, from stored metadata or unique branches."""
    raw = get_extra(pattern, MULTIPLIER_KEY)
    if raw is not None:
        mult = np.asarray(raw, dtype=float)
        if len(mult) != len(pattern.creases):
            raise PatternError("stored multiplier vector does not match crease count")
        return mult
    return network_multipliers(pattern, infer_modes(pattern))


def _default_t_max(pattern: CreasePattern, multipliers: np.ndarray) -> float:
    """Sweep limit: just short of the flat state for doubled patterns."""
    t_flat = flat_fold_parameter(pattern, multipliers)
    return 0.97 * t_flat if t_flat is not None else 1.0


def _cmd_analyze(args) -> bytes:
    pattern = _load(args.pattern)
    counts = {"M": 0, "V": 0, "B": 0, "U": 0}
    for c in pattern.creases:
        counts[c.assignment] += 1
    lines = [
        f"vertices: {len(pattern.vertices)}",
        "creases: {} (M {}, V {}, B {}, U {})".format(len(pattern.creases), *counts.values()),
        f"interior vertices: {len(pattern.interior_vertices)}",
        f"faces: {len(pattern.faces)}",
    ]
    try:
        modes = infer_modes(pattern)
    except PatternError:
        modes = {}
    for v in pattern.interior_vertices:
        star = vertex_star(pattern, v)
        flat = star.degree == 4 and is_flat_foldable_deg4(star)
        branch = modes[v].value if v in modes else "?"
        lines.append(
            f"vertex {v}: degree {star.degree}, "
            f"flat-foldable deg-4 {'yes' if flat else 'no'}, branch {branch}"
        )
    return ("\n".join(lines) + "\n").encode()


def _cmd_doubleline(args) -> bytes:
    pattern = _load(args.pattern)
    if not pattern.interior_vertices:
        raise PatternError("pattern has no interior vertex to double")
    vid = args.vertex if args.vertex is not None else pattern.interior_vertices[0]
    star = vertex_star(pattern, vid)
    if args.radii:
        radii = tuple(float(x) for x in args.radii.split(","))
    else:
        radii = (1.0,) * star.degree
    params = DoubleLineParams(math.radians(args.theta), radii)
    doubled = construct_dl(star, params, outer_length=args.outer_length)
    if args.mode:
        mult = pattern_multipliers(doubled, mode_from_label(args.mode))
        doubled = assign_mode_mv(doubled, mult)
        doubled = set_extra(doubled, MULTIPLIER_KEY, [float(m) for m in mult])
    if (args.format or "fold") == "svg":
        return save_svg(doubled)
    return save_fold(doubled)


def _cmd_classify(args) -> bytes:
    alpha, beta = math.radians(args.alpha), math.radians(args.beta)
    if args.theta is not None:
        regime = classify_theta(mode_from_label(args.mode or "a-I"), alpha, beta, math.radians(args.theta))
        return (str(regime) + "\n").encode()
    modes = [mode_from_label(args.mode)] if args.mode else list(GENERIC_MODES)
    step = args.grid
    if step <= 0:
        raise ValueError("--grid step must be positive")
    thetas = []
    th = step
    while th < 180.0 - 1e-9:
        thetas.append(th)
        th += step
    rows = ["mode,theta_deg,regime,M_deg"]
    for mode in modes:
        for th in thetas:
            regime = classify_theta(mode, alpha, beta, math.radians(th))
            extremum = _fmt(math.degrees(regime.extremum)) if regime.tag == FINITE else ""
            rows.append(f"{mode.label},{_fmt(th)},{regime.tag},{extremum}")
    return ("\n".join(rows) + "\n").encode()


def _cmd_modes(args) -> bytes:
    lines = [str(count_modes(args.n))]
    if args.sequences or args.check:
        seqs = enumerate_mode_sequences(args.n)
        if args.sequences:
            lines.extend(sorted(seqs))
        if args.check:
            verdict = "agree" if len(seqs) == count_modes(args.n) else "DISAGREE"
            lines.append(f"enumeration: {len(seqs)} ({verdict})")
    return ("\n".join(lines) + "\n").encode()


def _motion_csv(pattern: CreasePattern, samples) -> bytes:
    header = "t," + ",".join(f"rho_{i}" for i in range(len(pattern.creases))) + ",residual"
    rows = [header]
    for s in samples:
        angles = ",".join(_fmt(math.degrees(a)) for a in s.fold_angles)
        rows.append(f"{_fmt(s.t)},{angles},{_fmt(s.residual)}")
    return ("\n".join(rows) + "\n").encode()


def _cmd_sweep(args) -> bytes:
    pattern = _load(args.pattern)
    mult = _motion_multipliers(pattern)
    t_max = args.t_max if args.t_max is not None else _default_t_max(pattern, mult)
    grid = np.linspace(0.0, t_max, args.samples)
    tol = args.tolerance if args.tolerance is not None else 1e-9
    motion = sweep_motion(pattern, None, grid, residual_tol=tol, multipliers=mult)
    return _motion_csv(pattern, motion)


def _cmd_fold(args) -> bytes:
    pattern = _load(args.pattern)
    mult = _motion_multipliers(pattern)
    angles = 2.0 * np.arctan(mult * args.t)
    fmt = args.format or "fold"
    if fmt == "obj":
        return export_obj(propagate_fold(pattern, angles))
    if fmt == "csv":
        motion = sweep_motion(pattern, None, [args.t], multipliers=mult)
        return _motion_csv(pattern, motion)
    return save_fold(pattern, angles)


def _cmd_solve(args) -> bytes:
    pattern = _load(args.pattern)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    angles = solve_fold_angles(pattern, args.driver, math.radians(args.target), tol=tol)
    if (args.format or "csv") == "fold":
        return save_fold(pattern, angles)
    rows = ["crease,rho_deg"]
    rows.extend(f"{i},{_fmt(math.degrees(a))}" for i, a in enumerate(angles))
    return ("\n".join(rows) + "\n").encode()


def _cmd_thicken(args) -> bytes:
    pattern = _load(args.pattern)
    mult = _motion_multipliers(pattern)
    t_max = args.t_max if args.t_max is not None else _default_t_max(pattern, mult)
    grid = np.geomspace(t_max * 1e-3, t_max, args.samples)
    motion = sweep_motion(pattern, None, grid, multipliers=mult)
    params = ThickPanelParams(tau=args.tau, side=args.side, enforce_bound=not args.ignore_bound)
    solids = thicken(pattern, motion, params)
    if (args.format or "obj") == "csv":
        return export_clearance_csv(clearance_records(solids, motion)).encode()
    return export_solids_obj(solids).encode()


def _require(args, names: Sequence[str]) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            args.parser.error(f"--{name} is required for shape {args.shape}")


def _cmd_gen(args) -> bytes:
    shape = args.shape
    if shape == "single":
        _require(args, ("alpha", "beta"))
        pattern = gen_single_deg4(math.radians(args.alpha), math.radians(args.beta))
    elif shape == "symmetric":
        _require(args, ("n",))
        pattern = gen_symmetric_vertex(args.n)
    elif shape == "miura":
        _require(args, ("rows", "cols", "angle"))
        pattern = gen_miura(args.rows, args.cols, math.radians(args.angle)).pattern
    elif shape == "yoshimura":
        _require(args, ("rows", "cols", "elongation"))
        pattern = gen_yoshimura(args.rows, args.cols, args.elongation).pattern
    elif shape == "dl-miura":
        _require(args, ("rows", "cols", "angle", "theta"))
        pattern = gen_dl_miura(args.rows, args.cols, math.radians(args.angle), math.radians(args.theta))
    else:
        _require(args, ("rows", "cols", "elongation", "theta"))
        pattern = gen_dl_yoshimura(args.rows, args.cols, args.elongation, math.radians(args.theta))
    if (args.format or "fold") == "svg":
        return save_svg(pattern)
    return save_fold(pattern)


def _cmd_export(args) -> bytes:
    pattern = _load(args.pattern)
    fmt = args.format or "svg"
    if fmt == "svg":
        return save_svg(pattern)
    if fmt == "fold":
        return save_fold(pattern)
    if fmt == "obj":
        angles = np.array([c.fold_angle if c.fold_angle is not None else 0.0 for c in pattern.creases])
        return export_obj(propagate_fold(pattern, angles))
    raise ValueError("csv export needs a motion; use the sweep subcommand")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("fold", "svg", "obj", "csv"), help="output format")
    common.add_argument("--tolerance", type=float, help="numeric tolerance override")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized drivers")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (reserved)")

    parser = argparse.ArgumentParser(prog="doubleline", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="summarize a crease pattern")
    p.add_argument("pattern", help="FOLD file")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("doubleline", parents=[common], help="double one interior vertex")
    p.add_argument("pattern", help="FOLD file")
    p.add_argument("--vertex", type=int, help="interior vertex id (default: lowest)")
    p.add_argument("--theta", type=float, required=True, help="rotation angle in degrees")
    p.add_argument("--radii", help="comma-separated polygon distances r_i")
    p.add_argument("--outer-length", type=float, help="boundary reach of the doubled rays")
    p.add_argument("--mode", help="folding mode label (a-I, a-II, b-I, b-II) for M/V labels")
    p.set_defaults(handler=_cmd_doubleline)

    p = sub.add_parser("classify", parents=[common], help="theta regime of a doubled vertex")
    p.add_argument("--alpha", type=float, required=True, help="first sector angle in degrees")
    p.add_argument("--beta", type=float, required=True, help="second sector angle in degrees")
    p.add_argument("--mode", help="folding mode label (default: a-I, or all four in a table)")
    p.add_argument("--theta", type=float, help="single theta in degrees (prints its regime)")
    p.add_argument("--grid", type=float, default=1.0, help="theta grid step in degrees for the table")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("modes", parents=[common], help="count symmetric-vertex folding modes")
    p.add_argument("--n", type=int, required=True, help="half the vertex degree")
    p.add_argument("--sequences", action="store_true", help="list canonical sign sequences")
    p.add_argument("--check", action="store_true", help="compare count against enumeration")
    p.set_defaults(handler=_cmd_modes)

    p = sub.add_parser("sweep", parents=[common], help="sample the one-parameter motion to CSV")
    p.add_argument("pattern", help="FOLD file")
    p.add_argument("--t-max", type=float, help="largest motion parameter (default: near flat)")
    p.add_argument("--samples", type=int, default=50, help="number of samples")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("fold", parents=[common], help="fold angles at one motion parameter")
    p.add_argument("pattern", help="FOLD file")
    p.add_argument("--t", type=float, required=True, help="motion parameter")
    p.set_defaults(handler=_cmd_fold)

    p = sub.add_parser("solve", parents=[common], help="fold by pinning one crease angle")
    p.add_argument("pattern", help="FOLD file")
    p.add_argument("--driver", type=int, required=True, help="driver crease id")
    p.add_argument("--target", type=float, required=True, help="driver fold angle in degrees")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("thicken", parents=[common], help="thick panels and clearance log")
    p.add_argument("pattern", help="FOLD file")
    p.add_argument("--tau", type=float, required=True, help="panel thickness")
    p.add_argument("--side", choices=("above", "below"), default="above", help="panel side")
    p.add_argument("--t-max", type=float, help="largest motion parameter (default: near flat)")
    p.add_argument("--samples", type=int, default=50, help="number of motion samples")
    p.add_argument("--ignore-bound", action="store_true", help="allow thickness beyond the bound")
    p.set_defaults(handler=_cmd_thicken)

    p = sub.add_parser("gen", parents=[common], help="generate a standard pattern")
    p.add_argument("shape", choices=GEN_SHAPES)
    p.add_argument("--rows", type=int, help="tessellation rows")
    p.add_argument("--cols", type=int, help="tessellation columns")
    p.add_argument("--angle", type=float, help="parallelogram angle in degrees (miura)")
    p.add_argument("--elongation", type=float, help="stretch factor > 1 (yoshimura)")
    p.add_argument("--theta", type=float, help="doubling rotation angle in degrees (dl-*)")
    p.add_argument("--alpha", type=float, help="first sector angle in degrees (single)")
    p.add_argument("--beta", type=float, help="second sector angle in degrees (single)")
    p.add_argument("--n", type=int, help="half the vertex degree (symmetric)")
    p.set_defaults(handler=_cmd_gen, parser=p)

    p = sub.add_parser("export", parents=[common], help="convert a pattern file")
    p.add_argument("pattern", help="FOLD file")
    p.set_defaults(handler=_cmd_export)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        payload = args.handler(args)
    except SystemExit as exit_:  # argparse exits on usage errors and --help
        return int(exit_.code or 0)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    return 0


run = main
