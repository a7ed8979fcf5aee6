"""Command-line interface.

Subcommands: ``omega`` (solid-angle volumes or point tables), ``framing``
(solid-angle framing export), ``scroll`` and ``director`` (knotted field
initial conditions), ``verify`` (self-check suites). Every field output is
accompanied by a ``<base>.manifest.json`` that echoes the full configuration
and suffices to reproduce the run byte-for-byte.

Exit codes: 0 success, 1 evaluation/validation failure, 2 usage error.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, fields, formats
from .curve import (CurveFormatError, CurveValidationError, ResolutionError,
                    load_link)
from .framing import FramingError, framing_self_link, solid_angle_framing
from .solidangle import (EVALUATORS, EvalConfig, EvaluationError, GridSpec,
                         omega_grid)
from .spherical import GeneralPositionError

_USER_ERRORS = (CurveFormatError, CurveValidationError, ResolutionError,
                EvaluationError, FramingError, GeneralPositionError,
                ValueError, RuntimeError, OSError)


def _vec3(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'x,y,z', got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad vector component in {text!r}")


def _dims(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'NX,NY,NZ', got {text!r}")
    try:
        d = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension in {text!r}")
    if any(v < 2 for v in d):
        raise argparse.ArgumentTypeError("grid dims must be >= 2")
    return d


def _add_common(p, grid=True):
    p.add_argument("--curve", required=True, help="curve file")
    p.add_argument("--ninf", type=_vec3, default=None,
                   help="reference direction x,y,z (default 0,0,1)")
    p.add_argument("--threshold", type=float, default=0.05,
                   help="axis switch threshold on 1+n.ninf (default 0.05)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed of the deterministic fallback axis")
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads for grid evaluation (results are "
                        "independent of this)")
    p.add_argument("--out", required=True, help="output base path")
    if grid:
        p.add_argument("--grid", type=_dims, help="grid dims NX,NY,NZ")
        p.add_argument("--origin", type=_vec3, help="grid origin x,y,z")
        p.add_argument("--spacing", type=float, help="isotropic grid spacing")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="knotfields",
        description="Solid-angle fields of knotted curves and links.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("omega", help="solid-angle volume or point table")
    _add_common(p)
    p.add_argument("--evaluator", choices=EVALUATORS,
                   default="infinity_triangle")
    p.add_argument("--points", help="evaluate at points from this file "
                                    "instead of on a grid")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("framing", help="solid-angle framing export")
    p.add_argument("--curve", required=True)
    p.add_argument("--eps-rel", type=float, default=0.02,
                   help="pushoff radius relative to the minimum curvature "
                        "radius (default 0.02)")
    p.add_argument("--ninf", type=_vec3, default=None)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_framing)

    p = sub.add_parser("scroll", help="scroll-wave phase volume")
    _add_common(p)
    p.add_argument("--k", type=float, required=True, help="wavenumber")
    p.add_argument("--modulate", help="two-column (s, offset) table file")
    p.set_defaults(func=cmd_scroll)

    p = sub.add_parser("director", help="nematic director volume")
    _add_common(p)
    p.add_argument("--second-curve", help="curve file for the in-plane "
                                          "winding angle")
    p.set_defaults(func=cmd_director)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--curve", required=True)
    p.add_argument("--points", type=int, default=100,
                   help="number of generic sample points")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--json", help="write the machine-readable report here")
    p.set_defaults(func=cmd_verify)
    return ap


def _load(path):
    text = Path(path).read_text()
    return load_link(text), formats.sha256_bytes(text.encode())


def _grid_from_args(args):
    missing = [f for f in ("grid", "origin", "spacing")
               if getattr(args, f) is None]
    if missing:
        raise ValueError(f"grid mode needs --grid, --origin and --spacing "
                         f"(missing: {', '.join(missing)})")
    return GridSpec(origin=args.origin, spacing=args.spacing, dims=args.grid)


def _config_from_args(args, evaluator="infinity_triangle"):
    ninf = args.ninf if args.ninf is not None else np.array([0.0, 0.0, 1.0])
    return EvalConfig(n_inf=ninf, switch_threshold=args.threshold,
                      fallback_seed=args.seed, evaluator=evaluator)


def _manifest(command, args, curve_hash, cfg=None, grid=None, extra=None):
    m = {
        "command": command,
        "tool_version": __version__,
        "curve_file": str(args.curve),
        "curve_sha256": curve_hash,
        "out": str(args.out),
    }
    if cfg is not None:
        m["config"] = {
            "evaluator": cfg.evaluator,
            "n_inf": [float(v) for v in cfg.n_inf],
            "switch_threshold": cfg.switch_threshold,
            "fallback_seed": cfg.fallback_seed,
        }
    if grid is not None:
        m["grid"] = {
            "origin": [float(v) for v in grid.origin],
            "spacing": float(grid.spacing),
            "dims": list(grid.dims),
        }
    if getattr(args, "workers", None) is not None:
        m["workers"] = args.workers
    if extra:
        m.update(extra)
    return m


def cmd_omega(args):
    link, curve_hash = _load(args.curve)
    cfg = _config_from_args(args, args.evaluator)
    t0 = time.perf_counter()
    if args.points:
        xs = formats.load_points_file(Path(args.points).read_text())
        from .solidangle import omega_point
        omega = [omega_point(link, x, cfg) for x in xs]
        out_table = Path(args.out).with_name(Path(args.out).name + ".omega.txt")
        formats.write_points_table(out_table, xs, omega)
        extra = {"points_file": str(args.points),
                 "outputs": {"table": out_table.name},
                 "wall_seconds": time.perf_counter() - t0}
        formats.write_manifest(args.out, _manifest("omega", args, curve_hash,
                                                   cfg, None, extra))
        return 0
    grid = _grid_from_args(args)
    field = omega_grid(link, grid, cfg, workers=args.workers)
    outputs = formats.write_scalar_volume(args.out, field, name="omega")
    extra = {"outputs": outputs,
             "sentinel_nodes": field.meta["sentinel_nodes"],
             "fallback_axis": field.meta["fallback_axis"],
             "wall_seconds": time.perf_counter() - t0}
    formats.write_manifest(args.out, _manifest("omega", args, curve_hash,
                                               cfg, grid, extra))
    return 0


def cmd_framing(args):
    link, curve_hash = _load(args.curve)
    cfg = EvalConfig(n_inf=args.ninf if args.ninf is not None else np.array([0.0, 0.0, 1.0]),
                     switch_threshold=args.threshold, fallback_seed=args.seed)
    t0 = time.perf_counter()
    self_links = []
    tables = []
    multi = len(link.components) > 1
    for ci, comp in enumerate(link.components):
        eps = args.eps_rel * comp.rho_min
        fr = solid_angle_framing(link, eps=eps, cfg=cfg, component=ci)
        sl = framing_self_link(fr)
        self_links.append(sl)
        suffix = f".framing-{ci}.txt" if multi else ".framing.txt"
        path = Path(args.out).with_name(Path(args.out).name + suffix)
        formats.write_framing_table(path, fr)
        tables.append(path.name)
    extra = {"eps_rel": args.eps_rel,
             "self_link": self_links if multi else self_links[0],
             "n_components": len(link.components),
             "outputs": {"tables": tables},
             "wall_seconds": time.perf_counter() - t0}
    formats.write_manifest(args.out, _manifest("framing", args, curve_hash,
                                               cfg, None, extra))
    return 0


def cmd_scroll(args):
    link, curve_hash = _load(args.curve)
    cfg = _config_from_args(args)
    grid = _grid_from_args(args)
    modulation = None
    if args.modulate:
        modulation = formats.load_modulation_file(Path(args.modulate).read_text())
    t0 = time.perf_counter()
    psi = fields.scroll_phase(link, grid, args.k, cfg, modulation=modulation,
                              workers=args.workers)
    outputs = formats.write_scalar_volume(args.out, psi, name="psi")
    extra = {"outputs": outputs, "k": args.k,
             "modulate_file": str(args.modulate) if args.modulate else None,
             "sentinel_nodes": psi.meta.get("sentinel_nodes", []),
             "wall_seconds": time.perf_counter() - t0}
    formats.write_manifest(args.out, _manifest("scroll", args, curve_hash,
                                               cfg, grid, extra))
    return 0


def cmd_director(args):
    link, curve_hash = _load(args.curve)
    cfg = _config_from_args(args)
    grid = _grid_from_args(args)
    t0 = time.perf_counter()
    omega_k = omega_grid(link, grid, cfg, workers=args.workers)
    extra = {"n_components": len(link.components)}
    if args.second_curve:
        second, second_hash = _load(args.second_curve)
        omega_l = omega_grid(second, grid, cfg, workers=args.workers)
        if omega_l.meta["sentinel_nodes"]:
            raise EvaluationError(
                "the second curve passes through grid nodes: "
                f"{omega_l.meta['sentinel_nodes'][:4]}...")
        director = fields.full_director(omega_k, omega_l)
        extra["second_curve"] = str(args.second_curve)
        extra["second_curve_sha256"] = second_hash
    else:
        director = fields.planar_director(omega_k)
    outputs = formats.write_vector_volume(args.out, director)
    extra.update({"outputs": outputs,
                  "sentinel_nodes": omega_k.meta["sentinel_nodes"],
                  "wall_seconds": time.perf_counter() - t0})
    formats.write_manifest(args.out, _manifest("director", args, curve_hash,
                                               cfg, grid, extra))
    return 0


def cmd_verify(args):
    from .checks import run_verify
    link, curve_hash = _load(args.curve)
    report = run_verify(link, n_points=args.points, seed=args.seed)
    report["curve_sha256"] = curve_hash
    width = max(len(c["name"]) for c in report["checks"])
    for c in report["checks"]:
        flag = "PASS" if c["passed"] else "FAIL"
        print(f"{c['name']:<{width}}  {flag}  value={c['value']:.3e} "
              f"tol={c['tolerance']:.3e}  {c['detail']}")
    print("overall:", "PASS" if report["passed"] else "FAIL")
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0 if report["passed"] else 1


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _USER_ERRORS as exc:
        print(f"knotfields {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
