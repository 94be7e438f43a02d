"""Command line entry point: ``lcsurf <command> [options]``.

Exit codes: 0 success, 1 configuration error, 2 numerical error (or a
failed ``verify``), 3 partial results (per-point errors without
``--allow-partial``).
"""

import argparse
import csv
import io
import json
import sys

import numpy as np
from scipy.optimize import brentq

from . import __version__
from .config import constant_value, default_config, load_config_file
from .errors import ConfigError, ExpressionError, GeometryError, LcsurfError
from .focal import mu_roots, relation_checks, focal_invariants
from .lightlike import classify_lightlike
from .report import (MESH_SHEETS, dumps_report, export_mesh, fmt, grid_axes, num, run_analyze,
                     run_probe, sweep)
from ._tol import tolerance
from .surface import invariants_at
from . import verify

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PARTIAL = 0, 1, 2, 3


def _grid_arg(text):
    parts = text.lower().split("x")
    try:
        sizes = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NU or NUxNV, got {text!r}") from None
    if len(sizes) == 1:
        sizes *= 2
    if len(sizes) != 2:
        raise argparse.ArgumentTypeError(f"expected NU or NUxNV, got {text!r}")
    return tuple(sizes)


def _point_arg(text):
    try:
        u, v = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected U,V, got {text!r}") from None
    return u, v


def _config(args):
    cfg = load_config_file(args.config) if args.config else default_config()
    return cfg.with_overrides(grid=getattr(args, "grid", None), tol=getattr(args, "tol", None),
                              branch=getattr(args, "branch", None))


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_analyze(args):
    cfg = _config(args)
    report = run_analyze(cfg)
    _emit(dumps_report(report), args.out or cfg.outputs.get("report"))
    errors = report["summary"]["errors"]
    if errors and not args.allow_partial:
        print(f"{errors} grid point(s) failed; see the 'error' fields", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _lightlike_points(cfg):
    """Zeros of ``lambda~`` along every ``u``-row of the grid."""
    us, vs = grid_axes(cfg)
    surf = cfg.surface

    def lam(u, v):
        inv = invariants_at(surf, u, v, order=1)
        return -4.0 * inv.a1.value * inv.b1.value

    out = []
    for v0 in vs:
        vals = lam(us, np.full_like(us, v0))
        for k in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]:
            if vals[k] == 0 and k > 0:
                continue  # counted with the previous interval
            if vals[k] == 0 or vals[k + 1] == 0:
                u0 = us[k] if vals[k] == 0 else us[k + 1]
            else:
                u0 = brentq(lambda x: float(lam(x, v0)), us[k], us[k + 1], xtol=1e-14)
            out.append((float(u0), float(v0)))
    return sorted(set(out), key=lambda p: (p[1], p[0]))


def cmd_classify(args):
    cfg = _config(args)
    points = [args.at] if args.at else _lightlike_points(cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("u", "v", "kind", "eta_lambda", "eta2_lambda", "hessian_det", "error"))
    failures = 0
    with tolerance(cfg.tol):
        for u0, v0 in points:
            try:
                k = classify_lightlike(cfg.surface, u0, v0)
                wit = k.witnesses
                w.writerow((fmt(u0), fmt(v0), k.tag, fmt(wit.get("eta_lambda")),
                            fmt(wit.get("eta2_lambda")), fmt(wit.get("hessian_det")), ""))
            except GeometryError as exc:
                failures += 1
                w.writerow((fmt(u0), fmt(v0), "", "", "", "", f"{type(exc).__name__}: {exc}"))
    _emit(buf.getvalue(), args.out)
    if args.at and failures:
        return EXIT_NUMERIC
    return EXIT_OK


def _focal_at(cfg, u0, v0):
    with tolerance(cfg.tol):
        roots = mu_roots(cfg.surface, u0, v0)
        out = {"u": num(u0), "v": num(v0), "case": roots.case, "roots": [], "relations": []}
        for r in roots.roots:
            entry = {"mu": num(r.value), "sheet": r.sheet, "double_root": r.double_root}
            try:
                sheet = focal_invariants(cfg.surface, u0, v0, near=r.value)
                entry["F"] = [num(x) for x in sheet.F]
                entry["invariants"] = {k: num(v) for k, v in sheet.inv.items()}
                entry["lambda_tilde"] = num(sheet.bundle.lambda_tilde)
                entry["K_hat"] = num(sheet.bundle.K_hat)
                entry["H_hat"] = num(sheet.bundle.H_hat)
            except GeometryError as exc:
                entry["error"] = f"{type(exc).__name__}: {exc}"
            out["roots"].append(entry)
        for rel in relation_checks(cfg.surface, u0, v0):
            out["relations"].append({"name": rel.name, "status": rel.status, "note": rel.note})
    return json.dumps(out, indent=2) + "\n"


def cmd_focal(args):
    cfg = _config(args)
    if args.at:
        _emit(_focal_at(cfg, *args.at), args.out)
        return EXIT_OK
    sw = sweep(cfg)
    if sw.inv is None:
        raise GeometryError("every grid point failed to evaluate")
    fg = sw.focal
    sheet = fg.sheets[cfg.branch]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("u", "v", "mu", "F1", "F2", "F3", "lambda_tilde", "K_hat", "H_hat", "branch_cut"))
    for idx in np.ndindex(sw.U.shape):
        F = sheet.F[(slice(None),) + idx]
        w.writerow([fmt(sw.U[idx]), fmt(sw.V[idx]), fmt(fg.mu[cfg.branch][idx])]
                   + [fmt(x) for x in F]
                   + [fmt(sheet.bundle.lambda_tilde[idx]), fmt(sheet.bundle.K_hat[idx]),
                      fmt(sheet.bundle.H_hat[idx]), int(fg.branch_cut[idx])])
    _emit(buf.getvalue(), args.out)
    if sw.failed and not args.allow_partial:
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_mesh(args):
    cfg = _config(args)
    which = args.sheet or (f"focal_{args.branch}" if args.branch else "base")
    sw = sweep(cfg)
    _emit(export_mesh(cfg, which, sw=sw), args.out or cfg.outputs.get("mesh"))
    if sw.failed and not args.allow_partial:
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_probe(args):
    cfg = _config(args)
    spec = cfg.probe
    path = (args.u or spec.u, args.v or spec.v)
    text, rep = run_probe(cfg, path, args.target, args.samples, args.side)
    _emit(text, args.out or cfg.outputs.get("probe"))
    for name, v in rep.verdicts.items():
        limit = "" if v.limit is None else f" (limit {v.limit:.9g})"
        print(f"{name}: {v.kind}{limit}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    results = verify.run_all()
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_NUMERIC


def _target(text):
    try:
        return constant_value(text)
    except (ExpressionError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    p = argparse.ArgumentParser(prog="lcsurf", description=(
        "Invariants, curvatures, lightlike points and focal sheets of lightcone framed surfaces."))
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=True):
        sp.add_argument("--config", help="TOML run configuration (default: built-in paper-example)")
        if grid:
            sp.add_argument("--grid", type=_grid_arg, help="grid size NU or NUxNV")
        sp.add_argument("--tol", type=float, help="base zero tolerance")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("analyze", help="per-point report over the grid (JSON)")
    common(sp)
    sp.add_argument("--allow-partial", action="store_true", help="exit 0 even if some points fail")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("classify", help="classify lightlike points found on the grid rows (CSV)")
    common(sp)
    sp.add_argument("--at", type=_point_arg, metavar="U,V", help="classify a single point")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("focal", help="focal sheet over the grid (CSV) or roots at a point (JSON)")
    common(sp)
    sp.add_argument("--branch", choices=("plus", "minus"))
    sp.add_argument("--at", type=_point_arg, metavar="U,V", help="report the roots at a single point")
    sp.add_argument("--allow-partial", action="store_true")
    sp.set_defaults(func=cmd_focal)

    sp = sub.add_parser("mesh", help="OBJ mesh of the surface or a focal sheet")
    common(sp)
    sp.add_argument("--sheet", choices=MESH_SHEETS)
    sp.add_argument("--branch", choices=("plus", "minus"), help="shorthand for --sheet focal_BRANCH")
    sp.add_argument("--allow-partial", action="store_true")
    sp.set_defaults(func=cmd_mesh)

    sp = sub.add_parser("probe", help="curvatures along a path approaching a lightlike point (CSV)")
    common(sp, grid=False)
    sp.add_argument("--u", help="u(t) path expression")
    sp.add_argument("--v", help="v(t) path expression")
    sp.add_argument("--target", type=_target, help="target parameter t (number or constant expression)")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--side", type=int, choices=(-1, 1))
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("verify", help="run the built-in regression checks")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ExpressionError as exc:
        print(f"expression error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LcsurfError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
