"""Grid sweeps and their text outputs: report JSON, OBJ mesh, probe CSV.

All numbers are written with 9 significant digits.  Undefined quantities
are ``null`` (JSON) or empty cells (CSV), never 0.
"""

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from ._tol import base_tol, tolerance
from .curvature import bundle_from_invariants, principal_grid
from .errors import GeometryError, MeshEmpty
from .focal import focal_grid
from .lightlike import KINDS, classify_lightlike, curvature_limit_probe, parse_path
from .surface import STRATA, default_tol, invariant_grid, stratum_tags

FORMAT = "lcsurf-report/1"
MESH_SHEETS = ("base", "focal_plus", "focal_minus")
PROBE_COLUMNS = ("t", "lambda_tilde", "K_hat", "H_hat", "K", "H")


def num(x):
    """Round to 9 significant digits; ``None`` for missing or non-finite values."""
    if x is None:
        return None
    x = float(x)
    if not np.isfinite(x):
        return None
    out = float(f"{x:.9g}")
    return 0.0 if out == 0 else out


def fmt(x):
    """Text form used by the mesh and CSV writers (empty for undefined)."""
    v = num(x)
    return "" if v is None else f"{v:.9g}"


def grid_axes(cfg):
    (ua, ub), (va, vb) = cfg.ranges
    nu, nv = cfg.grid
    return np.linspace(ua, ub, nu), np.linspace(va, vb, nv)


def grid_points(cfg):
    """Parameter grid, ``u`` varying along the first axis."""
    us, vs = grid_axes(cfg)
    return np.meshgrid(us, vs, indexing="ij")


@dataclass
class Sweep:
    """Everything computed on the configuration grid."""

    U: np.ndarray
    V: np.ndarray
    inv: object
    failed: Dict[tuple, Exception]
    tags: np.ndarray
    bundle: object
    kappa: tuple
    focal: object
    kinds: Dict[tuple, object] = field(default_factory=dict)


def sweep(cfg):
    with tolerance(cfg.tol):
        U, V = grid_points(cfg)
        inv, failed = invariant_grid(cfg.surface, U, V)
        if inv is None:
            return Sweep(U, V, None, failed, None, None, None, None)
        tol = default_tol(inv)
        with np.errstate(all="ignore"):
            tags, _ = stratum_tags(inv, tol)
            bundle = bundle_from_invariants(inv.a1, inv.b1, inv.c1, inv.c2, inv.e1, inv.f1,
                                            inv.g1, inv.f2, inv.g2, tol=tol)
            kappa = principal_grid(bundle, tol)
            fg = focal_grid(cfg.surface, U, V, inv=inv)
        kinds = {}
        for idx in map(tuple, np.argwhere(tags == "lightlike").tolist()):
            if idx in failed:
                continue
            try:
                kinds[idx] = classify_lightlike(inv.at(idx), tol=float(tol[idx]))
            except GeometryError as exc:
                kinds[idx] = exc
    return Sweep(U, V, inv, failed, tags, bundle, kappa, fg, kinds)


def _sheet_entry(fg, name, idx):
    sheet = fg.sheets[name]
    F = sheet.F[(slice(None),) + idx]
    if np.isnan(fg.mu[name][idx]) or not np.all(np.isfinite(F)):
        return None
    b = sheet.bundle
    return {
        "F": [num(x) for x in F],
        "lambda_tilde": num(b.lambda_tilde[idx]),
        "K_hat": num(b.K_hat[idx]),
        "H_hat": num(b.H_hat[idx]),
    }


def _row(sw, idx):
    row = {"u": num(sw.U[idx]), "v": num(sw.V[idx])}
    if idx in sw.failed or sw.inv is None:
        row.update(dict.fromkeys(("stratum", "lambda_tilde", "K_hat", "H_hat", "K", "H",
                                  "kappa_hat_1", "kappa_hat_2", "lightlike_kind", "mu", "focal")))
        row["error"] = str(sw.failed.get(idx, "evaluation failed"))
        return row
    b = sw.bundle
    kind = sw.kinds.get(idx)
    mu = {name: num(sw.focal.mu[name][idx]) for name in ("plus", "minus")}
    row.update({
        "stratum": str(sw.tags[idx]),
        "lambda_tilde": num(b.lambda_tilde[idx]),
        "K_hat": num(b.K_hat[idx]),
        "H_hat": num(b.H_hat[idx]),
        "K": num(b.K[idx]),
        "H": num(b.H[idx]),
        "kappa_hat_1": num(sw.kappa[0][idx]),
        "kappa_hat_2": num(sw.kappa[1][idx]),
        "lightlike_kind": kind.tag if kind is not None and not isinstance(kind, Exception) else None,
        "mu": mu if any(x is not None for x in mu.values()) else None,
        "focal": {name: _sheet_entry(sw.focal, name, idx) for name in ("plus", "minus")},
        "error": None,
    })
    if row["focal"]["plus"] is None and row["focal"]["minus"] is None:
        row["focal"] = None
    return row


def run_analyze(cfg, sw=None):
    """Full per-point report for a configuration, as a plain dict.

    Per-point failures are recorded in the row's ``error`` field and never
    stop the sweep.
    """
    if sw is None:
        sw = sweep(cfg)
    rows = [_row(sw, idx) for idx in np.ndindex(sw.U.shape)]
    strata = Counter(r["stratum"] for r in rows if r["stratum"] is not None)
    kinds = Counter(r["lightlike_kind"] for r in rows if r["lightlike_kind"] is not None)
    with tolerance(cfg.tol):
        base = base_tol()
    (ua, ub), (va, vb) = cfg.ranges
    return {
        "format": FORMAT,
        "surface": cfg.surface.name,
        "config_sha256": cfg.digest(),
        "grid": {"nu": cfg.grid[0], "nv": cfg.grid[1],
                 "u": [num(ua), num(ub)], "v": [num(va), num(vb)]},
        "tolerance": num(base),
        "summary": {
            "points": len(rows),
            "errors": sum(r["error"] is not None for r in rows),
            "strata": {t: strata.get(t, 0) for t in STRATA},
            "lightlike_kinds": {k: kinds.get(k, 0) for k in KINDS},
            "branch_cut_points": 0 if sw.focal is None else int(np.count_nonzero(sw.focal.branch_cut)),
        },
        "rows": rows,
    }


def dumps_report(report):
    """Serialise a report: header keys indented, one row per line."""
    head = {k: v for k, v in report.items() if k != "rows"}
    text = json.dumps(head, indent=2, allow_nan=False)
    rows = ",\n".join("    " + json.dumps(r, allow_nan=False) for r in report["rows"])
    return text[:-2] + ',\n  "rows": [\n' + rows + "\n  ]\n}\n"


def hard_errors(report):
    return report["summary"]["errors"]


# -- mesh ---------------------------------------------------------------------

def export_mesh(cfg, which="base", sw=None):
    """OBJ text for the base surface or one focal sheet.

    Failed grid points get no vertex, and every quad touching them is
    dropped.

    Raises
    ------
    MeshEmpty
        If no grid point produced a vertex.
    """
    if which not in MESH_SHEETS:
        raise ValueError(f"unknown mesh {which!r}; choose from {', '.join(MESH_SHEETS)}")
    if sw is None:
        sw = sweep(cfg)
    nu, nv = sw.U.shape
    if sw.inv is None:
        raise MeshEmpty("every grid point failed to evaluate")
    if which == "base":
        P = sw.inv.X.value
    else:
        P = sw.focal.sheets[which.split("_")[1]].F
    ok = np.all(np.isfinite(P), axis=0)
    for idx in sw.failed:
        ok[idx] = False
    if not ok.any():
        raise MeshEmpty(f"no valid vertices for the {which} mesh")
    index = np.zeros((nu, nv), dtype=int)
    lines = [
        "# lcsurf mesh",
        f"# surface {cfg.surface.name}",
        f"# sheet {which}",
        f"# grid {nu}x{nv}",
        f"# config-sha256 {cfg.digest()}",
    ]
    n = 0
    for i in range(nu):
        for j in range(nv):
            if ok[i, j]:
                n += 1
                index[i, j] = n
                lines.append("v " + " ".join(fmt(x) for x in P[:, i, j]))
    for i in range(nu - 1):
        for j in range(nv - 1):
            quad = (index[i, j], index[i + 1, j], index[i + 1, j + 1], index[i, j + 1])
            if all(quad):
                lines.append("f " + " ".join(str(k) for k in quad))
    return "\n".join(lines) + "\n"


# -- probe --------------------------------------------------------------------

def run_probe(cfg, path=None, t_target=None, samples=None, side=None):
    """Probe CSV and the verdicts, as ``(text, ProbeReport)``.

    Defaults come from ``cfg.probe``.
    """
    spec = cfg.probe
    path = parse_path(*(path or (spec.u, spec.v)))
    with tolerance(cfg.tol):
        rep = curvature_limit_probe(
            cfg.surface, path, spec.target if t_target is None else t_target,
            samples=spec.samples if samples is None else samples,
            side=spec.side if side is None else side)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PROBE_COLUMNS)
    for r in rep.rows:
        writer.writerow([fmt(getattr(r, c)) for c in PROBE_COLUMNS])
    return buf.getvalue(), rep


def read_probe_csv(text) -> List[dict]:
    """Parse probe CSV back into dicts of floats (``None`` for empty cells)."""
    rows = list(csv.DictReader(io.StringIO(text)))
    return [{k: (float(v) if v != "" else None) for k, v in r.items()} for r in rows]
