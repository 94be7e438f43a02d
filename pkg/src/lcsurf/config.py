"""Run configuration: a small TOML document.

Example::

    [surface]
    name = "sphere-like"
    X.x1 = "sin(u)"
    X.x2 = "cos(u)*sin(v)"
    X.x3 = "cos(u)*cos(v)"
    v.x1 = "1"
    v.x2 = "sin(v)"
    v.x3 = "cos(v)"
    w.x1 = "1"
    w.x2 = "-sin(v)"
    w.x3 = "-cos(v)"

    [domain]
    u = [0, "2*pi"]
    v = [0, "2*pi"]

    [grid]
    nu = 64
    nv = 64

Built-in surfaces are selected with ``surface = "paper-example"`` at the top
level or ``builtin = "paper-example"`` inside ``[surface]``.
"""

import hashlib
import json
import math
import re
import sys
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import expr
from .errors import ConfigError, ExpressionError, ValidationError
from .fixtures import BUILTINS, builtin
from .surface import SurfaceDef, validate_surface

SECTIONS = ("surface", "domain", "grid", "tolerance", "output", "focal", "probe")
COMPONENTS = tuple(f"{vec}.x{k}" for vec in ("X", "v", "w") for k in (1, 2, 3))
OUTPUT_KEYS = ("report", "mesh", "probe")


@dataclass(frozen=True)
class ProbeSpec:
    u: str = "t"
    v: str = "0"
    target: float = 5 * math.pi / 4
    samples: int = 24
    side: int = -1


@dataclass(frozen=True)
class RunConfig:
    surface: SurfaceDef
    grid: Tuple[int, int] = (64, 64)
    domain: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None
    tol: Optional[float] = None
    outputs: Dict[str, str] = field(default_factory=dict)
    branch: str = "plus"
    probe: ProbeSpec = ProbeSpec()

    @property
    def ranges(self):
        """Sampling ranges: the override if set, else the surface domain."""
        return self.domain if self.domain is not None else self.surface.domain

    def with_overrides(self, grid=None, tol=None, branch=None):
        changes = {}
        if grid is not None:
            changes["grid"] = _check_grid(grid, None, None)
        if tol is not None:
            changes["tol"] = float(tol)
        if branch is not None:
            changes["branch"] = branch
        return replace(self, **changes)

    def canonical(self):
        """Effective settings as a plain dict (used for hashing)."""
        return {
            "surface": {"name": self.surface.name, **self.surface.sources(),
                        "domain": [list(r) for r in self.surface.domain]},
            "ranges": [list(r) for r in self.ranges],
            "grid": list(self.grid),
            "tol": self.tol,
            "branch": self.branch,
        }

    def digest(self):
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _line_of(text, key, section=None):
    """Best-effort line number of ``key`` (inside ``section``) in the TOML text."""
    current = None
    leaf = key.split(".")[0] if section is None else key
    pattern = re.compile(r"^\s*" + re.escape(leaf).replace(r"\.", r"\s*\.\s*") + r"\s*=")
    header = re.compile(r"^\s*\[\s*([^\]]+?)\s*\]")
    section_line = None
    for n, line in enumerate(text.splitlines(), start=1):
        m = header.match(line)
        if m:
            current = m.group(1)
            if current == section:
                section_line = n
            continue
        if current == section and pattern.match(line):
            return n
    return section_line


def _err(text, message, key, section=None):
    full = f"{section}.{key}" if section else key
    return ConfigError(message, key=full, line=_line_of(text, key, section))


def constant_value(source):
    """Value of a constant expression such as ``"5*pi/4"``.

    Raises
    ------
    ExpressionError
        If ``source`` does not parse or mentions a variable.
    ValueError
        If it parses but cannot be folded to a number.
    """
    node = expr.parse_expr(source, variables=())
    out = expr._fold_constant(node)
    if out is None:
        raise ValueError(f"{source!r} cannot be evaluated to a number")
    return float(out)


def _number(value, text, key, section):
    if isinstance(value, bool):
        raise _err(text, "expected a number", key, section)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return constant_value(value)
        except (ExpressionError, ValueError) as exc:
            raise _err(text, f"bad constant expression: {exc}", key, section) from None
    raise _err(text, "expected a number", key, section)


def _check_grid(grid, text, where):
    nu, nv = grid
    for label, n in (("nu", nu), ("nv", nv)):
        if isinstance(n, bool) or not isinstance(n, int):
            if text is None:
                raise ConfigError(f"grid size {label} must be an integer", key=f"grid.{label}")
            raise _err(text, f"grid size {label} must be an integer", label, "grid")
        if n < 2:
            if text is None:
                raise ConfigError(f"grid size {label} = {n} is too small (need >= 2)",
                                  key=f"grid.{label}")
            raise _err(text, f"grid size {label} = {n} is too small (need >= 2)", label, "grid")
    return (nu, nv)


def _range(value, text, key):
    if not isinstance(value, list) or len(value) != 2:
        raise _err(text, "expected a two-element list [min, max]", key, "domain")
    lo, hi = (_number(x, text, key, "domain") for x in value)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise _err(text, f"bounds must be finite with min < max, got [{lo}, {hi}]", key, "domain")
    return (lo, hi)


def load_config(text, validate=True):
    """Parse and validate a configuration document.

    Raises
    ------
    ConfigError
        With the offending key and, where it can be located, its line.
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"not valid TOML: {exc}", line=int(m.group(1)) if m else None) from None

    shorthand = data.pop("surface", None)
    if isinstance(shorthand, str):
        sec = {"builtin": shorthand}
    elif isinstance(shorthand, dict):
        sec = shorthand
    elif shorthand is None:
        raise ConfigError("missing [surface] section", key="surface")
    else:
        raise _err(text, "surface must be a table or a built-in name", "surface")
    unknown = set(data) - set(SECTIONS)
    if unknown:
        key = sorted(unknown)[0]
        raise _err(text, f"unknown section or key {key!r}", key)

    domain = data.get("domain", {})
    ranges = None
    if domain:
        extra = set(domain) - {"u", "v"}
        if extra:
            raise _err(text, f"unknown key {sorted(extra)[0]!r}", sorted(extra)[0], "domain")
        if set(domain) != {"u", "v"}:
            missing = ({"u", "v"} - set(domain)).pop()
            raise _err(text, f"missing key {missing!r}", missing, "domain")
        ranges = (_range(domain["u"], text, "u"), _range(domain["v"], text, "v"))

    surf = _surface(sec, ranges, text)
    if "builtin" in sec and ranges is not None:
        (ua, ub), (va, vb) = surf.domain
        (ra, rb), (sa, sb) = ranges
        if ra < ua or rb > ub or sa < va or sb > vb:
            raise _err(text, "sampling ranges must lie inside the surface domain", "u", "domain")
    if "builtin" not in sec:
        ranges = None  # already the surface's own domain

    g = data.get("grid", {})
    extra = set(g) - {"nu", "nv"}
    if extra:
        raise _err(text, f"unknown key {sorted(extra)[0]!r}", sorted(extra)[0], "grid")
    grid = _check_grid((g.get("nu", 64), g.get("nv", 64)), text, "grid")

    tol = None
    t = data.get("tolerance", {})
    if t:
        if set(t) - {"base"}:
            key = sorted(set(t) - {"base"})[0]
            raise _err(text, f"unknown key {key!r}", key, "tolerance")
        tol = _number(t["base"], text, "base", "tolerance")
        if tol < 0:
            raise _err(text, "tolerance must be non-negative", "base", "tolerance")

    outputs = {}
    for key, value in data.get("output", {}).items():
        if key not in OUTPUT_KEYS:
            raise _err(text, f"unknown output {key!r} (expected one of {', '.join(OUTPUT_KEYS)})",
                       key, "output")
        if not isinstance(value, str) or not value:
            raise _err(text, "output path must be a non-empty string", key, "output")
        outputs[key] = value

    branch = "plus"
    f = data.get("focal", {})
    if f:
        if set(f) - {"branch"}:
            key = sorted(set(f) - {"branch"})[0]
            raise _err(text, f"unknown key {key!r}", key, "focal")
        branch = f["branch"]
        if branch not in ("plus", "minus"):
            raise _err(text, "branch must be 'plus' or 'minus'", "branch", "focal")

    probe = _probe(data.get("probe", {}), text)
    cfg = RunConfig(surf, grid, ranges, tol, outputs, branch, probe)
    if validate and "builtin" not in sec:
        try:
            validate_surface(surf)
        except ValidationError as exc:
            raise ConfigError(f"surface is not a valid framed surface: {exc}", key="surface") from exc
    return cfg


def _surface(sec, ranges, text):
    if "builtin" in sec:
        name = sec["builtin"]
        extra = set(sec) - {"builtin"}
        if extra:
            raise _err(text, "a built-in surface takes no other keys", sorted(extra)[0], "surface")
        if name not in BUILTINS:
            raise _err(text, f"unknown built-in surface {name!r} (known: {', '.join(sorted(BUILTINS))})",
                       "builtin", "surface")
        return builtin(name)
    comps = {}
    for vec in ("X", "v", "w"):
        table = sec.get(vec, {})
        if not isinstance(table, dict):
            raise _err(text, f"{vec} must hold keys x1, x2, x3", vec, "surface")
        extra = set(table) - {"x1", "x2", "x3"}
        if extra:
            key = f"{vec}.{sorted(extra)[0]}"
            raise _err(text, f"unknown component {key!r}", key, "surface")
        for k in ("x1", "x2", "x3"):
            key = f"{vec}.{k}"
            if k not in table:
                raise _err(text, f"missing component {key}", key, "surface")
            src = table[k]
            if isinstance(src, (int, float)) and not isinstance(src, bool):
                src = repr(float(src))
            if not isinstance(src, str):
                raise _err(text, "component must be an expression string", key, "surface")
            try:
                comps[key] = expr.parse_expr(src)
            except ExpressionError as exc:
                raise _err(text, f"bad expression: {exc}", key, "surface") from None
    extra = set(sec) - {"X", "v", "w", "name"}
    if extra:
        raise _err(text, f"unknown key {sorted(extra)[0]!r}", sorted(extra)[0], "surface")
    if ranges is None:
        raise ConfigError("a user-defined surface needs a [domain] section", key="domain")
    name = sec.get("name", "surface")
    pick = lambda vec: tuple(comps[f"{vec}.x{k}"] for k in (1, 2, 3))
    return SurfaceDef(pick("X"), pick("v"), pick("w"), ranges, str(name))


def _probe(p, text):
    if not p:
        return ProbeSpec()
    allowed = {"u", "v", "target", "samples", "side"}
    if set(p) - allowed:
        key = sorted(set(p) - allowed)[0]
        raise _err(text, f"unknown key {key!r}", key, "probe")
    spec = ProbeSpec()
    kw = {}
    for key in ("u", "v"):
        if key in p:
            try:
                expr.parse_expr(str(p[key]), variables=("t",))
            except ExpressionError as exc:
                raise _err(text, f"bad path expression: {exc}", key, "probe") from None
            kw[key] = str(p[key])
    if "target" in p:
        kw["target"] = _number(p["target"], text, "target", "probe")
    if "samples" in p:
        if not isinstance(p["samples"], int) or p["samples"] < 3:
            raise _err(text, "samples must be an integer >= 3", "samples", "probe")
        kw["samples"] = p["samples"]
    if "side" in p:
        if p["side"] not in (-1, 1):
            raise _err(text, "side must be -1 or 1", "side", "probe")
        kw["side"] = p["side"]
    return replace(spec, **kw)


def load_config_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return load_config(text)


def default_config(name="paper-example"):
    return load_config(f'surface = "{name}"\n')
