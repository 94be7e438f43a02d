"""Focal roots, sheet maps and an OBJ mesh of one focal sheet.

Run with ``python3 demos/focal_sheets.py [OUT.obj]``.
"""

import math
import sys

from lcsurf import export_mesh, focal_invariants, mu_roots
from lcsurf.config import default_config, load_config


def main(out=None):
    u, v = 2.0, 0.5
    roots = mu_roots(default_config().surface, u, v)
    print(f"roots at ({u}, {v}): case {roots.case}, "
          + ", ".join(f"{r.sheet}={r.value:.12g}" for r in roots.roots))
    print(f"expected {{-1, cos 2u}} = {{-1, {math.cos(2 * u):.12g}}}")

    surf = default_config().surface
    for r in roots.roots:
        sheet = focal_invariants(surf, u, v, near=r.value)
        F = ", ".join(f"{x:.9g}" for x in sheet.F)
        print(f"sheet {r.sheet}: F = ({F}), c2 bar = {sheet.inv['c2']:.9g}")

    cfg = load_config('surface = "paper-example"\n[grid]\nnu = 24\nnv = 24\n')
    text = export_mesh(cfg, "focal_minus")
    nv = sum(line.startswith("v ") for line in text.splitlines())
    nf = sum(line.startswith("f ") for line in text.splitlines())
    print(f"focal_minus mesh: {nv} vertices, {nf} quads")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
