"""Approach a lightlike point and watch K^, H^ settle while K and H blow up.

Run with ``python3 demos/curvature_probe.py``.
"""

import math

from lcsurf import curvature_limit_probe, paper_example
from lcsurf.lightlike import parse_path


def main():
    rep = curvature_limit_probe(paper_example(), parse_path("t", "0"), 5 * math.pi / 4,
                                samples=20)
    print(f"{'t':>14} {'lambda~':>12} {'K^':>12} {'H^':>12} {'K':>12} {'H':>12}")
    for r in rep.rows[::3]:
        print(f"{r.t:14.10f} {r.lambda_tilde:12.4e} {r.K_hat:12.8f} {r.H_hat:12.8f} "
              f"{r.K:12.4e} {r.H:12.4e}")
    for name, v in rep.verdicts.items():
        limit = "" if v.limit is None else f", limit {v.limit:.9g}"
        print(f"{name}: {v.kind}{limit}")
    print(f"sqrt(2)/2 = {math.sqrt(2) / 2:.9g}, sqrt(2)/4 = {math.sqrt(2) / 4:.9g}")


if __name__ == "__main__":
    main()
