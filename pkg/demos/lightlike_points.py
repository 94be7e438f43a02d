"""Trace the lightlike locus of the built-in surface and classify its points.

Run with ``python3 demos/lightlike_points.py``.
"""

import math
from collections import Counter

from lcsurf import classify_lightlike, null_vector, paper_example, trace_lightlike_locus


def main():
    surf = paper_example()
    for k in (1, 3, 5, 7):
        seed = (k * math.pi / 4 + 0.01, math.pi)
        locus = trace_lightlike_locus(surf, seed, step=0.1)
        us = locus.points[:, 0]
        kinds = Counter(classify_lightlike(surf, u, v).tag for u, v in locus.points)
        print(f"seed u = {k}pi/4: {len(us)} points, u in [{us.min():.12f}, {us.max():.12f}], "
              f"stop={locus.stop_reason}, kinds={dict(kinds)}")

    u0 = 5 * math.pi / 4
    eta = null_vector(surf, u0, 0.0)
    kind = classify_lightlike(surf, u0, 0.0)
    print(f"null direction at (5pi/4, 0): ({eta.eta_u:.6f}, {eta.eta_v:.6f})")
    print(f"classification: {kind.tag}, witnesses {kind.witnesses}")


if __name__ == "__main__":
    main()
