"""Tour of the built-in sphere-like surface: invariants, strata and curvatures.

Run with ``python3 demos/surface_tour.py``.
"""

import math

from lcsurf import (curvature_bundle, integrability_residuals, invariants_at, paper_example,
                    principal_curvatures, stratify)


def main():
    surf = paper_example()
    print(f"surface {surf.name!r} on domain {surf.domain}")
    print(f"{'u':>8} {'stratum':>12} {'a1':>10} {'b1':>10} {'c2':>10} {'lambda~':>10} {'K^':>10} {'H^':>10}")
    for k in range(9):
        u = k * math.pi / 8 + 0.1
        inv = invariants_at(surf, u, 0.3)
        st = stratify(inv)
        b = curvature_bundle(inv)
        print(f"{u:8.4f} {st.tag:>12} {inv.a1.value:10.5f} {inv.b1.value:10.5f} "
              f"{inv.c2.value:10.5f} {float(b.lambda_tilde):10.5f} {float(b.K_hat):10.5f} "
              f"{float(b.H_hat):10.5f}")

    # at u = pi both principal curvatures are +-1
    k1, k2 = principal_curvatures(surf, math.pi, 0.7)
    print(f"principal curvatures at u = pi: {k1:.12g}, {k2:.12g}")

    res = integrability_residuals(surf, 1.1, 2.3)
    print(f"largest integrability residual at (1.1, 2.3): {max(abs(r) for r in res):.2e}")


if __name__ == "__main__":
    main()
