"""Zero-trace membership diagnostics: truncation scheme and 1-D limits.

Runs the truncation scheme u -> min(u, k d) on the unit square for a
function that vanishes at the boundary like the distance (consistent) and
for the constant 1 (inconsistent, with k mu(E_k) converging to the weak
norm 4 of 1/d), then classifies one-dimensional functions by their
endpoint limits and checks the uniform sup bound.
"""

import math

import numpy as np

from sobtrace.domains import gallery, rasterize
from sobtrace.traces import (
    GridFunction,
    approximation_scheme,
    constant_function,
    oned_zero_trace,
)


def main() -> None:
    gd = rasterize(gallery("cube2"), 2.0**-8)

    u = GridFunction(gd, 1.9 * gd.distance_field, "1.9d")
    rep = approximation_scheme(u, 2.0)
    print(f"u = 1.9 d on the unit square: {rep.verdict}")
    print("  residual first-order norms:",
          [round(r[1], 5) for r in rep.rows[:4]], "...")

    rep1 = approximation_scheme(constant_function(gd), 1.0)
    print(f"u = 1 on the unit square: {rep1.verdict}")
    print(f"{'k':>6} {'residual':>10} {'mu(E_k)':>10} {'k mu(E_k)':>10}")
    for k, res, mek, kmu, limited in rep1.rows:
        if not limited:
            print(f"{k:6g} {res:10.5f} {mek:10.6f} {kmu:10.5f}")
    print("  k mu(E_k) climbs to the weak norm 4 of 1/d; "
          "the residuals never decay")

    print("\none-dimensional endpoint classification on (0, 1):")
    cases = [
        ("sin(pi x)", lambda x: np.sin(math.pi * x),
         lambda x: math.pi * np.cos(math.pi * x)),
        ("x (1 - x)", lambda x: x * (1.0 - x), lambda x: 1.0 - 2.0 * x),
        ("x", lambda x: np.asarray(x, dtype=float),
         lambda x: np.ones_like(np.asarray(x, dtype=float))),
        ("1 + 0.1 sin(pi x)", lambda x: 1.0 + 0.1 * np.sin(math.pi * x),
         lambda x: 0.1 * math.pi * np.cos(math.pi * x)),
    ]
    for name, u1, du1 in cases:
        r = oned_zero_trace(u1, 0.0, 1.0, 2.0, du=du1)
        print(f"  {name:18s} member={str(r.member):5s} "
              f"sup={r.sup:.4f} <= collapsed bound {r.collapsed_bound:.4f}"
              f"{'' if r.power_sum_holds else '  (power-sum form fails)'}")


if __name__ == "__main__":
    main()
