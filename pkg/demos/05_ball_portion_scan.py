"""Monte Carlo scan for the outer ball-portion property of a boundary.

A domain satisfies the property when every small ball centered on the
boundary keeps a fixed fraction of its volume outside the domain.  The
stacked-squares domain violates it along the gaps between consecutive
squares; the scan finds that sequence, while the unit square passes with
an infimum near 1/2.
"""

import math

from sobtrace.domains import ball_portion_scan, gallery


def main() -> None:
    dom = gallery("squares_stack", kmax=8)
    report = ball_portion_scan(dom, mc_samples=50000)
    print("stacked squares:", report.verdict)
    print(f"{'center':>24} {'radius':>10} {'ratio':>9} {'1/(pi(2^k-1))':>14}")
    for point, radius, ratio, stderr, _ in report.violating_sequence:
        k = round(-math.log2(radius))
        target = 1.0 / (math.pi * (2.0**k - 1.0))
        print(f"{str(tuple(round(c, 6) for c in point)):>24} "
              f"{radius:10.6f} {ratio:9.5f} {target:14.5f}")

    cube = gallery("cube2")
    control = ball_portion_scan(cube, mc_samples=50000)
    print(f"\nunit square control: {control.verdict}; "
          f"infimum estimate {control.infimum_estimate:.4f} "
          f"(flat edges give 1/2, corners 3/4)")

    croc = gallery("crocodile", kmax=12)
    apex = ball_portion_scan(croc, mc_samples=50000)
    rows = [r for r in apex.probes if r[0] == (0.0, 0.0)]
    print("\ntoothed wedge apex ratios (limit 1/(4 pi) ~ 0.0796):")
    for _, radius, ratio, stderr, _ in rows:
        print(f"  r={radius:9.6f}: {ratio:.5f} +- {stderr:.5f}")


if __name__ == "__main__":
    main()
