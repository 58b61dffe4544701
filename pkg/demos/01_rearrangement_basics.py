"""Non-increasing rearrangement of a finitely sampled function.

Builds a small value/measure sample, rearranges it into a right-open step
function, and prints the distribution function at a ladder of levels
together with the CSV forms used by the command-line tools.
"""

import numpy as np

from sobtrace.rearrangement import SampledFunction, rearrange


def main() -> None:
    f = SampledFunction(values=np.array([3.0, 1.0, 2.0, 1.0]),
                        measures=np.array([0.2, 0.3, 0.3, 0.2]),
                        label="demo")
    r = rearrange(f)
    print("sample:", list(zip(f.values, f.measures)))
    print("levels:     ", r.levels)
    print("breakpoints:", r.breakpoints)

    print("\ndistribution function mu(xi) = measure{f > xi}:")
    for xi in (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
        print(f"  mu({xi:3.1f}) = {r.level_measure(xi):.3f}")

    print("\nrearranged values at selected t:")
    for t in (0.0, 0.15, 0.2, 0.49, 0.5, 0.99):
        print(f"  f*({t:4.2f}) = {r(t):.3f}")

    print("\nsample CSV:")
    print(f.to_csv())
    print("step CSV:")
    print(r.to_csv())


if __name__ == "__main__":
    main()
