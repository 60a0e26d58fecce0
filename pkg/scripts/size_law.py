#!/usr/bin/env python3
"""Print the generated machine-query sizes for K = 1..K_max together
with the fitted linear (built-in equality) and quadratic (expanded
equality) bounds.
"""

import argparse

from nestql.checks import size_law_fit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--k-fit", type=int, default=3)
    ap.add_argument("--tolerance", type=float, default=1.5)
    a = ap.parse_args()

    c1, c2, sizes = size_law_fit(a.k_fit, a.k_max)
    print("fitted at K=%d: c1=%.1f (linear), c2=%.1f (quadratic)"
          % (a.k_fit, c1, c2))
    print("%3s %10s %12s %10s %12s" % (
        "K", "builtin", "c1*K*tol", "expanded", "c2*K^2*tol"))
    for K, (b, e) in sorted(sizes.items()):
        print("%3d %10d %12.0f %10d %12.0f"
              % (K, b, a.tolerance * c1 * K, e,
                 a.tolerance * c2 * K * K))


if __name__ == "__main__":
    main()
