#!/usr/bin/env python3
"""Run the randomized cross-checking suites and print one summary line
per suite. Exits nonzero when any suite has failures.
"""

import argparse
import sys
import time

from nestql import checks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--cases", type=int, default=300)
    a = ap.parse_args()

    suites = [
        lambda: checks.suite_oracles(a.seed, a.cases,
                                     min(a.cases, 200)),
        lambda: checks.suite_thm62(a.seed + 20, min(a.cases, 200)),
        lambda: checks.suite_thm63(a.seed + 21, min(a.cases, 200)),
        lambda: checks.suite_size_bound(a.seed + 22, a.cases),
        lambda: checks.suite_mon_eq(a.seed + 23),
        lambda: checks.suite_flat(a.seed + 24, min(a.cases, 100)),
        lambda: checks.suite_size_law(),
        lambda: checks.suite_tm(K=1),
    ]
    bad = False
    for run in suites:
        t0 = time.monotonic()
        res = run()
        print("%s  [%.1fs]" % (res.summary(), time.monotonic() - t0))
        for f in res.failures[:10]:
            print("  " + f)
        bad = bad or not res.ok
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
