#!/usr/bin/env python3
"""Evaluate the doubly exponential query family and print the result
cardinality and timing for each level.
"""

import argparse
import time

from nestql.ma import ast_size, eval_ma
from nestql.reductions import gen_doubly_exp
from nestql.values import SET, UNIT


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=4)
    a = ap.parse_args()

    print("%3s %10s %12s %8s" % ("m", "query size", "|result|", "time"))
    for m in range(a.m_max + 1):
        q = gen_doubly_exp(m)
        t0 = time.monotonic()
        out = eval_ma(q, UNIT, SET)
        print("%3d %10d %12d %7.2fs"
              % (m, ast_size(q), len(out.elems), time.monotonic() - t0))


if __name__ == "__main__":
    main()
