#!/usr/bin/env python3
"""Superstable parameters of x^2 + c and their doubling ratios, as CSV."""

import csv
import sys

from chaos_edge import QuadraticFamily, feigenbaum_delta


def main():
    k_max = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    est = feigenbaum_delta(QuadraticFamily(), k_max)
    w = csv.writer(sys.stdout)
    w.writerow(["k", "c_k", "delta_k"])
    for k, c in enumerate(est.params):
        d = est.deltas[k - 2] if 2 <= k < 2 + len(est.deltas) else ""
        w.writerow([k, repr(c), d])
    print(f"# delta estimate: {est.value}", file=sys.stderr)


if __name__ == "__main__":
    main()
