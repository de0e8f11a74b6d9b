#!/usr/bin/env python3
"""Exact entropy along the one-plateau stunted family, as CSV.

The entropy column is computed with the exact Markov backend and is
non-decreasing along the path; around t ~ 1.2443 it leaves zero.
"""

import csv
import sys
from fractions import Fraction

from chaos_edge import BudgetExhausted, build_base, build_stunted, entropy_markov


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 101
    base = build_base(1, 1)
    w = csv.writer(sys.stdout)
    w.writerow(["t", "entropy"])
    for k in range(n):
        t = Fraction(1, 2) + Fraction(k, n - 1)
        try:
            h = entropy_markov(build_stunted(base, [t])).value
        except BudgetExhausted:
            h = ""
        w.writerow([str(t), h])


if __name__ == "__main__":
    main()
