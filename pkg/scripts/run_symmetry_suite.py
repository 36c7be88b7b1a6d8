#!/usr/bin/env python3
"""Exhaustive state-level symmetry verification over small canonical matrices.

For each canonical matrix in the sweep this checks row unitarity, the
Q-twisted column relation, and rotation invariance of the attached free
generalized circular family, across all index choices at word lengths 2 and
4 and a fixed set of test words.  Writes the full report list as JSON and
exits nonzero if any identity fails.
"""

import argparse
import json
import sys
from fractions import Fraction
from itertools import product

from ofhaar import (
    CanonicalSpec,
    StarWord,
    build_canonical,
    invariance_check,
    weak_q_relation_check,
    weak_unitarity_check,
)
from ofhaar.partitions import PLAIN, STAR
from ofhaar.scalars import format_scalar

SWEEP = (
    CanonicalSpec(c=1, k=0, rho=(), n=2),
    CanonicalSpec(c=1, k=1, rho=(Fraction(1, 2),), n=2),
    CanonicalSpec(c=1, k=1, rho=(Fraction(1, 2),), n=4),
    CanonicalSpec(c=-1, k=2, rho=(Fraction(1, 3), Fraction(1, 2)), n=4),
)


def run_suite(cache_dir=None):
    reports = []
    failures = 0
    for spec in SWEEP:
        fmatrix = build_canonical(spec)
        n = fmatrix.n
        label = f"c={spec.c} k={spec.k} n={spec.n}"
        test_words = [
            None,
            StarWord((1, 1), (1, 1), (PLAIN, STAR)),
            StarWord((1, 1), (1, n), (STAR, PLAIN)),
        ]

        for i, j in product(range(1, n + 1), repeat=2):
            for w in test_words:
                for name, check in (
                    ("row-unitarity", weak_unitarity_check),
                    ("q-column-relation", weak_q_relation_check),
                ):
                    value = check(fmatrix, i, j, w, cache_dir)
                    ok = not value
                    failures += not ok
                    reports.append(
                        {
                            "identity": name,
                            "matrix": label,
                            "i": i,
                            "j": j,
                            "word": w.label() if w else "1",
                            "value": format_scalar(value),
                            "holds": ok,
                        }
                    )

        for l in (2, 4):
            for eps in product((PLAIN, STAR), repeat=l):
                for i in product(range(1, n + 1), repeat=l):
                    report = invariance_check(fmatrix, l, eps, i, cache_dir=cache_dir)
                    ok = report.holds()
                    failures += not ok
                    entry = report.to_json_dict()
                    entry["matrix"] = label
                    entry["holds"] = ok
                    reports.append(entry)
        print(f"checked {label}: {len(reports)} cumulative reports")
    return reports, failures


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="symmetry_report.json")
    parser.add_argument("--cache-dir", default=None)
    args = parser.parse_args()

    reports, failures = run_suite(args.cache_dir)
    with open(args.out, "w") as handle:
        json.dump(reports, handle, indent=2, sort_keys=True)
    print(f"{len(reports)} checks, {failures} failures -> {args.out}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
