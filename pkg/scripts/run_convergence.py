#!/usr/bin/env python3
"""Run the deformation-family sweeps and write the convergence tables.

Produces one CSV per family (gamma tail sweep at fixed size, large-rank
sweep at growing size) plus a terminal summary of the worst scaled error
per word, which should stay bounded as the quantum dimension grows.
"""

import argparse
import os
from fractions import Fraction

from ofhaar import convergence_table, standard_word_suite
from ofhaar.asymptotics import rows_to_csv
from ofhaar.scalars import parse_rational


def summarize(name, rows):
    by_word = {}
    for row in rows:
        by_word.setdefault(row.word, []).append(row)
    print(f"== {name}: {len(rows)} rows over {len(by_word)} words")
    for word, cells in by_word.items():
        worst = max(cell.scaled for cell in cells)
        first = cells[0].scaled
        print(f"   {word:48s} first={first} worst={worst}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--lengths", default="4,6")
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--rho", default="1/2")
    parser.add_argument("--gammas", default="1/2,1/4,1/8,1/16")
    parser.add_argument("--ks", default="1,2,3")
    parser.add_argument("--lam", default="4")
    parser.add_argument("--cache-dir", default=None)
    args = parser.parse_args()

    lengths = tuple(int(x) for x in args.lengths.split(","))
    words = standard_word_suite(((1, 1), (1, 2)), lengths)
    os.makedirs(args.out_dir, exist_ok=True)

    gamma_rows = convergence_table(
        "gamma",
        tuple(parse_rational(x) for x in args.gammas.split(",")),
        words,
        k=args.k,
        rho=tuple(parse_rational(x) for x in args.rho.split(",")),
        cache_dir=args.cache_dir,
    )
    gamma_path = os.path.join(args.out_dir, "gamma_convergence.csv")
    with open(gamma_path, "w") as handle:
        handle.write(rows_to_csv(gamma_rows))
    summarize("gamma family", gamma_rows)
    print(f"   -> {gamma_path}")

    rank_rows = convergence_table(
        "large-rank",
        tuple(int(x) for x in args.ks.split(",")),
        words,
        lam=Fraction(parse_rational(args.lam)),
        cache_dir=args.cache_dir,
    )
    rank_path = os.path.join(args.out_dir, "large_rank_convergence.csv")
    with open(rank_path, "w") as handle:
        handle.write(rows_to_csv(rank_rows))
    summarize("large-rank family", rank_rows)
    print(f"   -> {rank_path}")


if __name__ == "__main__":
    main()
