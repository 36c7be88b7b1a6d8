"""Acceptance suite: one test per shipping criterion, each printing a verdict.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Every equality here is exact (Fractions / exact scalars); the only
inequalities are the calibrated boundedness checks for the convergence-rate
criteria and the stated runtime budgets.
"""

import time
from fractions import Fraction
from itertools import product

from click.testing import CliRunner

from oracles import noncrossing_pairings
from ofhaar import (
    CanonicalSpec,
    GCSpec,
    GENERALIZED_CIRCULAR,
    StarWord,
    TruncatedFock,
    build_canonical,
    build_gamma,
    build_large_rank,
    classify_factor_type,
    convergence_table,
    enumerate_nc2,
    free_moment,
    gc_from_spec,
    gram_bruteforce,
    gram_closed,
    haar_moment,
    haar_star_moment,
    invariance_check,
    schur_covariance,
    standard_semicircular,
    standard_word_suite,
    unitary_star_moment,
    vacuum_expectation,
    validate,
    weak_q_relation_check,
    weak_unitarity_check,
    weingarten,
    weingarten_diagonality_error,
)
from ofhaar.cli import main as cli_main
from ofhaar.linalg import identity, matmul
from ofhaar.partitions import PLAIN, STAR
from ofhaar.scalars import ExactScalar
from ofhaar.weingarten import clear_memory_cache

HALF = Fraction(1, 2)
CATALAN = {1: 1, 2: 2, 3: 5, 4: 14, 5: 42, 6: 132, 7: 429, 8: 1430}


def eye(n):
    return validate([[int(r == c) for c in range(n)] for r in range(n)])


def canonical(c, k, rho, n):
    return build_canonical(CanonicalSpec(c=c, k=k, rho=tuple(rho), n=n))


def minus_one_2x2():
    return validate([["0", "1"], ["-1", "0"]])


CANONICAL_FAMILY = [
    ("k=0 n=2", lambda: canonical(1, 0, (), 2)),
    ("k=1 n=2", lambda: canonical(1, 1, (HALF,), 2)),
    ("k=1 n=4", lambda: canonical(1, 1, (HALF,), 4)),
    ("k=2 n=4", lambda: canonical(-1, 2, (Fraction(1, 3), HALF), 4)),
]


def report(number, name):
    print(f"\n[ACCEPTANCE {number:02d}] {name}: PASS")


def assert_scaled_bounded(rows):
    """error·N_F bounded by 4x its first-parameter value (4/N_F if that is 0)."""
    by_word = {}
    for row in rows:
        by_word.setdefault(row.word, []).append(row)
    for cells in by_word.values():
        first = cells[0]
        for cell in cells[1:]:
            if first.scaled:
                assert cell.scaled <= 4 * first.scaled, cell
            else:
                assert cell.scaled <= Fraction(4) / cell.n_f, cell


def test_criterion_01_noncrossing_pairing_counts():
    start = time.monotonic()
    for half in range(1, 9):
        assert len(enumerate_nc2(2 * half)) == CATALAN[half]
    for half in range(1, 6):
        k = 2 * half
        assert {p.pairs for p in enumerate_nc2(k)} == set(noncrossing_pairings(k))
    assert time.monotonic() - start < 5
    report(1, "non-crossing pairing counts + brute-force filter")


def test_criterion_02_gram_oracle():
    start = time.monotonic()
    cases = [
        (eye(2), (2, 4, 6)),
        (eye(3), (2, 4, 6)),
        (canonical(1, 1, (HALF,), 2), (2, 4, 6, 8)),
        (minus_one_2x2(), (2, 4, 6)),
    ]
    saw_negative = False
    for fmatrix, lengths in cases:
        for l in lengths:
            closed = gram_closed(l, fmatrix)
            brute = gram_bruteforce(l, fmatrix)
            assert closed == brute
            if any(x.to_fraction() < 0 for row in closed for x in row):
                saw_negative = True
    assert saw_negative  # the c = -1 family must exercise signed entries
    assert time.monotonic() - start < 60
    report(2, "closed-form Gram equals brute-force inner products")


def test_criterion_03_exact_inversion():
    start = time.monotonic()
    matrices = [eye(2), eye(3), canonical(1, 1, (HALF,), 2), minus_one_2x2()]
    for fmatrix in matrices:
        for l in (2, 4, 6, 8, 10):
            table = weingarten(l, fmatrix)
            product_grid = matmul(
                [list(r) for r in table.gram], [list(r) for r in table.wg]
            )
            assert product_grid == identity(
                len(table.order), ExactScalar(1), ExactScalar(0)
            )
    assert time.monotonic() - start < 60
    report(3, "Gram times Weingarten is the identity up to length 10")


def test_criterion_04_schur_cross_check():
    fm = canonical(1, 1, (HALF,), 2)
    left = haar_star_moment(fm, StarWord((1, 1), (1, 1), (STAR, PLAIN)))
    right = haar_star_moment(fm, StarWord((1, 1), (1, 1), (PLAIN, STAR)))
    assert left.to_fraction() == Fraction(1, 17)
    assert right.to_fraction() == Fraction(16, 17)

    for _, make in CANONICAL_FAMILY:
        fmatrix = make()
        n = fmatrix.n
        for i, j, k, l in product(range(1, n + 1), repeat=4):
            assert haar_star_moment(
                fmatrix, StarWord((i, k), (j, l), (STAR, PLAIN))
            ) == schur_covariance(fmatrix, i, j, k, l, "left")
            assert haar_star_moment(
                fmatrix, StarWord((i, k), (j, l), (PLAIN, STAR))
            ) == schur_covariance(fmatrix, i, j, k, l, "right")
    report(4, "every second *-moment equals its Schur value")


def test_criterion_05_undeformed_values():
    fm = eye(2)
    assert haar_moment(fm, (1, 1), (1, 1)).to_fraction() == HALF
    assert haar_moment(fm, (1,) * 4, (1,) * 4).to_fraction() == Fraction(1, 3)
    assert haar_moment(fm, (1, 1, 1, 1), (1, 2, 1, 2)) == 0
    report(5, "undeformed 2x2 moment values 1/2, 1/3, 0")


def test_criterion_06_fock_oracle_vs_pairing_formula():
    start = time.monotonic()
    family = (
        standard_semicircular("s"),
        GCSpec("c", GENERALIZED_CIRCULAR, Fraction(1, 4), Fraction(1)),
        GCSpec("d", GENERALIZED_CIRCULAR, Fraction(4), Fraction(1, 4)),
    )
    pairs = {"s": (1, 1), "c": (2, 3), "d": (4, 5)}
    space = TruncatedFock(5, 3)
    ops = {}
    for spec in family:
        op = gc_from_spec(space, spec, *pairs[spec.label])
        ops[(spec.label, PLAIN)] = op
        ops[(spec.label, STAR)] = op.adjoint()

    alphabet = [(label, e) for label in "scd" for e in (PLAIN, STAR)]
    checked = 0
    for length in range(7):
        for word in product(alphabet, repeat=length):
            labels = tuple(w[0] for w in word)
            eps = tuple(w[1] for w in word)
            assert vacuum_expectation([ops[w] for w in word]) == free_moment(
                family, labels, eps
            )
            checked += 1
    assert checked == sum(6**length for length in range(7))
    assert time.monotonic() - start < 120
    report(6, f"Fock oracle equals pairing formula on {checked} words")


def test_criterion_07_gamma_family_rate():
    start = time.monotonic()
    gammas = (HALF, Fraction(1, 4), Fraction(1, 8), Fraction(1, 16))
    positions = ((1, 1), (1, 2))

    length_two = convergence_table(
        "gamma", gammas, standard_word_suite(positions, (2,)), k=1, rho=(HALF,)
    )
    assert all(row.error == 0 for row in length_two)

    rows = convergence_table(
        "gamma", gammas, standard_word_suite(positions, (4, 6)), k=1, rho=(HALF,)
    )
    assert_scaled_bounded(rows)

    for l in (4, 6):
        scaled = []
        for gamma in gammas:
            fmatrix = build_gamma(1, (HALF,), gamma)
            err = weingarten_diagonality_error(fmatrix, l)
            scaled.append(err * fmatrix.nf.to_fraction())
        assert scaled[0] > 0
        assert all(x <= 4 * scaled[0] for x in scaled[1:])
    assert time.monotonic() - start < 300
    report(7, "gamma-family freeness errors scale like 1/N_F")


def test_criterion_08_large_rank_family():
    suite = standard_word_suite(((1, 1), (1, 2)), (4, 6))
    for k in (1, 2, 3):
        fmatrix = build_large_rank(k, [Fraction(4)] * k)
        assert fmatrix.c == -1
        nf = fmatrix.nf
        for pos in range(1, k + 1):
            left = nf * haar_star_moment(
                fmatrix, StarWord((1, 1), (pos + 1, pos + 1), (STAR, PLAIN))
            )
            right = nf * haar_star_moment(
                fmatrix, StarWord((1, 1), (pos + 1, pos + 1), (PLAIN, STAR))
            )
            assert left.to_fraction() == 1
            assert right.to_fraction() == 4
    rows = convergence_table("large-rank", (1, 2, 3), suite, lam=Fraction(4))
    assert_scaled_bounded(rows)
    report(8, "large-rank family: signs, designated variances, bounded rate")


def test_criterion_09_unitary_model():
    for fmatrix in (eye(2), canonical(1, 1, (HALF,), 2)):
        for i, j, k, l in product((1, 2), repeat=4):
            assert unitary_star_moment(
                fmatrix, StarWord((i, k), (j, l), (STAR, PLAIN))
            ) == schur_covariance(fmatrix, i, j, k, l, "left")
            assert unitary_star_moment(
                fmatrix, StarWord((i, k), (j, l), (PLAIN, STAR))
            ) == schur_covariance(fmatrix, i, j, k, l, "right")

    assert unitary_star_moment(eye(2), StarWord((1, 1), (1, 1), (PLAIN, PLAIN))) == 0

    fm = canonical(1, 1, (HALF,), 2)
    for eps in ((PLAIN,), (STAR,), (PLAIN, STAR, PLAIN), (STAR,) * 5):
        length = len(eps)
        word = StarWord((1,) * length, (1,) * length, eps)
        assert unitary_star_moment(fm, word) == 0
    report(9, "unitary model: Schur second moments, vanishing odd/unstarred")


def test_criterion_10_state_level_symmetries():
    start = time.monotonic()
    for label, make in CANONICAL_FAMILY:
        fmatrix = make()
        n = fmatrix.n
        test_words = [
            None,
            StarWord((1, 1), (1, 1), (PLAIN, STAR)),
            StarWord((1, 1), (1, 1), (STAR, PLAIN)),
            StarWord((1, 1), (1, n), (PLAIN, STAR)),
            StarWord((1, 1), (n, 1), (STAR, PLAIN)),
        ]

        for i, j in product(range(1, n + 1), repeat=2):
            for w in test_words:
                assert weak_unitarity_check(fmatrix, i, j, w) == 0, (label, i, j)
                assert weak_q_relation_check(fmatrix, i, j, w) == 0, (label, i, j)

        for eps in product((PLAIN, STAR), repeat=2):
            for i in product(range(1, n + 1), repeat=2):
                for w in test_words:
                    assert invariance_check(fmatrix, 2, eps, i, w).holds(), (
                        label, eps, i,
                    )

        for eps in product((PLAIN, STAR), repeat=4):
            for i in product(range(1, n + 1), repeat=4):
                assert invariance_check(fmatrix, 4, eps, i).holds(), (label, eps, i)

        balanced = [
            eps
            for eps in product((PLAIN, STAR), repeat=4)
            if eps.count(STAR) == 2
        ]
        for eps in balanced:
            for base in range(1, n + 1):
                for w in test_words[1:]:
                    assert invariance_check(
                        fmatrix, 4, eps, (base,) * 4, w
                    ).holds(), (label, eps, base)
    assert time.monotonic() - start < 300
    report(10, "weak unitarity, Q-relation and rotation invariance all vanish")


def test_criterion_11_factor_classification():
    assert classify_factor_type([Fraction(1)] * 2).label() == "II_1"
    assert classify_factor_type([Fraction(4), Fraction(1, 4)]).label() == "III_1/16"
    assert (
        classify_factor_type(
            [Fraction(4), Fraction(1, 4), Fraction(9), Fraction(1, 9)]
        ).label()
        == "III_1"
    )
    report(11, "factor types II_1 / III_lambda / III_1")


def test_criterion_12_cli_determinism(tmp_path):
    runner = CliRunner()
    canonical_spec = '{"type":"canonical","c":1,"k":1,"rho":["1/2"],"n":2}'
    moment_args = [
        "moment", "--f", canonical_spec, "--i", "1,1,1,1", "--j", "1,1,1,1",
    ]
    first = runner.invoke(cli_main, moment_args)
    second = runner.invoke(cli_main, moment_args)
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output

    converge_args = [
        "converge", "--family", "gamma", "--k", "1", "--rho", "1/2",
        "--gammas", "1/2,1/4,1/8", "--l", "4", "--format", "csv",
        "--cache-dir", str(tmp_path),
    ]
    clear_memory_cache()
    cold = runner.invoke(cli_main, converge_args)
    assert cold.exit_code == 0
    clear_memory_cache()
    warm = runner.invoke(cli_main, converge_args)
    assert cold.output == warm.output

    wg_args = ["weingarten", "--f", canonical_spec, "--l", "6", "--cache-dir", str(tmp_path)]
    clear_memory_cache()
    cold_wg = runner.invoke(cli_main, wg_args)
    clear_memory_cache()
    warm_wg = runner.invoke(cli_main, wg_args)
    assert cold_wg.output == warm_wg.output
    report(12, "repeated and cold/warm-cache runs are byte-identical")
