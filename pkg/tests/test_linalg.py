"""Exact elimination: RREF, rank, nullspace, linear solve."""

import random
from fractions import Fraction

from startrace import linalg
from startrace.fields import RATIONALS, PrimeField


def F(a, b=1):
    return Fraction(a, b)


def test_rref_known_system():
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(7)]]
    red, pivots = linalg.rref(rows, 3, RATIONALS)
    assert pivots == [0, 2]
    assert red[0] == [F(1), F(2), F(0)]
    assert red[1] == [F(0), F(0), F(1)]


def test_rank_examples():
    q = RATIONALS
    assert linalg.rank([[F(1), F(1)], [F(1), F(1)]], 2, q) == 1
    assert linalg.rank([[F(1), F(0)], [F(0), F(1)]], 2, q) == 2
    assert linalg.rank([[0, 0], [0, 0]], 2, PrimeField(5)) == 0


def test_nullspace_annihilates():
    rng = random.Random(5)
    for fld in (RATIONALS, PrimeField(7)):
        for _ in range(20):
            nrows, ncols = rng.randint(1, 5), rng.randint(1, 6)
            rows = [[fld.random_scalar(rng) for _ in range(ncols)] for _ in range(nrows)]
            basis = linalg.nullspace(rows, ncols, fld)
            assert len(basis) == ncols - linalg.rank(rows, ncols, fld)
            for v in basis:
                for r in rows:
                    acc = fld.zero
                    for a, b in zip(r, v):
                        acc = fld.add(acc, fld.mul(a, b))
                    assert acc == fld.zero


def test_solve_consistent_and_not():
    q = RATIONALS
    rows = [[F(1), F(1)], [F(1), F(-1)]]
    x = linalg.solve(rows, [F(3), F(1)], 2, q)
    assert x == (F(2), F(1))
    rows = [[F(1), F(1)], [F(2), F(2)]]
    assert linalg.solve(rows, [F(1), F(3)], 2, q) is None


def test_solve_underdetermined_picks_valid_solution():
    f = PrimeField(5)
    rows = [[1, 2, 3]]
    x = linalg.solve(rows, [4], 3, f)
    acc = f.zero
    for a, b in zip(rows[0], x):
        acc = f.add(acc, f.mul(a, b))
    assert acc == 4
