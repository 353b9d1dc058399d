from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from icoding.errors import ContractViolation, ParseError
from icoding.gf import (
    FieldElement,
    FieldMatrix,
    is_prime,
    next_prime_at_least,
    rank,
    rref,
    solve_dependency,
)
from icoding.matching import mcm

from support import random_pattern

PRIMES = [2, 3, 5, 11, 13]

# The 3x6 matrix over GF(5) from the veto-set walkthrough, with its last entry left open.
VETO_ROWS = [[1, 0, 1, 1, 0, 0], [0, 1, 0, 1, 1, 1]]
WALK_H = [[0, 1, 0, 0, 0], [0, 1, 3, 1, 2], [5, 0, 4, 3, 2]]


def _matrices(max_r: int = 5, max_m: int = 5):
    return st.sampled_from(PRIMES).flatmap(
        lambda p: st.tuples(st.integers(1, max_r), st.integers(1, max_m)).flatmap(
            lambda s: st.lists(
                st.lists(st.integers(0, p - 1), min_size=s[1], max_size=s[1]),
                min_size=s[0],
                max_size=s[0],
            ).map(lambda rows: FieldMatrix.from_rows(rows, p))
        )
    )


def _naive_rank(rows: list[list[int]], p: int) -> int:
    """Rank as the largest ``k`` with a nonzero ``k x k`` minor (determinant by permutations)."""
    from itertools import combinations, permutations

    def det(mat: list[list[int]]) -> int:
        n = len(mat)
        total = 0
        for perm in permutations(range(n)):
            sign = 1
            for a in range(n):
                for b in range(a + 1, n):
                    if perm[a] > perm[b]:
                        sign = -sign
            prod = 1
            for a in range(n):
                prod *= mat[a][perm[a]]
            total += sign * prod
        return total % p

    r, m = len(rows), len(rows[0])
    for k in range(min(r, m), 0, -1):
        for rs in combinations(range(r), k):
            for cs in combinations(range(m), k):
                if det([[rows[a][b] for b in cs] for a in rs]):
                    return k
    return 0


# ---------------------------------------------------------------- scalars


@pytest.mark.parametrize("p", PRIMES)
def test_field_axioms(p):
    rng = random.Random(p)
    for _ in range(200):
        a, b, c = (FieldElement(rng.randrange(p), p) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a + FieldElement(0, p) == a
        assert a * FieldElement(1, p) == a
        assert a + (-a) == FieldElement(0, p)
        if int(a):
            assert a * a.inverse() == FieldElement(1, p)
            assert (b / a) * a == b
            assert a ** (p - 1) == FieldElement(1, p)


def test_field_element_validation():
    with pytest.raises(ValueError, match="prime"):
        FieldElement(1, 4)
    assert FieldElement(7, 5) == FieldElement(2, 5)
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, 5).inverse()


def test_primes():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert next_prime_at_least(10) == 11
    assert next_prime_at_least(2) == 2
    assert next_prime_at_least(3) == 3
    assert next_prime_at_least(1) == 2
    assert next_prime_at_least(90) == 97


# ---------------------------------------------------------------- rref and rank


def test_rref_identity():
    eye = FieldMatrix.identity(3, 5)
    out, piv = rref(eye)
    assert out == eye and piv == [1, 2, 3]


def test_rref_zero():
    z = FieldMatrix.zeros(2, 3, 7)
    out, piv = rref(z)
    assert out == z and piv == []


def test_rank_of_two_columns_of_veto_matrix():
    h2 = FieldMatrix.from_rows(VETO_ROWS, 5)
    assert rank(h2.submatrix(cols=[1, 4])) == 2


def test_rank_walkthrough_output():
    assert rank(FieldMatrix.from_rows(WALK_H, 11)) == 3


def test_rank_single_nonzero_column():
    assert rank(FieldMatrix.from_rows([[0], [3], [0]], 7)) == 1


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_rank_i5_columns(q):
    h = FieldMatrix.from_rows([[1, 0, 0, 1, 1], [1, 1, 1, 0, 2]], q)
    assert rank(h.submatrix(cols=[1, 5])) == 2


def test_all_ones_fill_collapses_columns_over_gf2():
    h = FieldMatrix.from_rows([[1, 0, 0, 1, 1], [1, 1, 1, 0, 1]], 2)
    assert rank(h.submatrix(cols=[1, 5])) == 1


@given(_matrices())
def test_rref_shape_and_idempotence(mat):
    out, piv = rref(mat)
    assert piv == sorted(set(piv))
    assert len(piv) == rank(mat)
    again, piv2 = rref(out)
    assert again == out and piv2 == piv
    for row_idx, col in enumerate(piv):
        column = out.column(col)
        assert column[row_idx] == 1
        assert sum(1 for v in column if v) == 1


@given(_matrices())
def test_rank_transpose_and_permutation(mat):
    assert rank(mat) == rank(mat.transpose())
    rows = list(mat.rows)[::-1]
    cols = list(range(mat.ncols, 0, -1))
    flipped = FieldMatrix.from_rows(rows, mat.p).submatrix(cols=cols)
    assert rank(flipped) == rank(mat)


@given(_matrices(4, 4))
def test_rank_matches_minor_oracle(mat):
    assert rank(mat) == _naive_rank([list(r) for r in mat.rows], mat.p)


# ---------------------------------------------------------------- solve


def test_solve_dependency_equal_to_single_column():
    # Column 6 equals column 2 in the first two rows.
    h2 = FieldMatrix.from_rows(VETO_ROWS, 5)
    assert solve_dependency(h2.submatrix(cols=[2, 6]), 2) == (1,)


def test_solve_dependency_two_columns():
    h2 = FieldMatrix.from_rows(VETO_ROWS, 5)
    assert solve_dependency(h2.submatrix(cols=[1, 4, 6]), 3) == (4, 1)


def test_solve_dependency_equal_columns():
    m = FieldMatrix.from_rows([[2, 2], [3, 3]], 7)
    assert solve_dependency(m, 2) == (1,)


def test_solve_dependency_independent():
    m = FieldMatrix.from_rows([[1, 0], [0, 1]], 7)
    assert solve_dependency(m, 2) is None


def test_solve_dependency_not_unique():
    m = FieldMatrix.from_rows([[1, 2, 3], [1, 2, 3]], 7)
    with pytest.raises(ContractViolation):
        solve_dependency(m, 3)


@given(_matrices(4, 4), st.data())
def test_solve_dependency_solution_checks_out(mat, data):
    target = data.draw(st.integers(1, mat.ncols))
    try:
        f = solve_dependency(mat, target)
    except ContractViolation:
        others = [j for j in range(1, mat.ncols + 1) if j != target]
        assert rank(mat.submatrix(cols=others)) < len(others)
        return
    if f is None:
        return
    others = [j for j in range(1, mat.ncols + 1) if j != target]
    combo = [
        sum(c * mat.column(j)[k] for c, j in zip(f, others)) % mat.p for k in range(mat.nrows)
    ]
    assert tuple(combo) == mat.column(target)


# ---------------------------------------------------------------- text format


def test_matrix_text_round_trip():
    h = FieldMatrix.from_rows(WALK_H, 11)
    text = h.to_text()
    assert text.splitlines()[0] == "q=11 r=3 m=5"
    assert FieldMatrix.from_text(text) == h


@pytest.mark.parametrize(
    "text",
    [
        "r=1 m=1\n1\n",
        "q=4 r=1 m=1\n1\n",
        "q=5 r=2 m=2\n1 0\n",
        "q=5 r=1 m=2\n1 7\n",
        "q=5 r=1 m=2\n1 x\n",
    ],
)
def test_matrix_text_errors(text):
    with pytest.raises((ParseError, ValueError)):
        FieldMatrix.from_text(text)


# ---------------------------------------------------------------- random fills reach mcm


def test_random_large_field_fill_reaches_mcm():
    p = 65537
    rng = random.Random(17)
    for _ in range(12):
        pattern = random_pattern(rng, rng.randint(1, 5), rng.randint(1, 6), 0.5)
        want = mcm(pattern)
        for _ in range(100):
            rows = [
                [rng.randrange(1, p) if i in pattern.row(k) else 0 for i in range(1, pattern.m + 1)]
                for k in range(1, pattern.r + 1)
            ]
            assert rank(FieldMatrix.from_rows(rows, p)) == want
