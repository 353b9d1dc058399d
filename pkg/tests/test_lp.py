from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from icoding.lp import Constraint, LpProblem, LpResult, covering_problem, dual_certificate_ok, solve


def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over the rationals; ``None`` if the system is singular."""
    n = len(a)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def vertex_optimum(problem: LpProblem) -> Fraction | None:
    """Minimum over all basic feasible points of a bounded LP, or ``None`` if infeasible."""
    n = problem.nvars
    hyper: list[tuple[list[Fraction], Fraction]] = []
    for con in problem.constraints:
        row = [Fraction(con.coeffs.get(j, 0)) for j in range(n)]
        hyper.append((row, Fraction(con.rhs)))
    for j in range(n):
        e = [Fraction(int(t == j)) for t in range(n)]
        hyper.append((e, Fraction(0)))
        u = problem.upper[j]
        assert u is not None, "oracle needs a bounded box"
        hyper.append((e, u))
    best = None
    for pick in combinations(range(len(hyper)), n):
        x = _solve_square([hyper[p][0] for p in pick], [hyper[p][1] for p in pick])
        if x is None or not problem.is_feasible(x):
            continue
        v = problem.value(x)
        best = v if best is None or v < best else best
    return best


def random_problem(rng: random.Random, n: int) -> LpProblem:
    cons = []
    for _ in range(rng.randint(1, 4)):
        coeffs = {j: rng.randint(-3, 3) for j in range(n) if rng.random() < 0.8}
        rel = rng.choice([">=", "<=", "="]) if rng.random() < 0.9 else "="
        cons.append(Constraint(coeffs, rel, Fraction(rng.randint(-3, 4), rng.randint(1, 3))))
    obj = tuple(Fraction(rng.randint(-4, 4)) for _ in range(n))
    upper = tuple(Fraction(rng.randint(1, 3)) for _ in range(n))
    return LpProblem(obj, tuple(cons), upper)


def _check_optimal(problem: LpProblem, res: LpResult) -> None:
    assert res.status == "optimal"
    assert res.x is not None and problem.is_feasible(res.x)
    assert problem.value(res.x) == res.value
    assert dual_certificate_ok(problem, res)


def test_single_bounded_variable():
    p = LpProblem((Fraction(1),), (Constraint({0: 1}, ">=", 1),))
    res = solve(p)
    _check_optimal(p, res)
    assert res.value == 1 and res.x == (1,)


def test_default_upper_bound_is_one():
    p = LpProblem((Fraction(-1), Fraction(-1)), ())
    res = solve(p)
    assert res.value == -2


def test_disjoint_singletons_cost_m():
    m = 5
    p = covering_problem([1] * m, [frozenset({i}) for i in range(1, m + 1)], range(1, m + 1))
    res = solve(p)
    _check_optimal(p, res)
    assert res.value == m
    assert all(x == 1 for x in res.x)


def test_fractional_cover_of_triangle():
    # Pairs of a triangle at cost 1 each: the optimum weights each pair by 1/2.
    blocks = [frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3})]
    p = covering_problem([1, 1, 1], blocks, [1, 2, 3])
    res = solve(p)
    _check_optimal(p, res)
    assert res.value == Fraction(3, 2)


def test_equality_mode_matches_inequality():
    blocks = [frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3}), frozenset({1, 2, 3})]
    costs = [1, 1, 1, 2]
    a = solve(covering_problem(costs, blocks, [1, 2, 3]))
    b = solve(covering_problem(costs, blocks, [1, 2, 3], equality=True))
    assert a.value == b.value == Fraction(3, 2)


def test_infeasible():
    p = LpProblem((Fraction(1),), (Constraint({0: 1}, ">=", 2),))
    assert solve(p).status == "infeasible"
    p2 = LpProblem(
        (Fraction(0), Fraction(0)),
        (Constraint({0: 1, 1: 1}, "=", 1), Constraint({0: 1, 1: 1}, "=", 2)),
        (None, None),
    )
    assert solve(p2).status == "infeasible"


def test_unbounded():
    p = LpProblem((Fraction(-1),), (Constraint({0: 1}, ">=", 1),), (None,))
    res = solve(p)
    assert res.status == "unbounded" and res.value is None


def test_unbounded_variable_with_minmax_row():
    # min t with t >= x0 + x1 and x0 + x1 >= 1: optimum 1.
    p = LpProblem(
        (Fraction(0), Fraction(0), Fraction(1)),
        (Constraint({0: 1, 1: 1, 2: -1}, "<=", 0), Constraint({0: 1, 1: 1}, ">=", 1)),
        (Fraction(1), Fraction(1), None),
    )
    res = solve(p)
    _check_optimal(p, res)
    assert res.value == 1


def test_negative_rhs_rows():
    p = LpProblem(
        (Fraction(1), Fraction(2)),
        (Constraint({0: -1, 1: -1}, "<=", Fraction(-3, 2)),),
        (Fraction(1), Fraction(1)),
    )
    res = solve(p)
    _check_optimal(p, res)
    assert res.value == 2


def test_degenerate_problem_terminates():
    # Several redundant rows through the same vertex.
    cons = tuple(Constraint({0: 1, 1: k}, ">=", 0) for k in range(1, 6)) + (
        Constraint({0: 1, 1: 1}, ">=", 1),
    )
    p = LpProblem((Fraction(1), Fraction(1)), cons)
    res = solve(p)
    _check_optimal(p, res)
    assert res.value == 1


def test_rejects_bad_problems():
    with pytest.raises(ValueError):
        LpProblem((), ())
    with pytest.raises(ValueError):
        LpProblem((Fraction(1),), (Constraint({3: 1}, ">=", 0),))
    with pytest.raises(ValueError):
        Constraint({0: 1}, ">", 0)
    with pytest.raises(ValueError):
        LpProblem((Fraction(1),), (), (Fraction(-1),))


def test_certificate_rejects_wrong_value():
    p = LpProblem((Fraction(1),), (Constraint({0: 1}, ">=", Fraction(1, 2)),))
    res = solve(p)
    forged = LpResult(res.status, res.value + 1, res.x, res.dual, res.iterations)
    assert not dual_certificate_ok(p, forged)


def test_matches_vertex_enumeration():
    rng = random.Random(99)
    feasible = 0
    for _ in range(400):
        p = random_problem(rng, rng.randint(1, 4))
        want = vertex_optimum(p)
        res = solve(p)
        if want is None:
            assert res.status == "infeasible"
        else:
            feasible += 1
            _check_optimal(p, res)
            assert res.value == want
    assert feasible > 100
