"""Exact rational linear programming by a bounded-variable revised simplex method.

All arithmetic uses :class:`fractions.Fraction`. Bland's smallest-index rule
is used for both the entering and the leaving variable, which rules out
cycling. Variables may carry finite upper bounds; these are handled by the
simplex method itself instead of extra rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Mapping, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]
Relation = Literal[">=", "<=", "="]
Status = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class Constraint:
    """``sum_j coeffs[j] * x_j  (relation)  rhs`` with sparse ``coeffs``."""

    coeffs: Mapping[int, Number]
    relation: Relation
    rhs: Number

    def __post_init__(self) -> None:
        if self.relation not in (">=", "<=", "="):
            raise ValueError(f"unknown relation {self.relation!r}")

    def lhs(self, x: Sequence[Number]) -> Fraction:
        return sum((Fraction(c) * x[j] for j, c in self.coeffs.items()), Fraction(0))

    def holds(self, x: Sequence[Number]) -> bool:
        v, b = self.lhs(x), Fraction(self.rhs)
        return v >= b if self.relation == ">=" else v <= b if self.relation == "<=" else v == b


@dataclass(frozen=True)
class LpProblem:
    """Minimize ``objective · x`` subject to ``constraints`` and ``0 <= x <= upper``.

    ``upper[j] = None`` leaves ``x_j`` unbounded above. When ``upper`` is not
    given every variable lies in ``[0, 1]``, the natural range of a
    time-sharing weight.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]
    upper: tuple[Fraction | None, ...] = field(default=())

    def __post_init__(self) -> None:
        n = len(self.objective)
        if n == 0:
            raise ValueError("an LP needs at least one variable")
        object.__setattr__(self, "objective", tuple(Fraction(c) for c in self.objective))
        up = self.upper if self.upper else (Fraction(1),) * n
        if len(up) != n:
            raise ValueError("one upper bound per variable is required")
        object.__setattr__(
            self, "upper", tuple(None if u is None else Fraction(u) for u in up)
        )
        for u in self.upper:
            if u is not None and u < 0:
                raise ValueError("upper bounds must be nonnegative")
        for con in self.constraints:
            for j in con.coeffs:
                if not 0 <= j < n:
                    raise ValueError(f"constraint references variable {j} outside [0, {n})")

    @property
    def nvars(self) -> int:
        return len(self.objective)

    def is_feasible(self, x: Sequence[Number]) -> bool:
        if len(x) != self.nvars:
            return False
        for xj, u in zip(x, self.upper):
            if xj < 0 or (u is not None and xj > u):
                return False
        return all(c.holds(x) for c in self.constraints)

    def value(self, x: Sequence[Number]) -> Fraction:
        return sum((c * xj for c, xj in zip(self.objective, x)), Fraction(0))


@dataclass(frozen=True)
class LpResult:
    """Solver output. ``dual`` has one multiplier per original constraint."""

    status: Status
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None
    iterations: int = 0


class _Simplex:
    """Revised simplex on ``A x = b, 0 <= x <= u`` with an explicit basis inverse."""

    def __init__(
        self,
        cols: list[list[tuple[int, Fraction]]],
        b: list[Fraction],
        upper: list[Fraction | None],
        basis: list[int],
    ) -> None:
        self.cols = cols
        self.nrows = len(b)
        self.upper = upper
        self.basis = basis
        self.binv = [
            [Fraction(int(i == j)) for j in range(self.nrows)] for i in range(self.nrows)
        ]
        self.xb = list(b)
        self.at_upper = [False] * len(cols)
        self.iterations = 0

    def _duals(self, cost: list[Fraction]) -> list[Fraction]:
        y = [Fraction(0)] * self.nrows
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb:
                row = self.binv[i]
                for r in range(self.nrows):
                    if row[r]:
                        y[r] += cb * row[r]
        return y

    def _ftran(self, j: int) -> list[Fraction]:
        alpha = [Fraction(0)] * self.nrows
        for r, a in self.cols[j]:
            for i in range(self.nrows):
                v = self.binv[i][r]
                if v:
                    alpha[i] += v * a
        return alpha

    def run(self, cost: list[Fraction]) -> Literal["optimal", "unbounded"]:
        while True:
            self.iterations += 1
            y = self._duals(cost)
            in_basis = set(self.basis)
            entering = -1
            for j in range(len(self.cols)):
                if j in in_basis:
                    continue
                u = self.upper[j]
                if u is not None and u == 0:
                    continue
                d = cost[j] - sum((y[r] * a for r, a in self.cols[j]), Fraction(0))
                if (not self.at_upper[j] and d < 0) or (self.at_upper[j] and d > 0):
                    entering = j
                    break
            if entering < 0:
                return "optimal"
            j = entering
            sigma = -1 if self.at_upper[j] else 1
            alpha = self._ftran(j)
            theta: Fraction | None = self.upper[j]
            leave = -1
            leave_to_upper = False
            for i, bv in enumerate(self.basis):
                delta = sigma * alpha[i]
                if delta > 0:
                    t = self.xb[i] / delta
                    to_upper = False
                elif delta < 0 and self.upper[bv] is not None:
                    t = (self.upper[bv] - self.xb[i]) / (-delta)
                    to_upper = True
                else:
                    continue
                if leave < 0:
                    take = theta is None or t < theta
                else:
                    take = t < theta or (t == theta and bv < self.basis[leave])
                if take:
                    theta, leave, leave_to_upper = t, i, to_upper
            if theta is None:
                return "unbounded"
            for i in range(self.nrows):
                if alpha[i]:
                    self.xb[i] -= sigma * theta * alpha[i]
            if leave < 0:
                self.at_upper[j] = not self.at_upper[j]
                continue
            entering_value = theta if sigma > 0 else self.upper[j] - theta  # type: ignore[operator]
            old = self.basis[leave]
            piv = alpha[leave]
            prow = [v / piv for v in self.binv[leave]]
            self.binv[leave] = prow
            for i in range(self.nrows):
                if i != leave and alpha[i]:
                    f = alpha[i]
                    self.binv[i] = [a - f * b for a, b in zip(self.binv[i], prow)]
            self.basis[leave] = j
            self.xb[leave] = entering_value
            self.at_upper[j] = False
            self.at_upper[old] = leave_to_upper

    def values(self) -> list[Fraction]:
        x = [Fraction(0)] * len(self.cols)
        for j, up in enumerate(self.at_upper):
            if up:
                x[j] = self.upper[j]  # type: ignore[assignment]
        for i, bv in enumerate(self.basis):
            x[bv] = self.xb[i]
        return x


def solve(problem: LpProblem) -> LpResult:
    """Minimize exactly. The result carries primal values and row duals when optimal."""
    n = problem.nvars
    cols: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
    b: list[Fraction] = []
    signs: list[int] = []
    relations: list[Relation] = []
    for r, con in enumerate(problem.constraints):
        rhs = Fraction(con.rhs)
        sign = -1 if rhs < 0 else 1
        rel = con.relation
        if sign < 0:
            rel = {">=": "<=", "<=": ">=", "=": "="}[rel]  # type: ignore[assignment]
        for j, a in sorted(con.coeffs.items()):
            a = Fraction(a) * sign
            if a:
                cols[j].append((r, a))
        b.append(rhs * sign)
        signs.append(sign)
        relations.append(rel)
    upper: list[Fraction | None] = list(problem.upper)
    nrows = len(b)
    basis: list[int] = [-1] * nrows
    artificials: list[int] = []
    for r, rel in enumerate(relations):
        if rel == "<=":
            cols.append([(r, Fraction(1))])
            upper.append(None)
            basis[r] = len(cols) - 1
        elif rel == ">=":
            cols.append([(r, Fraction(-1))])
            upper.append(None)
    for r, rel in enumerate(relations):
        if basis[r] < 0:
            cols.append([(r, Fraction(1))])
            upper.append(None)
            basis[r] = len(cols) - 1
            artificials.append(basis[r])
    total = len(cols)
    splx = _Simplex(cols, b, upper, basis)
    if artificials:
        phase1 = [Fraction(0)] * total
        for a in artificials:
            phase1[a] = Fraction(1)
        splx.run(phase1)
        xs = splx.values()
        if any(xs[a] for a in artificials):
            return LpResult("infeasible", iterations=splx.iterations)
        for a in artificials:
            splx.upper[a] = Fraction(0)
    cost = list(problem.objective) + [Fraction(0)] * (total - n)
    status = splx.run(cost)
    if status == "unbounded":
        return LpResult("unbounded", iterations=splx.iterations)
    xs = splx.values()
    x = tuple(xs[:n])
    y = splx._duals(cost)
    dual = tuple(yr * s for yr, s in zip(y, signs))
    return LpResult("optimal", problem.value(x), x, dual, splx.iterations)


def dual_certificate_ok(problem: LpProblem, result: LpResult) -> bool:
    """Independent optimality check for a reported optimum.

    With row multipliers ``y`` of the right sign (``>=``: ``y >= 0``, ``<=``:
    ``y <= 0``, ``=``: free), take ``w_j = max(0, (A^T y)_j - c_j)`` for bounded
    variables and require ``(A^T y)_j <= c_j`` for unbounded ones. Then
    ``b·y - u·w`` is a lower bound on the optimum; equality with the primal
    value proves optimality.
    """
    if result.status != "optimal" or result.dual is None or result.x is None:
        return False
    if not problem.is_feasible(result.x):
        return False
    y = result.dual
    for con, yr in zip(problem.constraints, y):
        if (con.relation == ">=" and yr < 0) or (con.relation == "<=" and yr > 0):
            return False
    aty = [Fraction(0)] * problem.nvars
    for con, yr in zip(problem.constraints, y):
        if yr:
            for j, a in con.coeffs.items():
                aty[j] += Fraction(a) * yr
    bound = sum((Fraction(con.rhs) * yr for con, yr in zip(problem.constraints, y)), Fraction(0))
    for j in range(problem.nvars):
        excess = aty[j] - problem.objective[j]
        u = problem.upper[j]
        if u is None:
            if excess > 0:
                return False
        elif excess > 0:
            bound -= u * excess
    return bound == problem.value(result.x) == result.value


def covering_problem(
    costs: Sequence[Number],
    blocks: Sequence[frozenset[int]],
    universe: Sequence[int],
    *,
    equality: bool = False,
) -> LpProblem:
    """Time-sharing LP: minimize ``sum γ_j cost_j`` with every element covered once.

    Each ``γ_j`` lies in ``[0, 1]``. With ``equality`` the covering rows become
    equalities, which leaves the optimum unchanged.
    """
    rel: Relation = "=" if equality else ">="
    rows = []
    for e in universe:
        coeffs = {j: 1 for j, blk in enumerate(blocks) if e in blk}
        rows.append(Constraint(coeffs, rel, 1))
    return LpProblem(tuple(Fraction(c) for c in costs), tuple(rows))
