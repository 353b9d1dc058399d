"""Exact arithmetic over prime fields and dense matrices over them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from icoding.errors import ContractViolation, ParseError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime_at_least(n: int) -> int:
    """Smallest prime ``>= n`` (with ``n <= 2`` mapping to 2)."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def _check_modulus(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"field size must be prime, got {p}")


@dataclass(frozen=True)
class FieldElement:
    """An element of ``GF(p)``; ``value`` is always reduced into ``[0, p)``."""

    value: int
    p: int

    def __post_init__(self) -> None:
        _check_modulus(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        return other % self.p

    def __add__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.value, self.p)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other: FieldElement | int) -> FieldElement:
        return self * FieldElement(self._coerce(other), self.p).inverse()

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.p), self.p)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0


# ----------------------------------------------------- list-of-rows primitives


def rref_rows(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of a row list mod ``p``; pivots are 0-based columns."""
    a = [[x % p for x in row] for row in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((k for k in range(r, nrows) if a[k][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for k in range(nrows):
            if k != r and a[k][c]:
                f = a[k][c]
                rk, rr = a[k], a[r]
                a[k] = [(x - f * y) % p for x, y in zip(rk, rr)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank_rows(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of a row list mod ``p`` by forward elimination."""
    a = [[x % p for x in row] for row in rows if any(x % p for x in row)]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(a)) if a[k][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        pr = a[r]
        for k in range(r + 1, len(a)):
            if a[k][c]:
                f = a[k][c] * inv % p
                a[k] = [(x - f * y) % p for x, y in zip(a[k], pr)]
        r += 1
        if r == len(a):
            break
    return r


def rank_columns(columns: Sequence[Sequence[int]], p: int) -> int:
    """Rank of the matrix whose columns are given (rank is transpose invariant)."""
    return rank_rows(columns, p)


def solve_columns(
    columns: Sequence[Sequence[int]], target: Sequence[int], p: int
) -> list[int] | None:
    """Solve ``sum_j f_j * columns[j] = target`` mod ``p``.

    Returns the unique solution, or ``None`` when no solution exists.

    Raises:
        ContractViolation: the solution exists but is not unique.
    """
    n = len(columns)
    dim = len(target)
    if n == 0:
        if any(x % p for x in target):
            return None
        return []
    aug = [[columns[j][r] for j in range(n)] + [target[r]] for r in range(dim)]
    red, pivots = rref_rows(aug, p)
    if n in pivots:
        return None
    if len(pivots) < n:
        raise ContractViolation(
            "dependency is not unique: the other columns are linearly dependent"
        )
    f = [0] * n
    for row, c in zip(red, pivots):
        f[c] = row[n]
    return f


# ------------------------------------------------------------------ FieldMatrix


@dataclass(frozen=True)
class FieldMatrix:
    """Dense ``r x m`` matrix over ``GF(p)``.

    Public accessors take 1-based row and column indices.
    """

    p: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        _check_modulus(self.p)
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix rows")
        object.__setattr__(
            self, "rows", tuple(tuple(x % self.p for x in r) for r in self.rows)
        )

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], p: int) -> FieldMatrix:
        return cls(p, tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, r: int, m: int, p: int) -> FieldMatrix:
        return cls(p, tuple((0,) * m for _ in range(r)))

    @classmethod
    def identity(cls, n: int, p: int) -> FieldMatrix:
        return cls(p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def entry(self, k: int, i: int) -> FieldElement:
        return FieldElement(self.rows[k - 1][i - 1], self.p)

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(row[i - 1] for row in self.rows)

    def prefix(self, k: int) -> FieldMatrix:
        """``H_[k]``: the first ``k`` rows."""
        return FieldMatrix(self.p, self.rows[:k])

    def submatrix(
        self, rows: Iterable[int] | None = None, cols: Iterable[int] | None = None
    ) -> FieldMatrix:
        """Keep the given 1-based rows and columns, in increasing order."""
        rsel = sorted(rows) if rows is not None else range(1, self.nrows + 1)
        csel = sorted(cols) if cols is not None else range(1, self.ncols + 1)
        return FieldMatrix(
            self.p, tuple(tuple(self.rows[k - 1][i - 1] for i in csel) for k in rsel)
        )

    def transpose(self) -> FieldMatrix:
        return FieldMatrix(self.p, tuple(zip(*self.rows)) if self.rows else ())

    def with_entry(self, k: int, i: int, value: int) -> FieldMatrix:
        rows = [list(r) for r in self.rows]
        rows[k - 1][i - 1] = value
        return FieldMatrix.from_rows(rows, self.p)

    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (k, i)
            for k, row in enumerate(self.rows, start=1)
            for i, x in enumerate(row, start=1)
            if x
        )

    def rank(self) -> int:
        return rank_rows(self.rows, self.p)

    def matvec(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, x)) % self.p for row in self.rows)

    def to_text(self) -> str:
        """Serialize as ``q=<p> r=<r> m=<m>`` followed by one line per row."""
        lines = [f"q={self.p} r={self.nrows} m={self.ncols}"]
        lines.extend(" ".join(map(str, row)) for row in self.rows)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> FieldMatrix:
        lines = [
            (n, s.strip())
            for n, s in enumerate(text.splitlines(), start=1)
            if s.strip() and not s.lstrip().startswith("#")
        ]
        if not lines:
            raise ParseError("empty matrix text", 1)
        n0, header = lines[0]
        fields: dict[str, int] = {}
        for tok in header.split():
            key, sep, val = tok.partition("=")
            if not sep or key not in ("q", "r", "m"):
                raise ParseError(f"bad header token {tok!r}", n0)
            try:
                fields[key] = int(val)
            except ValueError:
                raise ParseError(f"bad header value {tok!r}", n0)
        if set(fields) != {"q", "r", "m"}:
            raise ParseError("header must define q, r and m", n0)
        p, r, m = fields["q"], fields["r"], fields["m"]
        if not is_prime(p):
            raise ParseError(f"q={p} is not prime", n0)
        body = lines[1:]
        if len(body) != r:
            raise ParseError(f"expected {r} rows, found {len(body)}", n0)
        rows = []
        for n, s in body:
            try:
                vals = [int(t) for t in s.split()]
            except ValueError:
                raise ParseError("matrix entries must be integers", n)
            if len(vals) != m:
                raise ParseError(f"expected {m} entries, found {len(vals)}", n)
            if any(not 0 <= v < p for v in vals):
                raise ParseError(f"entries must lie in [0, {p - 1}]", n)
            rows.append(tuple(vals))
        return cls(p, tuple(rows))


def rref(matrix: FieldMatrix) -> tuple[FieldMatrix, list[int]]:
    """Reduced row echelon form; pivot columns are returned 1-based."""
    red, piv = rref_rows(matrix.rows, matrix.p)
    out = FieldMatrix.from_rows(red, matrix.p) if red else FieldMatrix(matrix.p, ())
    return out, [c + 1 for c in piv]


def rank(matrix: FieldMatrix) -> int:
    return matrix.rank()


def solve_dependency(matrix: FieldMatrix, target: int) -> tuple[int, ...] | None:
    """Express column ``target`` through the remaining columns of ``matrix``.

    The coefficients are listed in increasing order of the remaining columns.
    Returns ``None`` when ``target`` is outside their span.

    Raises:
        ContractViolation: the remaining columns are dependent, so a solution
            is not unique.
    """
    others = [matrix.column(j) for j in range(1, matrix.ncols + 1) if j != target]
    f = solve_columns(others, matrix.column(target), matrix.p)
    return None if f is None else tuple(f)
