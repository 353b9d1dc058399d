"""Maximum cardinality matching on the row/column bipartite graph of a 0/1 pattern.

The size of a maximum matching of a support pattern is the largest rank any
matrix with that support can reach over a large enough field.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from icoding.errors import CapExceededError, InvalidInstanceError

BRUTEFORCE_CAP = 8


@dataclass(frozen=True)
class BinaryMatrix:
    """An ``r x m`` 0/1 pattern stored as per-row supports ``G_k`` (1-based columns)."""

    m: int
    rows: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.m < 0:
            raise InvalidInstanceError("column count must be nonnegative")
        for k, g in enumerate(self.rows, start=1):
            bad = [i for i in g if not 1 <= i <= self.m]
            if bad:
                raise InvalidInstanceError(f"row {k} has columns {bad} outside [1, {self.m}]")

    @classmethod
    def from_rows(cls, m: int, rows: Iterable[Iterable[int]]) -> BinaryMatrix:
        return cls(m, tuple(frozenset(g) for g in rows))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> BinaryMatrix:
        m = len(dense[0]) if dense else 0
        return cls(
            m, tuple(frozenset(i for i, x in enumerate(row, start=1) if x) for row in dense)
        )

    @classmethod
    def identity(cls, n: int) -> BinaryMatrix:
        return cls(n, tuple(frozenset({i}) for i in range(1, n + 1)))

    @property
    def r(self) -> int:
        return len(self.rows)

    def row(self, k: int) -> frozenset[int]:
        return self.rows[k - 1]

    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset((k, i) for k, g in enumerate(self.rows, start=1) for i in g)

    def to_dense(self) -> list[list[int]]:
        return [[int(i in g) for i in range(1, self.m + 1)] for g in self.rows]

    def prefix(self, k: int) -> BinaryMatrix:
        """``G_[k]``: the first ``k`` rows."""
        return BinaryMatrix(self.m, self.rows[:k])

    def append(self, row: Iterable[int]) -> BinaryMatrix:
        return BinaryMatrix(self.m, self.rows + (frozenset(row),))


def hopcroft_karp(adj: Mapping[int, Sequence[int]]) -> dict[int, int]:
    """Maximum bipartite matching from left vertices to right vertices.

    ``adj`` maps each left vertex to its right neighbours. Left vertices are
    processed in increasing order and neighbours in the given order, so the
    returned matching (left -> right) is deterministic.
    """
    left = sorted(adj)
    match_l: dict[int, int] = {}
    match_r: dict[int, int] = {}
    inf = len(left) + 1
    while True:
        dist: dict[int, int] = {}
        queue: deque[int] = deque()
        for u in left:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
        found = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for v in adj[u]:
                w = match_r.get(v)
                if w is None:
                    found = min(found, dist[u] + 1)
                elif w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if found == inf:
            return match_l

        def augment(u: int) -> bool:
            for v in adj[u]:
                w = match_r.get(v)
                if (w is None and dist[u] + 1 == found) or (
                    w is not None and dist.get(w) == dist[u] + 1 and augment(w)
                ):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = inf
            return False

        for u in left:
            if u not in match_l:
                augment(u)


def _adjacency(
    matrix: BinaryMatrix, row_set: Iterable[int] | None, col_set: Iterable[int] | None
) -> dict[int, list[int]]:
    rows = range(1, matrix.r + 1) if row_set is None else sorted(row_set)
    cols = None if col_set is None else frozenset(col_set)
    adj: dict[int, list[int]] = {}
    for k in rows:
        g = matrix.rows[k - 1]
        nbrs = sorted(g if cols is None else g & cols)
        if nbrs:
            adj[k] = nbrs
    return adj


def maximum_matching(matrix: BinaryMatrix) -> dict[int, int]:
    """A deterministic maximum matching, as a map from rows to columns."""
    return hopcroft_karp(_adjacency(matrix, None, None))


def mcm(matrix: BinaryMatrix) -> int:
    """Size of a maximum matching between rows and columns of the pattern."""
    return len(hopcroft_karp(_adjacency(matrix, None, None)))


def mcm_submatrix(
    matrix: BinaryMatrix, row_set: Iterable[int], col_set: Iterable[int]
) -> int:
    """``mcm`` of the pattern restricted to ``row_set`` x ``col_set``."""
    return len(hopcroft_karp(_adjacency(matrix, row_set, col_set)))


def mcm_bruteforce(matrix: BinaryMatrix) -> int:
    """Reference ``mcm`` by exhaustive search over distinct representatives.

    Raises:
        CapExceededError: more than 8 rows or columns.
    """
    if matrix.r > BRUTEFORCE_CAP or matrix.m > BRUTEFORCE_CAP:
        raise CapExceededError(
            f"brute-force matching is capped at {BRUTEFORCE_CAP}x{BRUTEFORCE_CAP}"
        )
    rows = [sorted(g) for g in matrix.rows]

    def best(k: int, used: frozenset[int]) -> int:
        if k == len(rows):
            return 0
        out = best(k + 1, used)
        for i in rows[k]:
            if i not in used:
                out = max(out, 1 + best(k + 1, used | {i}))
        return out

    return best(0, frozenset())
