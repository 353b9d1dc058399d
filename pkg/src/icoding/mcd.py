"""Deterministic encoder synthesis: fill a support pattern with field values so that
every row-prefix/column-subset submatrix reaches its structural maximum rank.

Entries are fixed row by row. For entry ``(k, i)`` every circuit of ``H_[k-1]``
through column ``i`` (within the already-fixed columns ``L``) forces one value
of ``h_{k,i}`` that would keep it dependent; those values form the veto set and
any other value is safe.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from icoding.errors import (
    CapExceededError,
    ContractViolation,
    FieldTooSmallError,
)
from icoding.gf import FieldMatrix, is_prime, rank_rows, solve_columns
from icoding.matching import BinaryMatrix, mcm_submatrix
from icoding.umcd import q_min

VERIFY_CAP = 12


@dataclass(frozen=True)
class VetoSet:
    """Values forbidden for ``h_{k,i}`` given the fixed columns ``context``.

    ``circuits`` lists each ``L'`` such that ``L' ∪ {i}`` is a circuit of
    ``H_[k-1]``; ``values`` is the deduplicated set of their veto values.
    """

    position: tuple[int, int]
    context: frozenset[int]
    values: frozenset[int]
    circuits: tuple[frozenset[int], ...]


def _columns(matrix: FieldMatrix) -> list[tuple[int, ...]]:
    return [matrix.column(j) for j in range(1, matrix.ncols + 1)]


def _is_dependent(cols: Sequence[Sequence[int]], p: int) -> bool:
    return rank_rows(cols, p) < len(cols)


def enumerate_circuits_through(
    matrix: FieldMatrix, i: int, L: Iterable[int]
) -> list[frozenset[int]]:
    """All ``L' ⊆ L \\ {i}`` such that ``L' ∪ {i}`` is a circuit of ``matrix``.

    ``L' ∪ {i}`` is a circuit exactly when ``L'`` is independent and column
    ``i`` is a combination of ``L'`` with every coefficient nonzero. Candidates
    are visited by size, skipping supersets of circuits already found.
    """
    L = frozenset(L)
    if i not in L:
        raise ContractViolation(f"column {i} must belong to L")
    p = matrix.p
    cols = _columns(matrix)
    target = cols[i - 1]
    # A zero column can only sit in the singleton circuit {j}.
    rest = [j for j in sorted(L - {i}) if any(cols[j - 1])]
    limit = min(matrix.rank(), len(rest))
    found: list[frozenset[int]] = []
    for size in range(0, limit + 1):
        for combo in combinations(rest, size):
            s = frozenset(combo)
            if any(c <= s for c in found):
                continue
            sub = [cols[j - 1] for j in combo]
            if size and _is_dependent(sub, p):
                continue
            f = solve_columns(sub, target, p)
            if f is not None and all(f):
                found.append(s)
        if found and not any(target):
            break
    return found


def veto_value(
    matrix: FieldMatrix, row: Sequence[int], circuit: Iterable[int], i: int
) -> int:
    """The single value of ``h_{k,i}`` that keeps ``circuit`` dependent in ``H_[k]``.

    ``row`` holds the current row-``k`` entries (1-based columns map to
    ``row[j - 1]``); only the entries of ``circuit \\ {i}`` are read.

    Raises:
        ContractViolation: ``circuit`` is not a circuit of ``matrix`` through ``i``.
    """
    members = frozenset(circuit)
    if i not in members:
        raise ContractViolation(f"circuit must contain column {i}")
    others = sorted(members - {i})
    cols = [matrix.column(j) for j in others]
    if cols and _is_dependent(cols, matrix.p):
        raise ContractViolation(f"{sorted(members)} is not a circuit")
    f = solve_columns(cols, matrix.column(i), matrix.p)
    if f is None or not all(f):
        raise ContractViolation(f"{sorted(members)} is not a circuit")
    return sum(row[j - 1] * c for j, c in zip(others, f)) % matrix.p


def veto_set(
    matrix: FieldMatrix, row: Sequence[int], i: int, L: Iterable[int], k: int | None = None
) -> VetoSet:
    """Veto set of ``L`` for entry ``(k, i)`` where ``matrix`` is ``H_[k-1]``."""
    L = frozenset(L)
    circuits = enumerate_circuits_through(matrix, i, L)
    values = frozenset(veto_value(matrix, row, c | {i}, i) for c in circuits)
    pos = (k if k is not None else matrix.nrows + 1, i)
    return VetoSet(pos, L, values, tuple(circuits))


def veto_bound(k: int, size_l: int) -> int:
    """Upper bound ``C(|L|-1, min(k-1, |L|-1))`` on the number of veto values."""
    return comb(size_l - 1, min(k - 1, size_l - 1))


def mcd(
    pattern: BinaryMatrix,
    q: int,
    *,
    allow_small_field: bool = False,
    seed: int | None = None,
    record: list[VetoSet] | None = None,
) -> FieldMatrix:
    """Fill ``pattern`` with values in ``GF(q)``.

    Row 1 is copied from the pattern. Later rows fix their support entries in
    increasing column order and give each the smallest nonzero value outside
    its veto set. With ``seed`` set, both the order and the value are drawn at
    random instead.

    Args:
        pattern: Support pattern ``G``.
        q: Prime field size; must reach ``q_min(m, r)`` unless
            ``allow_small_field`` is set.
        record: When given, every veto set computed is appended to it.

    Raises:
        FieldTooSmallError: every element of ``GF(q)`` is vetoed for some entry.
    """
    if not is_prime(q):
        raise ContractViolation(f"field size must be prime, got {q}")
    r, m = pattern.r, pattern.m
    if r == 0:
        return FieldMatrix(q, ())
    need = q_min(m, r) if r <= m else None
    if not allow_small_field and need is not None and q < need:
        raise ContractViolation(
            f"q={q} is below q_min={need}; pass allow_small_field to try anyway"
        )
    rng = random.Random(seed) if seed is not None else None
    rows: list[list[int]] = [[int(j in pattern.row(1)) for j in range(1, m + 1)]]
    for k in range(2, r + 1):
        prev = FieldMatrix.from_rows(rows, q)
        row = [0] * m
        pending = sorted(pattern.row(k))
        if rng is not None:
            rng.shuffle(pending)
        unassigned = set(pending)
        for i in pending:
            unassigned.discard(i)
            L = frozenset(range(1, m + 1)) - unassigned
            vs = veto_set(prev, row, i, L, k)
            if record is not None:
                record.append(vs)
            allowed = [v for v in range(1, q) if v not in vs.values]
            if not allowed and 0 not in vs.values:
                allowed = [0]
            if not allowed:
                raise FieldTooSmallError(
                    f"GF({q}) exhausted at entry ({k},{i}): "
                    f"veto set {sorted(vs.values)} over context {sorted(L)}"
                )
            row[i - 1] = rng.choice(allowed) if rng is not None else allowed[0]
        rows.append(row)
    return FieldMatrix.from_rows(rows, q)


@dataclass(frozen=True)
class MaxRankReport:
    """Outcome of :func:`verify_maxrank`; truthy when every check passed."""

    ok: bool
    counterexample: tuple[int, frozenset[int]] | None = None
    rank: int | None = None
    mcm: int | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_maxrank(
    pattern: BinaryMatrix, matrix: FieldMatrix, *, cap: int = VERIFY_CAP
) -> MaxRankReport:
    """Check ``rank(H_[k]^L) == mcm(G_[k]^L)`` for every ``k`` and every ``L``.

    Column subsets are scanned by size, then lexicographically, for each ``k``
    in increasing order; the first failure is reported.

    Raises:
        CapExceededError: more than ``cap`` columns.
    """
    m = pattern.m
    if m > cap:
        raise CapExceededError(f"maxrank verification is capped at m <= {cap} (got m={m})")
    if matrix.shape != (pattern.r, m):
        raise ContractViolation("matrix shape does not match the pattern")
    cols = _columns(matrix)
    checked = 0
    for k in range(1, pattern.r + 1):
        krows = range(1, k + 1)
        for size in range(1, m + 1):
            for combo in combinations(range(1, m + 1), size):
                got = rank_rows([cols[j - 1][:k] for j in combo], matrix.p)
                want = mcm_submatrix(pattern, krows, combo)
                checked += 1
                if got != want:
                    return MaxRankReport(False, (k, frozenset(combo)), got, want, checked)
    return MaxRankReport(True, checked=checked)
