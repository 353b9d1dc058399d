"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import random
from itertools import permutations

from icoding import BinaryMatrix, Instance


def random_instance(rng: random.Random, m: int, density: float = 0.5) -> Instance:
    """Each ``j != i`` joins ``A_i`` independently with probability ``density``."""
    return Instance.from_lists(
        [{j for j in range(1, m + 1) if j != i and rng.random() < density} for i in range(1, m + 1)]
    )


def random_pattern(rng: random.Random, r: int, m: int, density: float = 0.4) -> BinaryMatrix:
    return BinaryMatrix.from_rows(
        m, [{i for i in range(1, m + 1) if rng.random() < density} for _ in range(r)]
    )


def isomorphic(a: Instance, b: Instance) -> bool:
    """Brute-force isomorphism test over all relabelings (small ``m`` only)."""
    if a.m != b.m:
        return False
    for perm in permutations(range(1, a.m + 1)):
        if a.relabel(dict(zip(a.receivers, perm))) == b:
            return True
    return False


def union_condition(support: BinaryMatrix, d: int) -> bool:
    """``|∪_{k∈K} G_k| >= d - 1 + |K|`` for every nonempty ``K ⊆ [r]``."""
    r = support.r
    for mask in range(1, 1 << r):
        rows = [k + 1 for k in range(r) if mask >> k & 1]
        cover = frozenset().union(*(support.row(k) for k in rows))
        if len(cover) < d - 1 + len(rows):
            return False
    return True


def acyclic_oracle(inst: Instance, members: set[int]) -> bool:
    """Kahn-style peeling: repeatedly drop vertices with no in-arc from the rest."""
    left = set(members)
    while left:
        sources = {v for v in left if not (inst.A(v) & left)}
        if not sources:
            return False
        left -= sources
    return True


def min_vertex_cover(pattern: BinaryMatrix) -> int:
    """Smallest row-plus-column cover of the support; equals mcm by König's theorem."""
    r = pattern.r
    best = r
    for mask in range(1 << r):
        kept = [k + 1 for k in range(r) if not mask >> k & 1]
        cols = frozenset().union(*(pattern.row(k) for k in kept))
        best = min(best, bin(mask).count("1") + len(cols))
    return best
