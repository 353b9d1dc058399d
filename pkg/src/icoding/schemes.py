"""Baseline broadcast-rate schemes and the partition / time-sharing UMCD extensions.

Every scheme works on bitmasks internally: bit ``v - 1`` stands for receiver
``v``. Results are reported with 1-based index sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from icoding.errors import CapExceededError
from icoding.instance import Instance, InstanceLike, Partition, as_instance
from icoding.lp import Constraint, LpProblem, covering_problem, solve
from icoding.umcd import LOWEST_INDEX, TieBreak, umcd_rate

PCC_CAP = 15
FPCC_CAP = 12
RECURSIVE_CAP = 9
ICC_CAP = 8
MINRANK_CAP = 24
PATH_COUNT_CAP = 100_000


@dataclass(frozen=True)
class CoverEntry:
    members: frozenset[int]
    weight: Fraction
    local_rate: Fraction


@dataclass(frozen=True)
class Cover:
    """Weighted subinstances whose weights cover every receiver at least once."""

    entries: tuple[CoverEntry, ...]
    total_rate: Fraction

    def coverage(self, i: int) -> Fraction:
        return sum((e.weight for e in self.entries if i in e.members), Fraction(0))


@dataclass(frozen=True)
class IccStructure:
    """A vertex set ``M`` with a valid inner vertex set ``J``; rate ``|M| - |J| + 1``."""

    members: frozenset[int]
    inner: frozenset[int]

    @property
    def rate(self) -> int:
        return len(self.members) - len(self.inner) + 1


# -------------------------------------------------------------------- helpers


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _to_set(mask: int) -> frozenset[int]:
    return frozenset(v + 1 for v in _bits(mask))


def _submasks(mask: int) -> Iterator[int]:
    """Nonempty submasks of ``mask`` in decreasing numeric order."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def _check_cap(name: str, m: int, cap: int) -> None:
    if m > cap:
        raise CapExceededError(f"{name} is capped at m <= {cap} (got m={m})")


def _mds_cost(masks: Sequence[int], t: int) -> int:
    return _popcount(t) - min(_popcount(t & masks[v]) for v in _bits(t))


def _lex_key(mask: int) -> tuple[int, ...]:
    return tuple(_bits(mask))


def _partition_dp(m: int, cost: Callable[[int], int]) -> tuple[int, list[int]]:
    """Minimum-cost partition of ``[m]`` by DP over subsets.

    The block holding the lowest element of ``S`` is enumerated explicitly;
    ties go to the block whose sorted members are lexicographically smallest.
    """
    full = (1 << m) - 1
    best = [0] * (full + 1)
    pick = [0] * (full + 1)
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        top: int | None = None
        choice = 0
        sub = rest
        while True:
            t = sub | low
            val = cost(t) + best[s ^ t]
            if top is None or val < top or (val == top and _lex_key(t) < _lex_key(choice)):
                top, choice = val, t
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[s] = top  # type: ignore[assignment]
        pick[s] = choice
    blocks = []
    s = full
    while s:
        blocks.append(pick[s])
        s ^= pick[s]
    return best[full], blocks


def _cover_lp(
    m: int, columns: Sequence[int], costs: Sequence[int | Fraction], *, equality: bool = False
) -> tuple[Fraction, Cover]:
    blocks = [_to_set(c) for c in columns]
    problem = covering_problem(costs, blocks, range(1, m + 1), equality=equality)
    res = solve(problem)
    if res.status != "optimal" or res.x is None or res.value is None:
        raise RuntimeError(f"covering LP unexpectedly {res.status}")
    entries = tuple(
        CoverEntry(blocks[j], w, Fraction(costs[j])) for j, w in enumerate(res.x) if w
    )
    return res.value, Cover(entries, res.value)


# ------------------------------------------------------------------------ MDS


def mds_rate(sub: InstanceLike) -> int:
    """``|M| - min_i |M ∩ A_i|``: one MDS code over the whole (sub)instance."""
    inst = as_instance(sub)
    return _mds_cost(inst.side_info_masks(), (1 << inst.m) - 1)


# ------------------------------------------------------------ partition covers


def pcc_rate(instance: InstanceLike) -> tuple[int, Partition]:
    """Best partition into blocks each served by its own MDS code."""
    inst = as_instance(instance)
    _check_cap("partial clique cover", inst.m, PCC_CAP)
    masks = inst.side_info_masks()
    total, blocks = _partition_dp(inst.m, lambda t: _mds_cost(masks, t))
    return total, Partition(tuple(_to_set(b) for b in blocks))


def pumcd_rate(
    instance: InstanceLike, policy: TieBreak = LOWEST_INDEX
) -> tuple[int, Partition]:
    """Best partition into blocks each served by the greedy UMCD scheme."""
    inst = as_instance(instance)
    _check_cap("partitioned UMCD", inst.m, PCC_CAP)
    cost = _umcd_costs(inst, policy)
    total, blocks = _partition_dp(inst.m, cost)
    return total, Partition(tuple(_to_set(b) for b in blocks))


def _umcd_costs(inst: Instance, policy: TieBreak) -> Callable[[int], int]:
    @lru_cache(maxsize=None)
    def cost(t: int) -> int:
        return umcd_rate(inst.subinstance(_to_set(t)), policy)

    return cost


# ------------------------------------------------------- fractional covers


def minimal_partial_cliques(instance: InstanceLike) -> list[frozenset[int]]:
    """Vertex sets whose MDS rate cannot be lowered by splitting them further."""
    inst = as_instance(instance)
    _check_cap("minimal partial clique enumeration", inst.m, PCC_CAP)
    masks = inst.side_info_masks()
    full = (1 << inst.m) - 1
    best = [0] * (full + 1)
    out = []
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        whole = _mds_cost(masks, s)
        top = whole
        sub = rest
        while True:
            t = sub | low
            if t != s:
                top = min(top, _mds_cost(masks, t) + best[s ^ t])
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[s] = top
        if whole == top:
            out.append(_to_set(s))
    return out


def fpcc_rate(
    instance: InstanceLike, *, equality: bool = False, minimal_only: bool = False
) -> tuple[Fraction, Cover]:
    """Time sharing over MDS codes of all nonempty subinstances.

    Args:
        equality: Cover each receiver exactly once instead of at least once.
        minimal_only: Restrict the columns to minimal partial cliques.
    """
    inst = as_instance(instance)
    _check_cap("fractional partial clique cover", inst.m, FPCC_CAP)
    masks = inst.side_info_masks()
    if minimal_only:
        cols = [sum(1 << (v - 1) for v in s) for s in minimal_partial_cliques(inst)]
    else:
        cols = list(range(1, 1 << inst.m))
    costs = [_mds_cost(masks, t) for t in cols]
    return _cover_lp(inst.m, cols, costs, equality=equality)


def fpumcd_rate(
    instance: InstanceLike, policy: TieBreak = LOWEST_INDEX, *, equality: bool = False
) -> tuple[Fraction, Cover]:
    """Time sharing over greedy UMCD codes of all nonempty subinstances."""
    inst = as_instance(instance)
    _check_cap("fractional partitioned UMCD", inst.m, FPCC_CAP)
    cost = _umcd_costs(inst, policy)
    cols = list(range(1, 1 << inst.m))
    return _cover_lp(inst.m, cols, [cost(t) for t in cols], equality=equality)


# ---------------------------------------------------------------- recursive


def recursive_rate(instance: InstanceLike) -> Fraction:
    """Rate of the recursive scheme, computed bottom-up over all subsets.

    A single receiver costs 1. A larger set ``M`` time-shares over its proper
    subsets ``T`` weighted by their own recursive rates, and pays the largest
    load seen by any receiver ``i``, counting only those ``T`` with
    ``T ⊄ A_i``.
    """
    inst = as_instance(instance)
    _check_cap("recursive scheme", inst.m, RECURSIVE_CAP)
    masks = inst.side_info_masks()
    memo: dict[int, Fraction] = {}

    def rate(s: int) -> Fraction:
        if s in memo:
            return memo[s]
        if s & (s - 1) == 0:
            memo[s] = Fraction(1)
            return memo[s]
        subs = [t for t in _submasks(s) if t != s]
        beta = [rate(t) for t in subs]
        tvar = len(subs)
        rows = []
        for v in _bits(s):
            known = masks[v]
            load = {j: beta[j] for j, t in enumerate(subs) if t & ~known}
            load[tvar] = Fraction(-1)
            rows.append(Constraint(load, "<=", 0))
            rows.append(Constraint({j: 1 for j, t in enumerate(subs) if t >> v & 1}, ">=", 1))
        obj = (Fraction(0),) * tvar + (Fraction(1),)
        upper = (Fraction(1),) * tvar + (None,)
        res = solve(LpProblem(obj, tuple(rows), upper))
        if res.status != "optimal" or res.value is None:
            raise RuntimeError(f"recursive LP unexpectedly {res.status}")
        memo[s] = res.value
        return res.value

    return rate((1 << inst.m) - 1)


# --------------------------------------------------------- interlinked cycles


class _PathCounter:
    """Simple-path counting over the side-information digraph (edge ``u -> v`` iff ``u ∈ A_v``)."""

    def __init__(self, inst: Instance, cap: int) -> None:
        self.succ = [0] * inst.m
        for v in inst.receivers:
            for u in inst.A(v):
                self.succ[u - 1] |= 1 << (v - 1)
        self.cap = cap
        self.work = 0

    def count(self, a: int, b: int, internal: int, limit: int = 2) -> int:
        """Number of simple ``a -> b`` paths with internal vertices in ``internal``, up to ``limit``."""
        target = 1 << b
        found = 0
        stack = [(a, 1 << a)]
        while stack:
            u, seen = stack.pop()
            self.work += 1
            if self.work > self.cap:
                raise CapExceededError(
                    f"simple-path enumeration exceeded {self.cap} steps"
                )
            nxt = self.succ[u]
            if nxt & target:
                found += 1
                if found >= limit:
                    return found
            for w in _bits(nxt & internal & ~seen):
                stack.append((w, seen | 1 << w))
        return found

    def on_cycle(self, a: int, internal: int) -> bool:
        """Whether some cycle through ``a`` uses only vertices of ``internal`` besides ``a``."""
        if self.succ[a] >> a & 1:
            return True
        frontier = self.succ[a] & internal
        reached = frontier
        while frontier:
            new = 0
            for w in _bits(frontier):
                if self.succ[w] >> a & 1:
                    return True
                new |= self.succ[w] & internal
            frontier = new & ~reached
            reached |= frontier
        return False


def _valid_inner(pc: _PathCounter, m_mask: int, j_mask: int) -> bool:
    outside = m_mask & ~j_mask
    inner = list(_bits(j_mask))
    for a in inner:
        if pc.on_cycle(a, outside):
            return False
    for a in inner:
        for b in inner:
            if a != b and pc.count(a, b, outside) != 1:
                return False
    return True


def icc_structures(
    instance: InstanceLike, *, path_cap: int = PATH_COUNT_CAP
) -> list[IccStructure]:
    """For every vertex set ``M`` with a valid inner set, the structure with the largest one.

    Validity is judged on the subgraph induced by ``M``: each ordered pair of
    inner vertices needs exactly one path whose internal vertices lie outside
    the inner set, and no inner vertex may close a cycle through outside
    vertices only.
    """
    inst = as_instance(instance)
    _check_cap("interlinked-cycle cover", inst.m, ICC_CAP)
    pc = _PathCounter(inst, path_cap)
    out = []
    for s in range(1, 1 << inst.m):
        cands = sorted(_submasks(s), key=lambda t: (-_popcount(t), _lex_key(t)))
        for j in cands:
            pc.work = 0
            if _valid_inner(pc, s, j):
                out.append(IccStructure(_to_set(s), _to_set(j)))
                break
    return out


def icc_rate(
    instance: InstanceLike, *, equality: bool = False, path_cap: int = PATH_COUNT_CAP
) -> tuple[Fraction, Cover]:
    """Time sharing over interlinked-cycle structures."""
    inst = as_instance(instance)
    structs = icc_structures(inst, path_cap=path_cap)
    cols = [sum(1 << (v - 1) for v in st.members) for st in structs]
    return _cover_lp(inst.m, cols, [st.rate for st in structs], equality=equality)


def scalar_icc_rate(
    instance: InstanceLike, *, path_cap: int = PATH_COUNT_CAP
) -> tuple[int, tuple[IccStructure, ...]]:
    """Cheapest integral cover by interlinked-cycle structures."""
    inst = as_instance(instance)
    structs = icc_structures(inst, path_cap=path_cap)
    masks = [sum(1 << (v - 1) for v in st.members) for st in structs]
    full = (1 << inst.m) - 1
    best: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}

    def go(s: int) -> tuple[int, tuple[int, ...]]:
        if s in best:
            return best[s]
        low = s & -s
        top: tuple[int, tuple[int, ...]] | None = None
        for idx, mk in enumerate(masks):
            if mk & low:
                sub_cost, sub_pick = go(s & ~mk)
                cand = (sub_cost + structs[idx].rate, (idx,) + sub_pick)
                if top is None or cand[0] < top[0]:
                    top = cand
        assert top is not None
        best[s] = top
        return top

    total, pick = go(full)
    return total, tuple(structs[i] for i in pick)


# -------------------------------------------------------------- GF(2) minrank


def minrank_gf2_bruteforce(instance: InstanceLike) -> int:
    """Minimum GF(2) rank over matrices fitting the side information.

    Row ``i`` has a one on the diagonal, free bits at the columns in ``A_i``
    and zeros elsewhere. Rows are chosen depth first while an echelon basis of
    their span is kept; a branch stops once its rank reaches the best found.
    """
    inst = as_instance(instance)
    total = sum(len(a) for a in inst.side_info)
    if total > MINRANK_CAP:
        raise CapExceededError(
            f"minrank brute force is capped at sum |A_i| <= {MINRANK_CAP} (got {total})"
        )
    choices: list[list[int]] = []
    for v in range(inst.m):
        free = [1 << (j - 1) for j in sorted(inst.A(v + 1))]
        rows = []
        for pattern in range(1 << len(free)):
            row = 1 << v
            for b, bit in enumerate(free):
                if pattern >> b & 1:
                    row |= bit
            rows.append(row)
        choices.append(rows)
    best = [inst.m]

    def reduce(vec: int, basis: dict[int, int]) -> int:
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                return vec
            vec ^= basis[top]
        return 0

    def dfs(v: int, basis: dict[int, int]) -> None:
        if len(basis) >= best[0]:
            return
        if v == inst.m:
            best[0] = len(basis)
            return
        grow = []
        for row in choices[v]:
            red = reduce(row, basis)
            if red == 0:
                dfs(v + 1, basis)
                if len(basis) >= best[0]:
                    return
            else:
                grow.append(red)
        if len(basis) + 1 >= best[0]:
            return
        tried: set[int] = set()
        for red in grow:
            if red in tried:
                continue
            tried.add(red)
            nb = dict(basis)
            nb[red.bit_length() - 1] = red
            dfs(v + 1, nb)

    dfs(0, {})
    return best[0]
