"""Greedy construction of the unicast-based support pattern and its broadcast rate.

Each round picks a still-unsatisfied receiver ``w`` with the least side
information and adds the row ``G_k = {w} ∪ A_w``. A receiver ``i`` counts as
satisfied once ``mcm(G_[k]^{{i} ∪ B_i}) = mcm(G_[k]^{B_i}) + 1``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Literal, Sequence

from icoding.errors import CapExceededError, ContractViolation
from icoding.instance import Instance, InstanceLike, as_instance
from icoding.matching import BinaryMatrix, mcm_submatrix

EXHAUSTIVE_BRANCH_CAP = 100_000

PolicyKind = Literal["lowest_index", "seeded", "exhaustive_min"]


@dataclass(frozen=True)
class TieBreak:
    """How to pick ``w`` among the receivers with the least side information."""

    kind: PolicyKind = "lowest_index"
    seed: int | None = None
    branch_cap: int = EXHAUSTIVE_BRANCH_CAP

    def __post_init__(self) -> None:
        if self.kind not in ("lowest_index", "seeded", "exhaustive_min"):
            raise ValueError(f"unknown tie-break policy {self.kind!r}")
        if self.kind == "seeded" and self.seed is None:
            raise ValueError("seeded tie-break needs a seed")

    @classmethod
    def seeded(cls, seed: int) -> TieBreak:
        return cls("seeded", seed)

    def describe(self) -> str:
        return f"seeded({self.seed})" if self.kind == "seeded" else self.kind


LOWEST_INDEX = TieBreak()
EXHAUSTIVE_MIN = TieBreak("exhaustive_min")


@dataclass(frozen=True)
class Round:
    """One transmission: the chosen receiver, its row and who it newly satisfies."""

    k: int
    chosen: int
    row: frozenset[int]
    satisfied: frozenset[int]

    def trace_line(self) -> str:
        def fmt(s: frozenset[int]) -> str:
            return "{" + ",".join(map(str, sorted(s))) + "}"

        return f"{self.k}: w={self.chosen} G_k={fmt(self.row)} satisfied={fmt(self.satisfied)}"


@dataclass(frozen=True)
class UmcdResult:
    """Outcome of one greedy run.

    Attributes:
        rate: Number of transmissions ``r``.
        support: The ``r x m`` support pattern ``G``.
        schedule: Per-round record of choices and newly satisfied receivers.
        q_min: Field size that guarantees an encoding matrix exists.
        tie_break: Policy that produced this result.
        branches: Leaves explored (only above 1 for ``exhaustive_min``).
    """

    rate: int
    support: BinaryMatrix
    schedule: tuple[Round, ...]
    q_min: int
    tie_break: TieBreak
    branches: int = 1

    @property
    def choices(self) -> tuple[int, ...]:
        return tuple(rd.chosen for rd in self.schedule)

    def satisfied_at(self) -> dict[int, int]:
        """Map receiver -> round in which it was first satisfied."""
        return {i: rd.k for rd in self.schedule for i in rd.satisfied}


def q_min(m: int, r: int) -> int:
    """``C(m, min(floor(m/2), r))``; a field this large always admits an encoder."""
    if not 1 <= r <= m:
        raise ValueError(f"need 1 <= r <= m, got r={r}, m={m}")
    return math.comb(m, min(m // 2, r))


def is_satisfied(instance: Instance, support: BinaryMatrix, i: int) -> bool:
    """Whether receiver ``i`` can decode from the rows of ``support``."""
    rows = range(1, support.r + 1)
    b = instance.interfering(i)
    return mcm_submatrix(support, rows, b | {i}) == mcm_submatrix(support, rows, b) + 1


def _candidates(instance: Instance, pending: Sequence[int]) -> list[int]:
    low = min(len(instance.A(i)) for i in pending)
    return [i for i in pending if len(instance.A(i)) == low]


def _advance(
    instance: Instance, rows: BinaryMatrix, pending: list[int], w: int, k: int
) -> tuple[BinaryMatrix, list[int], Round]:
    row = frozenset({w}) | instance.A(w)
    rows = rows.append(row)
    rest = [i for i in pending if i != w]
    done = [i for i in rest if is_satisfied(instance, rows, i)]
    left = [i for i in rest if i not in done]
    return rows, left, Round(k, w, row, frozenset(done) | {w})


def _finish(
    instance: Instance, rows: BinaryMatrix, sched: list[Round], policy: TieBreak, branches: int
) -> UmcdResult:
    r = len(sched)
    return UmcdResult(r, rows, tuple(sched), q_min(instance.m, r), policy, branches)


def run_umcd(
    instance: InstanceLike,
    policy: TieBreak = LOWEST_INDEX,
    *,
    forced: Sequence[int] | None = None,
) -> UmcdResult:
    """Run the greedy support construction.

    Args:
        instance: Instance, or subinstance (then relabeled to ``1..|M|``).
        policy: Tie-break among minimum-side-information receivers.
        forced: Testing hook. Round ``k`` picks ``forced[k-1]`` whether or not
            it has minimum side information; later rounds fall back to
            ``policy``.

    Raises:
        CapExceededError: ``exhaustive_min`` explored more leaves than its cap.
        ContractViolation: a forced choice is already satisfied or unknown.
    """
    inst = as_instance(instance)
    if policy.kind == "exhaustive_min" and not forced:
        return _exhaustive(inst, policy)
    rng = random.Random(policy.seed) if policy.kind == "seeded" else None
    rows = BinaryMatrix(inst.m, ())
    pending = list(inst.receivers)
    sched: list[Round] = []
    forced = list(forced or ())
    while pending:
        k = len(sched) + 1
        if k <= len(forced):
            w = forced[k - 1]
            if w not in pending:
                raise ContractViolation(f"forced choice {w} is not pending in round {k}")
        else:
            cands = _candidates(inst, pending)
            if policy.kind == "exhaustive_min":
                sub = _exhaustive(inst, policy, rows, pending, sched)
                return sub
            w = rng.choice(cands) if rng is not None else cands[0]
        rows, pending, rd = _advance(inst, rows, pending, w, k)
        sched.append(rd)
    return _finish(inst, rows, sched, policy, 1)


def _exhaustive(
    inst: Instance,
    policy: TieBreak,
    rows: BinaryMatrix | None = None,
    pending: list[int] | None = None,
    sched: list[Round] | None = None,
) -> UmcdResult:
    """Depth-first search over every tie-break choice.

    Branches are visited in increasing ``w`` order and only strictly better
    leaves replace the incumbent, so the lexicographically smallest choice
    sequence wins among minimum-rate leaves.
    """
    best: list[UmcdResult | None] = [None]
    leaves = [0]

    def leaf() -> None:
        leaves[0] += 1
        if leaves[0] > policy.branch_cap:
            raise CapExceededError(
                f"exhaustive tie-break explored more than {policy.branch_cap} "
                "branches; use the lowest_index policy"
            )

    def dfs(rows: BinaryMatrix, pending: list[int], sched: list[Round]) -> None:
        if not pending:
            leaf()
            cur = best[0]
            if cur is None or len(sched) < cur.rate:
                best[0] = _finish(inst, rows, sched, policy, 0)
            return
        cur = best[0]
        if cur is not None and len(sched) + 1 >= cur.rate:
            # Any completion needs at least one more round; it cannot improve.
            leaf()
            return
        for w in _candidates(inst, pending):
            nrows, npend, rd = _advance(inst, rows, pending, w, len(sched) + 1)
            dfs(nrows, npend, sched + [rd])

    dfs(
        rows if rows is not None else BinaryMatrix(inst.m, ()),
        list(pending) if pending is not None else list(inst.receivers),
        list(sched or ()),
    )
    res = best[0]
    assert res is not None
    return UmcdResult(res.rate, res.support, res.schedule, res.q_min, policy, leaves[0])


def umcd_rate(instance: InstanceLike, policy: TieBreak = LOWEST_INDEX) -> int:
    """Broadcast rate of the greedy scheme under ``policy``."""
    return run_umcd(instance, policy).rate
