"""Independent checks of encoding matrices: decodability two ways and the full pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from icoding.errors import CapExceededError
from icoding.gf import FieldMatrix, next_prime_at_least, rank_rows
from icoding.instance import Instance
from icoding.matching import BinaryMatrix
from icoding.mcd import VERIFY_CAP, mcd, verify_maxrank
from icoding.umcd import LOWEST_INDEX, TieBreak, UmcdResult, run_umcd

EXHAUSTIVE_CAP = 10**7
_CHUNK = 1 << 18

Method = Literal["rank", "exhaustive"]


def decodable_rank(instance: Instance, H: FieldMatrix, i: int, k: int) -> bool:
    """``rank(H_[k]^{{i} ∪ B_i}) == rank(H_[k]^{B_i}) + 1``."""
    b = sorted(instance.interfering(i))
    cols_b = [H.column(j)[:k] for j in b]
    with_i = cols_b + [H.column(i)[:k]]
    return rank_rows(with_i, H.p) == rank_rows(cols_b, H.p) + 1


def exhaustive_size(instance: Instance, H: FieldMatrix, i: int) -> int:
    """Number of difference vectors :func:`decodable_exhaustive` enumerates."""
    return H.p ** len(instance.interfering(i))


def decodable_exhaustive(
    instance: Instance, H: FieldMatrix, i: int, k: int, *, cap: int = EXHAUSTIVE_CAP
) -> bool:
    """Whether receiver ``i`` can tell apart every pair of messages differing in ``x_i``.

    Two message vectors that agree on ``A_i`` but differ in ``x_i`` collide
    after the first ``k`` transmissions exactly when their difference ``d``
    satisfies ``H_[k] d = 0``. Such a ``d`` is zero on ``A_i`` and nonzero at
    ``i``; scaling makes ``d_i = 1``. The check enumerates every remaining
    choice of ``d`` on ``B_i`` and looks for a collision.

    Raises:
        CapExceededError: ``q^{|B_i|}`` exceeds ``cap``.
    """
    p = H.p
    b = sorted(instance.interfering(i))
    total = p ** len(b)
    if total > cap:
        raise CapExceededError(
            f"exhaustive decoding check needs {total} vectors (cap {cap}); use the rank method"
        )
    if k == 0:
        return False
    hk = np.array([row for row in H.rows[:k]], dtype=np.int64)
    base = hk[:, i - 1] % p
    cols = hk[:, [j - 1 for j in b]] if b else np.zeros((k, 0), dtype=np.int64)
    powers = np.array([p**t for t in range(len(b))], dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % p
        resid = (digits @ cols.T + base[None, :]) % p
        if np.any(~resid.any(axis=1)):
            return False
    return True


@dataclass(frozen=True)
class DecodabilityReport:
    """Verdicts ``decodable(i, k)`` for every receiver and prefix ``k = 1..r``.

    Under the exhaustive method, receivers whose enumeration is over the cap
    are listed in ``skipped`` and have no verdicts.
    """

    method: Method
    verdicts: dict[tuple[int, int], bool]
    skipped: frozenset[int] = frozenset()

    def decodable_set(self, k: int) -> frozenset[int]:
        return frozenset(i for (i, kk), ok in self.verdicts.items() if kk == k and ok)

    def first_prefix(self, i: int) -> int | None:
        ks = sorted(kk for (ii, kk), ok in self.verdicts.items() if ii == i and ok)
        return ks[0] if ks else None


def decodability_report(
    instance: Instance, H: FieldMatrix, method: Method = "rank", *, cap: int = EXHAUSTIVE_CAP
) -> DecodabilityReport:
    verdicts: dict[tuple[int, int], bool] = {}
    skipped = set()
    for i in instance.receivers:
        if method == "exhaustive" and exhaustive_size(instance, H, i) > cap:
            skipped.add(i)
            continue
        for k in range(1, H.nrows + 1):
            if method == "rank":
                verdicts[(i, k)] = decodable_rank(instance, H, i, k)
            else:
                verdicts[(i, k)] = decodable_exhaustive(instance, H, i, k, cap=cap)
    return DecodabilityReport(method, verdicts, frozenset(skipped))


@dataclass(frozen=True)
class Check:
    name: str
    status: Literal["pass", "fail", "skipped (cap)"]
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass(frozen=True)
class PipelineReport:
    """Result of the greedy support, encoder synthesis and verification chain."""

    instance: Instance
    umcd: UmcdResult
    matrix: FieldMatrix
    checks: tuple[Check, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def render(self) -> str:
        lines = [f"rate={self.umcd.rate} q={self.matrix.p} q_min={self.umcd.q_min}"]
        for c in self.checks:
            lines.append(f"{c.name}: {c.status}" + (f" ({c.detail})" if c.detail else ""))
        return "\n".join(lines)


def _fits_check(pattern: BinaryMatrix, H: FieldMatrix) -> Check:
    if H.shape != (pattern.r, pattern.m):
        return Check("fits", "fail", f"shape {H.shape} vs pattern {(pattern.r, pattern.m)}")
    for k in range(1, pattern.r + 1):
        g = pattern.row(k)
        for i in range(1, pattern.m + 1):
            nz = H.rows[k - 1][i - 1] != 0
            if nz != (i in g):
                kind = "nonzero off" if nz else "zero on"
                return Check("fits", "fail", f"entry ({k},{i}) is {kind} the support")
    return Check("fits", "pass")


def _schedule_check(name: str, rep: DecodabilityReport, res: UmcdResult) -> Check:
    done: set[int] = set()
    for rd in res.schedule:
        done |= rd.satisfied
        expect = frozenset(done) - rep.skipped
        got = rep.decodable_set(rd.k)
        if got != expect:
            return Check(
                name,
                "fail",
                f"prefix {rd.k}: decodable {sorted(got)} but schedule says {sorted(expect)}",
            )
    if rep.skipped:
        return Check(name, "pass", f"receivers {sorted(rep.skipped)} over the enumeration cap")
    return Check(name, "pass")


def check_code(
    instance: Instance,
    result: UmcdResult,
    H: FieldMatrix,
    *,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
    maxrank_cap: int = VERIFY_CAP,
) -> PipelineReport:
    """Run every consistency check on a greedy schedule and an encoding matrix."""
    checks = [_fits_check(result.support, H)]
    if instance.m <= maxrank_cap:
        mr = verify_maxrank(result.support, H, cap=maxrank_cap)
        if mr.ok:
            checks.append(Check("maxrank", "pass", f"{mr.checked} submatrices"))
        else:
            assert mr.counterexample is not None
            k, L = mr.counterexample
            checks.append(
                Check("maxrank", "fail", f"k={k} L={sorted(L)} rank={mr.rank} mcm={mr.mcm}")
            )
    else:
        checks.append(Check("maxrank", "skipped (cap)", f"m={instance.m} > {maxrank_cap}"))
    by_rank = decodability_report(instance, H, "rank")
    checks.append(_schedule_check("decodable_rank", by_rank, result))
    by_enum = decodability_report(instance, H, "exhaustive", cap=exhaustive_cap)
    if len(by_enum.skipped) == instance.m:
        checks.append(Check("decodable_exhaustive", "skipped (cap)", "every receiver over cap"))
    else:
        checks.append(_schedule_check("decodable_exhaustive", by_enum, result))
    disagree = [key for key, v in by_enum.verdicts.items() if by_rank.verdicts[key] != v]
    checks.append(
        Check("methods_agree", "fail", f"disagree at {disagree[:5]}")
        if disagree
        else Check("methods_agree", "pass", f"{len(by_enum.verdicts)} verdicts compared")
    )
    return PipelineReport(instance, result, H, tuple(checks))


def full_pipeline_check(
    instance: Instance,
    *,
    q: int | None = None,
    policy: TieBreak = LOWEST_INDEX,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
) -> PipelineReport:
    """Greedy support, then encoder synthesis, then every check in :func:`check_code`."""
    res = run_umcd(instance, policy)
    field_size = q if q is not None else next_prime_at_least(res.q_min)
    H = mcd(res.support, field_size, allow_small_field=q is not None)
    return check_code(instance, res, H, exhaustive_cap=exhaustive_cap)
