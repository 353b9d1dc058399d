from __future__ import annotations

import random
from itertools import product

import pytest

from icoding.errors import CapExceededError
from icoding.gf import FieldMatrix
from icoding.instance import NAMED_INSTANCES, Instance, gen_class_i6, gen_class_i7, named_instance
from icoding.umcd import run_umcd
from icoding.verify import (
    check_code,
    decodability_report,
    decodable_exhaustive,
    decodable_rank,
    full_pipeline_check,
)

from support import random_instance

I5_H = FieldMatrix.from_rows([[1, 0, 0, 1, 1], [1, 1, 1, 0, 2]], 3)


def pairwise_decodable(inst: Instance, H: FieldMatrix, i: int, k: int) -> bool:
    """Literal definition: no two message vectors agree on ``A_i`` and on ``H_[k] x`` yet differ at ``i``."""
    p, m = H.p, inst.m
    seen: dict[tuple, int] = {}
    side = sorted(inst.A(i))
    for x in product(range(p), repeat=m):
        key = (tuple(x[j - 1] for j in side), H.prefix(k).matvec(x))
        if seen.setdefault(key, x[i - 1]) != x[i - 1]:
            return False
    return True


def test_i5_receiver1():
    inst = named_instance("I5")
    assert decodable_exhaustive(inst, I5_H, 1, 2)
    assert not decodable_exhaustive(inst, I5_H, 1, 1)
    assert decodable_rank(inst, I5_H, 1, 2)
    assert not decodable_rank(inst, I5_H, 1, 1)


def test_full_side_info_receiver_decodes():
    inst = Instance.from_lists([{2, 3}, set(), set()])
    H = FieldMatrix.from_rows([[1, 1, 0], [0, 1, 1]], 5)
    assert decodable_exhaustive(inst, H, 1, 1)
    assert decodable_rank(inst, H, 1, 1)


def test_zero_matrix_decodes_nothing():
    inst = named_instance("I4")
    H = FieldMatrix.zeros(3, 5, 5)
    for i in inst.receivers:
        assert not decodable_rank(inst, H, i, 3)
        assert not decodable_exhaustive(inst, H, i, 3)


def test_exhaustive_cap():
    inst = Instance.from_lists([set()] * 6)
    H = FieldMatrix.identity(6, 23)
    with pytest.raises(CapExceededError, match="rank method"):
        decodable_exhaustive(inst, H, 1, 6, cap=1000)


def test_difference_enumeration_matches_pair_definition():
    rng = random.Random(40)
    for _ in range(60):
        m = rng.randint(1, 4)
        inst = random_instance(rng, m, rng.random())
        p = rng.choice([2, 3])
        r = rng.randint(1, m)
        H = FieldMatrix.from_rows([[rng.randrange(p) for _ in range(m)] for _ in range(r)], p)
        for i in inst.receivers:
            for k in range(1, r + 1):
                want = pairwise_decodable(inst, H, i, k)
                assert decodable_exhaustive(inst, H, i, k) == want
                assert decodable_rank(inst, H, i, k) == want


def test_rank_and_exhaustive_agree_on_random_codes():
    rng = random.Random(41)
    for _ in range(80):
        m = rng.randint(1, 6)
        inst = random_instance(rng, m, rng.random())
        p = rng.choice([2, 3, 5])
        r = rng.randint(1, m)
        H = FieldMatrix.from_rows([[rng.randrange(p) for _ in range(m)] for _ in range(r)], p)
        a = decodability_report(inst, H, "rank")
        b = decodability_report(inst, H, "exhaustive")
        assert a.verdicts == b.verdicts


def test_report_queries():
    inst = named_instance("I5")
    rep = decodability_report(inst, I5_H, "rank")
    assert rep.decodable_set(2) == frozenset(range(1, 6))
    assert rep.first_prefix(5) == 1
    assert rep.first_prefix(1) == 2


@pytest.mark.parametrize("name", NAMED_INSTANCES)
def test_pipeline_named(name):
    report = full_pipeline_check(named_instance(name))
    assert report.ok, report.render()
    statuses = {c.name: c.status for c in report.checks}
    assert statuses["fits"] == "pass"
    assert statuses["maxrank"] == "pass"
    assert statuses["decodable_rank"] == "pass"
    assert statuses["decodable_exhaustive"] == "pass"
    assert statuses["methods_agree"] == "pass"


@pytest.mark.parametrize("inst", [gen_class_i6(1), gen_class_i7(1)], ids=["i6-1", "i7-1"])
def test_pipeline_families(inst):
    report = full_pipeline_check(inst)
    assert report.ok, report.render()


def test_pipeline_small_fields():
    assert full_pipeline_check(named_instance("I5"), q=3).ok
    assert full_pipeline_check(named_instance("I4"), q=2).ok


def test_pipeline_flags_bad_matrix():
    inst = named_instance("I4")
    res = run_umcd(inst)
    bad = FieldMatrix.from_rows([[0, 1, 1, 0, 0], [0, 0, 0, 1, 1], [1, 1, 0, 1, 1]], 11)
    report = check_code(inst, res, bad)
    assert not report.ok
    assert "fits" in {c.name for c in report.failed}
    assert "fits: fail" in report.render()


def test_pipeline_random_instances():
    rng = random.Random(42)
    for _ in range(30):
        inst = random_instance(rng, rng.randint(1, 6), rng.random())
        report = full_pipeline_check(inst)
        assert report.ok, report.render()
