import json

import pytest

from sasred import verify

FAST = verify.SamplingOptions(count=10, seed=42, full=False)


def test_triple_123_passes():
    r = verify.verify_triple((1, 2, 3), verify.SamplingOptions(count=10, seed=42))
    assert r["exact"]["admissible"]
    assert r["findings"] == []
    num = r["numerical"]
    assert num["smoothness"]["passed"] and num["freeness"]["passed"]
    assert r["vertices"]["passed"]
    assert r["dimensions"]["chain_ok"]


def test_triple_135_not_sampled():
    r = verify.verify_triple((1, 3, 5), FAST)
    assert not r["exact"]["admissible"]
    assert r["exact"]["reasons"][0] == "gcd(p1-p2, p1-p3) = 2"
    assert r["numerical"] is None
    assert all(w["verified"] for w in r["isotropy_witnesses"])
    forced = verify.verify_triple((1, 3, 5), verify.SamplingOptions(count=5, seed=42, full=False, force=True))
    assert forced["numerical"] is not None


@pytest.mark.parametrize("p", [(2, 3, 4), (2, 4, 5), (3, 6, 8), (1, 4, 7), (2, 5, 9)])
def test_isotropy_witnesses_for_failed_conditions(p):
    ws = verify.isotropy_witnesses(p, seed=1)
    assert ws, "expected at least one failed gcd condition"
    for w in ws:
        assert w["constructed"] and w["verified"], w


def test_triple_111_singular_section():
    r = verify.verify_triple((1, 1, 1), verify.SamplingOptions(count=10, seed=42))
    assert not r["exact"]["admissible"]
    assert r["label"] == "quasi-free / orbifold"
    s = r["singular_stratum"]
    assert s["passed"] and s["killing_rank"] == 3
    assert r["coassociativity"]["orbit_aligned_passed"]


def test_quad_reports():
    r = verify.verify_quad((0, 1, 2, 3), FAST)
    assert r["exact"]["free"] and r["findings"] == []
    d = r["dimensions"]
    assert (d["ambient_sphere_dim"], d["constraint_count"], d["expected_level_dim"], d["group_dim"],
            d["expected_quotient_dim"]) == (31, 13, 19, 4, 15)
    assert any("two copies" in n for n in r["notes"])
    bad = verify.verify_quad((1, 2, 3, 4), FAST)
    assert bad["exact"]["witness_triple"] == [1, 2, 4]
    one = verify.verify_quad((1, 1, 1, 1), FAST)
    assert not one["exact"]["free"] and any("Spin(7)/Spin(4)" in n for n in one["notes"])


def test_theta_reports():
    r = verify.verify_theta(verify.THETA_1, FAST)
    assert r["exact"]["locally_free"] and r["exact"]["singular_orders"] == [1, 3, 1, 1]
    assert r["exact"]["singular_orders_crosscheck"] == [1, 3, 1, 1]
    assert r["numerical"]["smoothness"]["passed"]
    r2 = verify.verify_theta(verify.THETA_2, FAST)
    assert r2["exact"]["locally_free"] and r2["exact"]["has_z3"] and r2["exact"]["unit_minors"]
    r3 = verify.verify_theta(((1, 0, 1), (0, 1, 2)), FAST)
    assert not r3["exact"]["locally_free"] and r3["exact"]["reason"] == "D12 equals D13 + D23"


def test_reports_are_reproducible():
    a = verify.verify_theta(verify.THETA_1, FAST)
    b = verify.verify_theta(verify.THETA_1, FAST)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["schema"] == verify.SCHEMA and a["options"]["seed"] == 42


def test_enumeration_only_suite():
    r = verify.verify_paper_suite(bound=4, enumeration_only=True)
    assert [c["id"] for c in r["criteria"]] == [1, 2, 3, 4, 5]
    assert r["passed"]
