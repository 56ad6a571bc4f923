import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sasred import oracles, weights

small = st.integers(-20, 20)
thetas = st.tuples(st.tuples(small, small, small), st.tuples(small, small, small))
THETA_1 = ((1, 0, 1), (0, 1, 1))
THETA_2 = ((9, 2, 7), (40, 9, 31))


@pytest.mark.parametrize("p, expected", [
    ((1, 2, 3), True),
    ((1, 1, 1), False),
    ((1, 3, 5), False),
    ((3, 4, 5), True),
    ((2, 3, 4), False),
    ((3, 2, 1), False),
])
def test_admissibility_examples(p, expected):
    assert weights.is_admissible_triple(p) is expected
    assert oracles.admissible_triple(p) is expected


def test_reason_for_135():
    assert weights.triple_failures((1, 3, 5))[0] == "gcd(p1-p2, p1-p3) = 2"


def test_consecutive_family():
    assert all(weights.is_admissible_triple((2 * k - 1, 2 * k, 2 * k + 1)) for k in range(1, 200))


def test_enumeration_matches_oracle():
    assert weights.enumerate_admissible_triples(30) == oracles.admissible_triples(30)


@given(st.tuples(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40)))
def test_gcd_conditions_ignore_signs(p):
    # flipping a sign only swaps p1 - pa with p1 + pa (up to an overall sign)
    def gcds(q):
        return sorted(c["gcd"] for c in weights.triple_conditions(q) if c["kind"] != "order")
    assert gcds(p) == gcds(tuple(abs(v) for v in p))
    n = weights.normalize_triple(p)
    assert n == tuple(sorted(abs(v) for v in p))


def test_parity_obstruction():
    rep = weights.verify_parity_obstruction(30)
    assert rep["holds"] and rep["counterexamples"] == []
    assert rep["every_admissible_triple_has_one_even_entry"]


def test_quad_examples():
    assert weights.is_free_quadruple((0, 1, 2, 3))
    assert not weights.is_free_quadruple((1, 2, 3, 4))
    assert weights.failing_quad_triple((1, 2, 3, 4)) == (1, 2, 4)
    assert not weights.is_free_quadruple((1, 1, 1, 1))


def test_quads_match_oracle():
    for q in itertools.combinations(range(0, 13), 4):
        assert weights.is_free_quadruple(q) == oracles.free_quadruple(q), q


def test_free_quad_enumeration():
    quads = weights.enumerate_free_quads(12)
    assert (0, 1, 2, 3) in quads
    assert quads == [q for q in itertools.combinations(range(13), 4) if oracles.free_quadruple(q)]


def test_theta_examples():
    assert weights.minor_determinants(THETA_1) == (1, 1, -1)
    assert weights.box_determinants(THETA_1) == (-1, 3, -1, -1)
    assert weights.singular_group_orders(THETA_1) == (1, 3, 1, 1)
    ok, _ = weights.theta_locally_free(THETA_2)
    assert ok and 3 in weights.singular_group_orders(THETA_2)
    assert tuple(sorted(map(abs, weights.minor_determinants(THETA_2)))) == (1, 1, 1)
    ok, reason = weights.theta_locally_free(((1, 0, 1), (0, 1, 2)))
    assert not ok and reason == "D12 equals D13 + D23"
    with pytest.raises(weights.NotLocallyFree):
        weights.singular_group_orders(((1, 0, 1), (0, 1, 2)))


@given(thetas)
def test_box_identity(theta):
    assert weights.verify_box_identity(theta)
    assert tuple(weights.box_determinants(theta)) == oracles.boxes_direct(theta)


@given(thetas, st.sampled_from([((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (-3, 1)),
                                ((-1, 0), (0, 1)), ((2, 1), (1, 1))]))
def test_locally_free_is_gl2z_invariant(theta, g):
    (a, b), (c, d) = g
    p, q = theta
    new = (tuple(a * x + b * y for x, y in zip(p, q)), tuple(c * x + d * y for x, y in zip(p, q)))
    assert weights.theta_locally_free(theta)[0] == weights.theta_locally_free(new)[0]
    det = a * d - b * c
    assert tuple(det * m for m in weights.minor_determinants(theta)) == weights.minor_determinants(new)


def test_obstruction_table():
    rows = weights.theta_smoothness_obstruction()
    assert len(rows) == 8
    assert all(r["count_pm3"] >= 1 and not r["all_unit"] for r in rows)
    # the count is exactly one in every case
    assert {r["count_pm3"] for r in rows} == {1}


@given(st.tuples(st.tuples(small, small), st.tuples(small, small)))
@settings(max_examples=200)
def test_torus_isotropy_matches_bruteforce(e):
    (a, b), (c, d) = e
    if a * d - b * c == 0:
        assert weights.torus_isotropy_order(e) == weights.INFINITE
    else:
        assert weights.torus_isotropy_order(e) == weights.torus_isotropy_bruteforce(e)


@given(st.tuples(st.tuples(small, small), st.tuples(small, small)))
def test_smith_form_divisibility(e):
    d1, d2 = weights.smith_normal_form_2x2(e)
    if d1:
        assert d2 % d1 == 0
        assert d1 * d2 == abs(weights.det2(e))


def test_circle_isotropy():
    assert weights.circle_isotropy_order([4, 6]) == 2
    assert weights.circle_isotropy_order([0, 0]) == weights.INFINITE
    assert weights.circle_isotropy_order([3, -5]) == 1


def test_csv_header():
    text = weights.to_csv([(1, 2, 3)], "admissible_triple", 3)
    assert text.splitlines() == ["# predicate=admissible_triple bound=3", "1,2,3"]


def test_oracle_coprime_is_naive():
    assert oracles.coprime(4, 6) is False
    assert oracles.coprime(0, 1) is True
    assert oracles.coprime(0, 7) is False
    assert oracles.coprime(0, 0) is False
    assert all(oracles.coprime(a, b) == (math.gcd(a, b) == 1) for a in range(-12, 13) for b in range(-12, 13)
               if (a, b) != (0, 0))
