"""Exact integer predicates on weight data.

Weight data are plain tuples of Python ints (arbitrary precision, so no
overflow is possible): a triple ``(p1, p2, p3)``, a quadruple, or a 2 x 3
matrix ``((p1, p2, p3), (q1, q2, q3))``.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from functools import reduce
from typing import NamedTuple

from . import kernels

INFINITE = math.inf

WeightTriple = tuple[int, int, int]
WeightQuad = tuple[int, int, int, int]
WeightMatrix = tuple[tuple[int, int, int], tuple[int, int, int]]


class NotLocallyFree(ValueError):
    pass


class MinorTriple(NamedTuple):
    d12: int
    d13: int
    d23: int


class BoxQuad(NamedTuple):
    """Box determinants in the order (--, +-, -+, ++) of the box identity."""

    mm: int
    pm: int
    mp: int
    pp: int


BOX_LABELS = ("--", "+-", "-+", "++")


def _ints(seq, n):
    out = tuple(int(v) for v in seq)
    if len(out) != n:
        raise ValueError(f"expected {n} integers, got {len(out)}")
    return out


def as_matrix(theta) -> WeightMatrix:
    p, q = theta
    return _ints(p, 3), _ints(q, 3)


def gcd_list(values) -> int:
    return reduce(math.gcd, (abs(int(v)) for v in values), 0)


def triple_conditions(p) -> list[dict]:
    """Failed admissibility conditions of a triple, in a fixed order; empty if admissible.

    Each entry has ``kind`` ("order", "pair" or "sum"), the offending ``gcd``
    where relevant, and a readable ``reason``.
    """
    p1, p2, p3 = _ints(p, 3)
    out = []
    if not 0 < p1 < p2 < p3:
        out.append({"kind": "order", "reason": "ordering 0 < p1 < p2 < p3 fails"})
    for (a, x), (b, y) in itertools.combinations(enumerate((p1, p2, p3), 1), 2):
        g = math.gcd(x, y)
        if g != 1:
            out.append({"kind": "pair", "indices": (a, b), "gcd": g, "reason": f"gcd(p{a}, p{b}) = {g}"})
    for s2, s3 in itertools.product("-+", repeat=2):
        x = p1 - p2 if s2 == "-" else p1 + p2
        y = p1 - p3 if s3 == "-" else p1 + p3
        g = math.gcd(x, y)
        if g != 1:
            out.append({"kind": "sum", "signs": (s2, s3), "gcd": g,
                        "reason": f"gcd(p1{s2}p2, p1{s3}p3) = {g}"})
    return out


def triple_failures(p) -> list[str]:
    return [c["reason"] for c in triple_conditions(p)]


def is_admissible_triple(p) -> bool:
    return not triple_failures(p)


def normalize_triple(p) -> WeightTriple:
    """Absolute values sorted increasingly (signs only rename a pair)."""
    return tuple(sorted(abs(int(v)) for v in p))


def quad_failures(p) -> list[str]:
    q = _ints(p, 4)
    reasons = []
    if not 0 <= q[0] < q[1] < q[2] < q[3]:
        reasons.append("ordering 0 <= p1 < p2 < p3 < p4 fails")
    for trip in itertools.combinations(q, 3):
        a, b, c = trip
        g = gcd_list(trip)
        if g != 1:
            reasons.append(f"triple {trip}: gcd = {g}")
        for s2, s3 in itertools.product("-+", repeat=2):
            x = a - b if s2 == "-" else a + b
            y = a - c if s3 == "-" else a + c
            g = math.gcd(x, y)
            if g != 1:
                reasons.append(f"triple {trip}: gcd({a}{s2}{b}, {a}{s3}{c}) = {g}")
    return reasons


def is_free_quadruple(p) -> bool:
    return not quad_failures(p)


def failing_quad_triple(p):
    """First triple (lexicographic) of a quadruple violating the gcd conditions, or None."""
    for r in quad_failures(p):
        if r.startswith("triple "):
            return tuple(int(v) for v in r[len("triple ("):r.index(")")].split(","))
    return None


def minor_determinants(theta) -> MinorTriple:
    (p1, p2, p3), (q1, q2, q3) = as_matrix(theta)
    return MinorTriple(p1 * q2 - p2 * q1, p1 * q3 - p3 * q1, p2 * q3 - p3 * q2)


def box_matrices(theta):
    """The four 2 x 2 matrices [[p1 -+ p2, q1 -+ q2], [p1 -+ p3, q1 -+ q3]] in box order."""
    (p1, p2, p3), (q1, q2, q3) = as_matrix(theta)
    out = []
    for s_row1, s_row2 in ((-1, -1), (-1, 1), (1, -1), (1, 1)):
        out.append(((p1 + s_row1 * p2, q1 + s_row1 * q2), (p1 + s_row2 * p3, q1 + s_row2 * q3)))
    return out


def det2(m) -> int:
    (a, b), (c, d) = m
    return a * d - b * c


def box_determinants(theta) -> BoxQuad:
    return BoxQuad(*(det2(m) for m in box_matrices(theta)))


def boxes_from_minors(d12: int, d23: int, d13: int) -> BoxQuad:
    return BoxQuad(
        d12 + d23 - d13,
        d12 - d23 + d13,
        -d12 - d23 - d13,
        -d12 + d23 + d13,
    )


def verify_box_identity(theta) -> bool:
    m = minor_determinants(theta)
    return box_determinants(theta) == boxes_from_minors(m.d12, m.d23, m.d13)


def theta_locally_free(theta) -> tuple[bool, str]:
    d12, d13, d23 = minor_determinants(theta)
    for name, v in (("D12", d12), ("D13", d13), ("D23", d23)):
        if v == 0:
            return False, f"minor {name} vanishes"
    if d12 + d23 + d13 == 0:
        return False, "D12 + D23 + D13 = 0"
    if d12 == d13 + d23:
        return False, "D12 equals D13 + D23"
    if d13 == d12 + d23:
        return False, "D13 equals D12 + D23"
    if d23 == d12 + d13:
        return False, "D23 equals D12 + D13"
    return True, "all minors and box determinants nonzero"


def theta_smoothness_obstruction() -> list[dict]:
    """Box determinants for every sign assignment of unit minors.

    Each row records the assignment (D12, D23, D13), the four boxes and how
    many of them are +-3.  No row can have every box equal to +-1.
    """
    rows = []
    for d12, d23, d13 in itertools.product((1, -1), repeat=3):
        boxes = boxes_from_minors(d12, d23, d13)
        n3 = sum(abs(b) == 3 for b in boxes)
        rows.append({
            "minors": {"D12": d12, "D23": d23, "D13": d13},
            "boxes": dict(zip(BOX_LABELS, boxes)),
            "count_pm3": n3,
            "all_unit": all(abs(b) == 1 for b in boxes),
        })
    assert all(r["count_pm3"] >= 1 and not r["all_unit"] for r in rows)
    return rows


def circle_isotropy_order(exponents):
    """Number of unit complex tau with tau**a == 1 for all a (gcd, or infinite)."""
    g = gcd_list(exponents)
    return INFINITE if g == 0 else g


def smith_normal_form_2x2(e) -> tuple[int, int]:
    """Invariant factors (d1, d2) of an integer 2 x 2 matrix, d1 | d2, both >= 0."""
    (a, b), (c, d) = e
    d1 = gcd_list((a, b, c, d))
    if d1 == 0:
        return 0, 0
    return d1, abs(a * d - b * c) // d1


def torus_isotropy_order(e):
    """Solutions (tau, rho) on T^2 of tau^E11 rho^E12 = tau^E21 rho^E22 = 1.

    The solution group is dual to Z^2 / E^T Z^2, whose order is the product
    of the invariant factors, i.e. |det E|; infinite when det E = 0.
    """
    d1, d2 = smith_normal_form_2x2(e)
    if d1 == 0 or d2 == 0:
        return INFINITE
    return d1 * d2


def torus_isotropy_bruteforce(e) -> int:
    """Count solutions by enumerating roots of unity of order |det E|."""
    (a, b), (c, d) = e
    n = abs(a * d - b * c)
    if n == 0:
        raise ValueError("determinant zero: infinitely many solutions")
    return sum(
        (a * x + b * y) % n == 0 and (c * x + d * y) % n == 0
        for x in range(n)
        for y in range(n)
    )


def singular_group_orders(theta) -> tuple[int, int, int, int]:
    ok, reason = theta_locally_free(theta)
    if not ok:
        raise NotLocallyFree(reason)
    return tuple(abs(b) for b in box_determinants(theta))


def enumerate_admissible_triples(bound: int) -> list[WeightTriple]:
    if bound < 3:
        raise ValueError("bound must be at least 3")
    return [tuple(int(v) for v in row) for row in kernels.admissible_triples(bound)]


def enumerate_free_quads(bound: int) -> list[WeightQuad]:
    if bound < 3:
        raise ValueError("bound must be at least 3")
    return [q for q in itertools.combinations(range(0, bound + 1), 4) if is_free_quadruple(q)]


def verify_parity_obstruction(bound: int) -> dict:
    """Search 0 < p1 < p2 < p3 < p4 <= bound for quadruples with every triple admissible."""
    if bound < 4:
        raise ValueError("bound must be at least 4")
    adm = set(enumerate_admissible_triples(max(bound, 3)))
    witnesses = [
        q for q in itertools.combinations(range(1, bound + 1), 4)
        if all(t in adm for t in itertools.combinations(q, 3))
    ]
    parity_ok = all(sum(v % 2 == 0 for v in t) == 1 for t in adm)
    return {
        "bound": bound,
        "holds": not witnesses,
        "counterexamples": witnesses,
        "admissible_triples": len(adm),
        "every_admissible_triple_has_one_even_entry": parity_ok,
    }


def to_csv(rows, predicate: str, bound: int) -> str:
    buf = io.StringIO()
    buf.write(f"# predicate={predicate} bound={bound}\n")
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
