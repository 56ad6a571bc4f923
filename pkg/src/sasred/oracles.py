"""Brute-force reference predicates, written without math.gcd or the box identity.

They exist to cross-check ``sasred.weights`` and are deliberately naive.
"""
from __future__ import annotations

import itertools


def coprime(*values) -> bool:
    """No integer d >= 2 divides every value (all-zero lists are not coprime)."""
    m = max(abs(v) for v in values)
    if m == 0:
        return False
    return not any(all(v % d == 0 for v in values) for d in range(2, m + 1))


def admissible_triple(p) -> bool:
    p1, p2, p3 = p
    if not (p1 > 0 and p2 > p1 and p3 > p2):
        return False
    if not (coprime(p1, p2) and coprime(p1, p3) and coprime(p2, p3)):
        return False
    return all(coprime(p1 + s * p2, p1 + t * p3) for s in (1, -1) for t in (1, -1))


def admissible_triples(bound: int):
    return [t for t in itertools.combinations(range(1, bound + 1), 3) if admissible_triple(t)]


def free_quadruple(p) -> bool:
    if not (0 <= p[0] < p[1] < p[2] < p[3]):
        return False
    for a, b, c in itertools.combinations(p, 3):
        if not coprime(a, b, c):
            return False
        if not all(coprime(a + s * b, a + t * c) for s in (1, -1) for t in (1, -1)):
            return False
    return True


def det2(a, b, c, d) -> int:
    return a * d - b * c


def boxes_direct(theta):
    """Box determinants straight from the 2 x 2 matrices of column sums and differences."""
    (p1, p2, p3), (q1, q2, q3) = theta
    out = []
    for s2, s3 in ((-1, -1), (-1, 1), (1, -1), (1, 1)):
        out.append(det2(p1 + s2 * p2, q1 + s2 * q2, p1 + s3 * p3, q1 + s3 * q3))
    return tuple(out)

