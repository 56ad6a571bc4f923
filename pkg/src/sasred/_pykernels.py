"""Pure-Python/numpy kernels, used when the compiled extension is absent."""
from math import gcd

import numpy as np


def residual_jacobian(x, rows, ia, ib, coef, const, nrows):
    """Evaluate r[m] = sum coef * x[ia] * x[ib] - const[m] and its Jacobian."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    xa = x[ia]
    xb = x[ib]
    res = np.bincount(rows, weights=coef * xa * xb, minlength=nrows) - const
    jac = np.zeros(nrows * n)
    np.add.at(jac, rows * n + ia, coef * xb)
    np.add.at(jac, rows * n + ib, coef * xa)
    return res, jac.reshape(nrows, n)


def _admissible(p1, p2, p3):
    return (
        0 < p1 < p2 < p3
        and gcd(p1, p2) == 1 and gcd(p1, p3) == 1 and gcd(p2, p3) == 1
        and gcd(p1 - p2, p1 - p3) == 1 and gcd(p1 - p2, p1 + p3) == 1
        and gcd(p1 + p2, p1 - p3) == 1 and gcd(p1 + p2, p1 + p3) == 1
    )


def admissible_triples(bound):
    out = [
        (p1, p2, p3)
        for p1 in range(1, bound + 1)
        for p2 in range(p1 + 1, bound + 1)
        for p3 in range(p2 + 1, bound + 1)
        if _admissible(p1, p2, p3)
    ]
    return np.array(out, dtype=np.int64).reshape(-1, 3)
