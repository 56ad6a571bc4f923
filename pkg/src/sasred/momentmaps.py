"""Moment maps, the group action and its infinitesimal generators.

A point ``u`` of H^n is a ``(n, 4)`` array (one quaternion per row); its
real coordinates are the same array flattened coordinate-major,
``(u1w, u1x, u1y, u1z, u2w, ...)``.

The circle (or 2-torus) acts by the inverse of the block rotation, so a group
element ``(lam, t)`` sends ``u`` to ``lam * f(t)^-1 u``.  With this choice the
fixed-point equation of a pair reads ``f(t) u = lam u`` and the isotropy
element ``(cos t + rho sin t, A(t))`` fixes the set ``u_{2a+1} = rho u_{2a}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import I, J, K, apply_pairing, imag, octonionic_terms, quat_conj, quat_mul


class DimensionMismatch(ValueError):
    pass


class NonUnitLambda(ValueError):
    pass


# coordinate pairs, 0-based
TRIPLE_PAIRS = ((1, 2), (3, 4), (5, 6))
QUAD_PAIRS = ((0, 1), (2, 3), (4, 5), (6, 7))


def as_qvec(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        u = u.reshape(-1, 4)
    if u.ndim != 2 or u.shape[1] != 4 or u.shape[0] not in (7, 8):
        raise DimensionMismatch(f"expected 7 or 8 quaternions, got shape {u.shape}")
    return u


def vertex_point() -> np.ndarray:
    """1/2 (1, i, 0, j, 0, k, 0), a point of every triple level set."""
    u = np.zeros((7, 4))
    u[0, 0] = u[1, 1] = u[3, 2] = u[5, 3] = 0.5
    return u


def quad_vertex_point() -> np.ndarray:
    """1/2 (1, 0, i, 0, j, 0, k, 0)."""
    u = np.zeros((8, 4))
    u[0, 0] = u[2, 1] = u[4, 2] = u[6, 3] = 0.5
    return u


def moment_sp1(u):
    """The three Sp(1) moment maps sum conj(u_a) e u_a for e = i, j, k."""
    u = as_qvec(u)
    ubar = quat_conj(u)
    return tuple(quat_mul(ubar, quat_mul(e, u)).sum(axis=0) for e in (I, J, K))


def pair_term(u, a: int, b: int):
    """conj(u_a) u_b - conj(u_b) u_a (purely imaginary)."""
    x = quat_mul(quat_conj(u[a]), u[b])
    return x - quat_conj(x)


def _abelian_moment(u, pairs, weights):
    total = np.zeros(4)
    for (a, b), w in zip(pairs, weights):
        if w:
            total = total + w * pair_term(u, a, b)
    return total


def moment_u1_weighted(u, p):
    """Weighted U(1) moment map on H^7, pairs (u2, u3), (u4, u5), (u6, u7)."""
    u = as_qvec(u)
    if u.shape[0] != 7:
        raise DimensionMismatch("triple moment map needs seven quaternions")
    return _abelian_moment(u, TRIPLE_PAIRS, p)


def moment_torus(u, theta):
    """The two rows of the T^2 moment map for the 2 x 3 weight matrix ``theta``."""
    return moment_u1_weighted(u, theta[0]), moment_u1_weighted(u, theta[1])


def moment_u1_quad(u, p):
    """Weighted U(1) moment map on H^8, pairs (u1, u2), ..., (u7, u8)."""
    u = as_qvec(u)
    if u.shape[0] != 8:
        raise DimensionMismatch("quad moment map needs eight quaternions")
    return _abelian_moment(u, QUAD_PAIRS, p)


def nu_octonionic(u, conv):
    """The unit-weight U(1) moment map evaluated through octonion products."""
    if not conv.calibrated:
        from .algebra import UncalibratedConvention
        raise UncalibratedConvention("convention has no calibrated moment-map pairing")
    u = as_qvec(u)
    return np.concatenate([[0.0], apply_pairing(octonionic_terms(u, conv), conv)])


def rotate_pairs(u, pairs, angles):
    """Apply A(angle) to each coordinate pair; A(t) = [[cos, sin], [-sin, cos]]."""
    out = np.array(u, dtype=float, copy=True)
    for (a, b), th in zip(pairs, angles):
        c, s = np.cos(th), np.sin(th)
        ua, ub = out[a].copy(), out[b].copy()
        out[a] = c * ua + s * ub
        out[b] = -s * ua + c * ub
    return out


@dataclass(frozen=True)
class GroupElement:
    """``lam`` a unit quaternion; ``angles`` one circle angle per abelian factor."""

    lam: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))
    angles: tuple = (0.0,)


def action_apply(u, g: GroupElement, pairs, weight_rows):
    """Send u to lam * f(angles)^-1 u.

    ``weight_rows`` is a sequence of weight vectors, one per circle factor;
    pair n is rotated by sum_r weight_rows[r][n] * angles[r].
    """
    lam = np.asarray(g.lam, dtype=float)
    if abs(np.linalg.norm(lam) - 1.0) > 1e-9:
        raise NonUnitLambda(f"|lambda| = {np.linalg.norm(lam)!r}")
    u = as_qvec(u)
    if len(g.angles) != len(weight_rows):
        raise ValueError("one angle per circle factor required")
    angles = [-sum(w[n] * t for w, t in zip(weight_rows, g.angles)) for n in range(len(pairs))]
    return quat_mul(lam, rotate_pairs(u, pairs, angles))


def killing_fields(u, pairs, weight_rows) -> np.ndarray:
    """Infinitesimal generators at u as rows of a (3 + r, 4n) real matrix.

    Rows 0-2 are left multiplication by i, j, k; row 3 + r is the derivative
    of the r-th circle factor at the identity.
    """
    u = as_qvec(u)
    rows = [quat_mul(e, u).ravel() for e in (I, J, K)]
    for w in weight_rows:
        x = np.zeros_like(u)
        for (a, b), wn in zip(pairs, w):
            # d/dt A(-wn t) (ua, ub) at t = 0
            x[a] = -wn * u[b]
            x[b] = wn * u[a]
        rows.append(x.ravel())
    return np.array(rows)


def imag_parts(*qs):
    return np.concatenate([imag(q) for q in qs])


# -- constraint system ---------------------------------------------------------
#
# Every constraint is a real quadratic form in the flattened coordinates, so it
# is stored as triplets (row, a, b, coef) meaning r[row] += coef * x[a] * x[b].

_BASIS = np.eye(4)
# _SP1_TENSORS[e][m, n, c] = (conj(e_m) e e_n)_c for e = i, j, k
_SP1_TENSORS = [
    np.array([[quat_mul(quat_conj(_BASIS[m]), quat_mul(e, _BASIS[n])) for n in range(4)] for m in range(4)])
    for e in (I, J, K)
]
# _PAIR_TENSOR[m, n, c] = (conj(e_m) e_n)_c
_PAIR_TENSOR = np.array([[quat_mul(quat_conj(_BASIS[m]), _BASIS[n]) for n in range(4)] for m in range(4)])


@dataclass(frozen=True)
class ConstraintSystem:
    n_real: int
    n_rows: int
    rows: np.ndarray
    ia: np.ndarray
    ib: np.ndarray
    coef: np.ndarray
    const: np.ndarray


def build_constraint_system(n_quat: int, pairs, weight_rows) -> ConstraintSystem:
    """Rows: sphere, mu_i (3), mu_j (3), mu_k (3), then 3 per abelian factor."""
    acc: dict[tuple[int, int, int], float] = {}

    def add(row, a, b, c):
        if c == 0:
            return
        if a > b:
            a, b = b, a
        acc[(row, a, b)] = acc.get((row, a, b), 0.0) + c

    for n in range(4 * n_quat):
        add(0, n, n, 1.0)
    for e_idx, tensor in enumerate(_SP1_TENSORS):
        for alpha in range(n_quat):
            for m in range(4):
                for n in range(4):
                    for c in range(1, 4):
                        add(1 + 3 * e_idx + c - 1, 4 * alpha + m, 4 * alpha + n, tensor[m, n, c])
    for r, weights in enumerate(weight_rows):
        for (a, b), w in zip(pairs, weights):
            if not w:
                continue
            for m in range(4):
                for n in range(4):
                    for c in range(1, 4):
                        v = _PAIR_TENSOR[m, n, c]
                        # conj(u_a) u_b - conj(u_b) u_a
                        add(10 + 3 * r + c - 1, 4 * a + m, 4 * b + n, w * v)
                        add(10 + 3 * r + c - 1, 4 * b + m, 4 * a + n, -w * v)
    keys = sorted(k for k, v in acc.items() if v != 0.0)
    n_rows = 10 + 3 * len(weight_rows)
    const = np.zeros(n_rows)
    const[0] = 1.0
    return ConstraintSystem(
        n_real=4 * n_quat,
        n_rows=n_rows,
        rows=np.array([k[0] for k in keys], dtype=np.int64),
        ia=np.array([k[1] for k in keys], dtype=np.int64),
        ib=np.array([k[2] for k in keys], dtype=np.int64),
        coef=np.array([acc[k] for k in keys], dtype=np.float64),
        const=const,
    )


def _system_for(spec) -> ConstraintSystem:
    return spec.system


def _flat(u, spec) -> np.ndarray:
    x = np.ascontiguousarray(np.asarray(u, dtype=np.float64).ravel())
    if x.shape[0] != 4 * spec.n_quat:
        raise DimensionMismatch(f"point has {x.shape[0]} real coordinates, spec needs {4 * spec.n_quat}")
    return x


def residual_and_jacobian(u, spec):
    from .kernels import residual_jacobian

    s = _system_for(spec)
    x = _flat(u, spec)
    return residual_jacobian(x, s.rows, s.ia, s.ib, s.coef, s.const, s.n_rows)


def constraint_residual(u, spec) -> np.ndarray:
    """(|u|^2 - 1, mu_i, mu_j, mu_k imaginary parts, abelian moment map rows)."""
    return residual_and_jacobian(u, spec)[0]


def constraint_jacobian(u, spec) -> np.ndarray:
    return residual_and_jacobian(u, spec)[1]


def constraint_residual_direct(u, spec) -> np.ndarray:
    """Same vector as ``constraint_residual`` from the quaternion formulas."""
    x = _flat(u, spec)
    q = x.reshape(-1, 4)
    parts = [np.array([x @ x - 1.0])]
    parts += [imag(m) for m in moment_sp1(q)]
    parts += [imag(_abelian_moment(q, spec.pairs, w)) for w in spec.weight_rows]
    return np.concatenate(parts)
