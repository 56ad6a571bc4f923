import numpy as np
import pytest

from sasred import _pykernels, kernels, levelset
from sasred.algebra import imag, quat_mul
from sasred.momentmaps import (
    GroupElement, NonUnitLambda, DimensionMismatch, QUAD_PAIRS, TRIPLE_PAIRS, action_apply, as_qvec,
    constraint_residual, constraint_residual_direct, killing_fields, moment_sp1, moment_torus,
    moment_u1_quad, moment_u1_weighted, quad_vertex_point, residual_and_jacobian, vertex_point,
)

SPECS = [
    levelset.triple_spec((1, 2, 3)),
    levelset.triple_spec((1, 1, 1)),
    levelset.quad_spec((0, 1, 2, 3)),
    levelset.theta_spec(((1, 0, 1), (0, 1, 1))),
    levelset.stiefel_spec(),
]


def unit_quat(rng):
    q = rng.standard_normal(4)
    return q / np.linalg.norm(q)


def test_vertex_point_values():
    u = vertex_point()
    assert np.isclose(np.sum(u * u), 1.0)
    for m in moment_sp1(u):
        assert np.allclose(m, 0)
    assert np.allclose(moment_u1_weighted(u, (1, 2, 3)), 0)
    q = quad_vertex_point()
    assert np.allclose(moment_u1_quad(q, (0, 1, 2, 3)), 0)


def test_single_pair_moment_value():
    # u2 = 1, u3 = i: conj(1) i - conj(i) 1 = 2i
    u = np.zeros((7, 4))
    u[1, 0] = 1.0
    u[2, 1] = 1.0
    assert np.allclose(moment_u1_weighted(u, (1, 0, 0)), [0, 2, 0, 0])
    assert np.allclose(moment_u1_weighted(u, (5, 0, 0)), [0, 10, 0, 0])


def test_moment_maps_are_imaginary(rng):
    u = rng.standard_normal((7, 4))
    for m in moment_sp1(u) + moment_torus(u, ((1, 0, 1), (0, 1, 1))):
        assert abs(m[0]) < 1e-12


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        as_qvec(np.zeros((6, 4)))
    with pytest.raises(DimensionMismatch):
        moment_u1_quad(np.zeros((7, 4)), (0, 1, 2, 3))


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family}{s.weights}")
def test_jacobian_matches_finite_differences(spec, rng):
    x = rng.standard_normal(spec.n_real)
    r, jac = residual_and_jacobian(x, spec)
    h = 1e-6
    fd = np.empty_like(jac)
    for n in range(spec.n_real):
        e = np.zeros(spec.n_real)
        e[n] = h
        fd[:, n] = (constraint_residual(x + e, spec) - constraint_residual(x - e, spec)) / (2 * h)
    assert np.allclose(jac, fd, atol=1e-7)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family}{s.weights}")
def test_sparse_residual_matches_quaternion_formulas(spec, rng):
    x = rng.standard_normal(spec.n_real)
    assert np.allclose(constraint_residual(x, spec), constraint_residual_direct(x, spec), atol=1e-12)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family}{s.weights}")
def test_backends_agree(spec, rng):
    s = spec.system
    x = rng.standard_normal(spec.n_real)
    r1, j1 = kernels.residual_jacobian(x, s.rows, s.ia, s.ib, s.coef, s.const, s.n_rows)
    r2, j2 = _pykernels.residual_jacobian(x, s.rows, s.ia, s.ib, s.coef, s.const, s.n_rows)
    assert np.allclose(r1, r2, atol=1e-13)
    assert np.allclose(j1, j2, atol=1e-13)


def test_enumeration_backends_agree():
    assert [tuple(r) for r in kernels.admissible_triples(25)] == [tuple(r) for r in _pykernels.admissible_triples(25)]


@pytest.mark.parametrize("spec", SPECS[:4], ids=lambda s: f"{s.family}{s.weights}")
def test_group_action_preserves_moment_equations(spec, rng):
    x = rng.standard_normal((spec.n_quat, 4))
    g = GroupElement(unit_quat(rng), tuple(rng.uniform(0, 2 * np.pi, len(spec.weight_rows))))
    y = action_apply(x, g, spec.pairs, spec.weight_rows)
    # norm and abelian moment rows are invariant; the Sp(1) rows rotate by lam
    r0, r1 = constraint_residual(x, spec), constraint_residual(y, spec)
    assert np.isclose(r0[0], r1[0])
    assert np.allclose(r0[10:], r1[10:], atol=1e-12)
    assert np.isclose(np.linalg.norm(r0[1:10]), np.linalg.norm(r1[1:10]))


def test_sp1_moment_equivariance(rng):
    # mu_e(lam u) = mu_{conj(lam) e lam}(u), and mu is linear in e
    u = rng.standard_normal((7, 4))
    lam = unit_quat(rng)
    lamc = lam * np.array([1, -1, -1, -1])
    before = np.array(moment_sp1(u))
    after = moment_sp1(quat_mul(lam, u))
    for e_idx, e in enumerate(np.eye(4)[1:]):
        coeffs = imag(quat_mul(lamc, quat_mul(e, lam)))
        assert np.allclose(after[e_idx], coeffs @ before, atol=1e-12)


def test_killing_fields_are_derivatives_of_action(rng):
    spec = levelset.theta_spec(((1, 0, 1), (0, 1, 1)))
    u = rng.standard_normal((7, 4))
    kf = killing_fields(u, spec.pairs, spec.weight_rows)
    h = 1e-6
    for r in range(2):
        ang = [0.0, 0.0]
        ang[r] = h
        plus = action_apply(u, GroupElement(np.array([1.0, 0, 0, 0]), tuple(ang)), spec.pairs, spec.weight_rows)
        ang[r] = -h
        minus = action_apply(u, GroupElement(np.array([1.0, 0, 0, 0]), tuple(ang)), spec.pairs, spec.weight_rows)
        assert np.allclose((plus - minus).ravel() / (2 * h), kf[3 + r], atol=1e-7)
    for e_idx in range(3):
        lam = np.zeros(4)
        lam[0] = np.cos(h)
        lam[1 + e_idx] = np.sin(h)
        plus = action_apply(u, GroupElement(lam, (0.0, 0.0)), spec.pairs, spec.weight_rows)
        assert np.allclose((plus - u).ravel() / h, kf[e_idx], atol=1e-5)


def test_killing_fields_tangent_to_level_set(rng):
    spec = levelset.triple_spec((1, 2, 3))
    u = levelset.project_to_level_set(rng.standard_normal((7, 4)), spec).u
    jac = residual_and_jacobian(u, spec)[1]
    assert np.allclose(jac @ killing_fields(u, spec.pairs, spec.weight_rows).T, 0, atol=1e-10)


def test_non_unit_lambda_rejected():
    with pytest.raises(NonUnitLambda):
        action_apply(vertex_point(), GroupElement(np.array([2.0, 0, 0, 0]), (0.0,)), TRIPLE_PAIRS, [(1, 2, 3)])


def test_pair_constants():
    assert TRIPLE_PAIRS == ((1, 2), (3, 4), (5, 6))
    assert QUAD_PAIRS == ((0, 1), (2, 3), (4, 5), (6, 7))
