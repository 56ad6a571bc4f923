"""Sampling and numerical certification of the moment-map level sets."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import I, calibration_phi, frame_rows, quat_mul, unit_imaginary_rotor
from .momentmaps import (
    QUAD_PAIRS,
    TRIPLE_PAIRS,
    GroupElement,
    _SP1_TENSORS,
    action_apply,
    as_qvec,
    build_constraint_system,
    killing_fields,
    residual_and_jacobian,
)


class Diverged(RuntimeError):
    def __init__(self, msg, history=()):
        super().__init__(msg)
        self.history = list(history)


class DegenerateStart(ValueError):
    pass


class AllDiverged(RuntimeError):
    pass


class ConstructionFailed(RuntimeError):
    pass


class Finding(Exception):
    """A certificate falsified on some point; carries the report."""

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class RankDeficiencyFound(Finding):
    pass


class UnexpectedFeasiblePattern(Finding):
    pass


class MissingVertexPattern(Finding):
    pass


class CalibrationDeficit(Finding):
    pass


DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
DEFAULT_RANK_RTOL = 1e-6
INFEASIBLE_THRESHOLD = 1e-3


@dataclass(frozen=True)
class LevelSetSpec:
    family: str  # "triple" | "quad" | "theta" | "stiefel" (Sp(1) equations only)
    weights: tuple
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    rank_rtol: float = DEFAULT_RANK_RTOL

    @property
    def n_quat(self) -> int:
        return 8 if self.family == "quad" else 7

    @property
    def pairs(self):
        return QUAD_PAIRS if self.family == "quad" else TRIPLE_PAIRS

    @property
    def weight_rows(self):
        if self.family == "stiefel":
            return ()
        return tuple(self.weights) if self.family == "theta" else (tuple(self.weights),)

    @property
    def n_real(self) -> int:
        return 4 * self.n_quat

    @property
    def constraint_count(self) -> int:
        return 10 + 3 * len(self.weight_rows)

    @property
    def group_dim(self) -> int:
        return 3 + len(self.weight_rows)

    @property
    def sphere_dim(self) -> int:
        return self.n_real - 1

    @property
    def expected_level_dim(self) -> int:
        return self.sphere_dim - (self.constraint_count - 1)

    @property
    def expected_quotient_dim(self) -> int:
        return self.expected_level_dim - self.group_dim

    @cached_property
    def system(self):
        return build_constraint_system(self.n_quat, self.pairs, self.weight_rows)

    def with_tolerances(self, **kw) -> "LevelSetSpec":
        d = {"family": self.family, "weights": self.weights, "tol": self.tol,
             "max_iter": self.max_iter, "rank_rtol": self.rank_rtol}
        d.update(kw)
        return LevelSetSpec(**d)

    def describe(self) -> dict:
        return {"family": self.family, "weights": _jsonable(self.weights), "tol": self.tol,
                "max_iter": self.max_iter, "rank_rtol": self.rank_rtol}


def _jsonable(w):
    if isinstance(w, (tuple, list)):
        return [_jsonable(v) for v in w]
    return int(w)


def triple_spec(p, **kw) -> LevelSetSpec:
    return LevelSetSpec("triple", tuple(int(v) for v in p), **kw)


def quad_spec(p, **kw) -> LevelSetSpec:
    return LevelSetSpec("quad", tuple(int(v) for v in p), **kw)


def theta_spec(theta, **kw) -> LevelSetSpec:
    return LevelSetSpec("theta", tuple(tuple(int(v) for v in row) for row in theta), **kw)


def stiefel_spec(**kw) -> LevelSetSpec:
    return LevelSetSpec("stiefel", (), **kw)


def make_spec(family: str, weights, **kw) -> LevelSetSpec:
    if family == "stiefel":
        return stiefel_spec(**kw)
    makers = {"triple": triple_spec, "quad": quad_spec, "theta": theta_spec}
    if family not in makers:
        raise ValueError(f"unknown family {family!r}")
    return makers[family](weights, **kw)


# -- numerical rank -----------------------------------------------------------

def rank_info(m: np.ndarray, rtol: float):
    """(rank, smallest retained singular value / largest, smallest singular value)."""
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0, 0.0, 0.0
    keep = s >= rtol * s[0]
    rank = int(keep.sum())
    return rank, float(s[rank - 1] / s[0]), float(s[-1])


# -- projection ---------------------------------------------------------------

def levenberg_marquardt(fun, x0, tol, max_iter, cols=None):
    """Damped Gauss-Newton on an underdetermined system.

    ``fun(x)`` returns (residual, jacobian).  Only the coordinates listed in
    ``cols`` move.  Returns (x, residual norm, iterations, history).
    """
    x = np.array(x0, dtype=np.float64, copy=True)
    r, jac = fun(x)
    norm = float(np.linalg.norm(r))
    history = [norm]
    lam = 1e-8
    it = 0
    while norm > tol and it < max_iter:
        it += 1
        jc = jac if cols is None else jac[:, cols]
        a = jc @ jc.T
        a[np.diag_indices_from(a)] += lam * (1.0 + np.trace(a) / a.shape[0])
        try:
            y = np.linalg.solve(a, r)
        except np.linalg.LinAlgError:
            lam *= 10.0
            continue
        step = -(jc.T @ y)
        trial = x.copy()
        if cols is None:
            trial += step
        else:
            trial[cols] += step
        rt, jt = fun(trial)
        nt = float(np.linalg.norm(rt))
        if nt < norm:
            x, r, jac, norm = trial, rt, jt, nt
            lam = max(lam * 0.1, 1e-15)
        else:
            lam *= 10.0
            if lam > 1e12:
                history.append(norm)
                break
        history.append(norm)
    return x, norm, it, history


@dataclass
class SamplePoint:
    u: np.ndarray
    residual: float
    jacobian_rank: int
    killing_rank: int
    min_sv_constraints: float
    min_sv_killing: float
    jacobian_margin: float
    killing_margin: float
    seed: int
    index: int
    iterations: int

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "index": self.index,
            "u": [float(v) for v in np.asarray(self.u).ravel()],
            "residual": self.residual,
            "jacobian_rank": self.jacobian_rank,
            "killing_rank": self.killing_rank,
            "min_sv_constraints": self.min_sv_constraints,
            "min_sv_killing": self.min_sv_killing,
            "iterations": self.iterations,
        }


def diagnose(u, spec: LevelSetSpec, residual=None, seed=0, index=0, iterations=0) -> SamplePoint:
    u = as_qvec(u)
    r, jac = residual_and_jacobian(u, spec)
    jr, jm, js = rank_info(jac, spec.rank_rtol)
    kr, km, ks = rank_info(killing_fields(u, spec.pairs, spec.weight_rows), spec.rank_rtol)
    return SamplePoint(
        u=u, residual=float(np.linalg.norm(r)) if residual is None else residual,
        jacobian_rank=jr, killing_rank=kr, min_sv_constraints=js, min_sv_killing=ks,
        jacobian_margin=jm, killing_margin=km, seed=seed, index=index, iterations=iterations)


def project_to_level_set(u0, spec: LevelSetSpec, tol=None, max_iter=None, seed=0, index=0) -> SamplePoint:
    tol = spec.tol if tol is None else tol
    max_iter = spec.max_iter if max_iter is None else max_iter
    x0 = np.asarray(u0, dtype=np.float64).ravel()
    nrm = float(np.linalg.norm(x0))
    if nrm <= 1e-8:
        raise DegenerateStart(f"|u0| = {nrm:.3g}")
    x0 = x0 / nrm
    x, norm, it, hist = levenberg_marquardt(lambda v: residual_and_jacobian(v, spec), x0, tol, max_iter)
    if norm > tol:
        raise Diverged(f"residual {norm:.3e} after {it} iterations", hist)
    return diagnose(x.reshape(-1, 4), spec, residual=norm, seed=seed, index=index, iterations=it)


def start_point(spec: LevelSetSpec, seed: int, index: int) -> np.ndarray:
    """Seeded normal start; counter-based so each index is independent of the others."""
    gen = np.random.Generator(np.random.Philox(key=(int(seed) % 2**64) + (int(index) << 64)))
    x = gen.standard_normal(spec.n_real)
    return (x / np.linalg.norm(x)).reshape(-1, 4)


@dataclass
class SampleSet:
    spec: LevelSetSpec
    seed: int
    attempted: int
    points: list = field(default_factory=list)

    @property
    def converged_fraction(self) -> float:
        return len(self.points) / self.attempted

    def to_json(self) -> dict:
        return {"spec": self.spec.describe(), "seed": self.seed, "attempted": self.attempted,
                "converged": len(self.points), "points": [p.to_json() for p in self.points]}


def _try_project(spec, seed, index):
    try:
        return project_to_level_set(start_point(spec, seed, index), spec, seed=seed, index=index)
    except Diverged:
        return None


def sample_level_set(spec: LevelSetSpec, count: int, seed: int, threads: int = 1) -> SampleSet:
    if count < 1:
        raise ValueError("count must be positive")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(lambda i: _try_project(spec, seed, i), range(count)))
    else:
        results = [_try_project(spec, seed, i) for i in range(count)]
    pts = [p for p in results if p is not None]
    if not pts:
        raise AllDiverged(f"none of {count} starts converged for {spec.family} {spec.weights}")
    return SampleSet(spec=spec, seed=seed, attempted=count, points=pts)


# -- certificates -------------------------------------------------------------

def _margins(values):
    v = np.asarray(values, dtype=float)
    return {"min": float(v.min()), "median": float(np.median(v))}


def smoothness_certificate(samples, spec: LevelSetSpec, raise_on_failure=False) -> dict:
    pts = list(samples)
    bad = [p for p in pts if p.jacobian_rank != spec.constraint_count]
    nullities = sorted({spec.n_real - p.jacobian_rank for p in pts})
    report = {
        "passed": not bad and nullities == [spec.expected_level_dim],
        "points": len(pts),
        "expected_rank": spec.constraint_count,
        "ranks": sorted({p.jacobian_rank for p in pts}),
        "nullities": nullities,
        "expected_nullity": spec.expected_level_dim,
        "margin": _margins([p.jacobian_margin for p in pts]),
        "offending": [p.to_json() for p in bad[:3]],
    }
    if raise_on_failure and not report["passed"]:
        raise RankDeficiencyFound("constraint Jacobian rank deficiency", report)
    return report


def freeness_certificate(samples, spec: LevelSetSpec, raise_on_failure=False) -> dict:
    pts = list(samples)
    bad = [p for p in pts if p.killing_rank != spec.group_dim]
    report = {
        "passed": not bad,
        "points": len(pts),
        "expected_rank": spec.group_dim,
        "ranks": sorted({p.killing_rank for p in pts}),
        "margin": _margins([p.killing_margin for p in pts]),
        "offending": [p.to_json() for p in bad[:3]],
    }
    if raise_on_failure and bad:
        raise RankDeficiencyFound("Killing-field rank deficiency", report)
    return report


def classify_strata(u, spec: LevelSetSpec, threshold: float = 1e-8) -> tuple[str, str]:
    """('S0' | 'S1', 'S2' | 'S3') by thresholding |u1| and the pair norms."""
    u = as_qvec(u)
    first = "S1" if np.linalg.norm(u[0]) > threshold else "S0"
    pair_norms = [math.hypot(np.linalg.norm(u[a]), np.linalg.norm(u[b])) for a, b in spec.pairs]
    second = "S2" if min(pair_norms) <= threshold else "S3"
    return first, second


def group_invariance_check(samples, spec: LevelSetSpec, seed: int) -> dict:
    """Apply one seeded random group element to each point and re-evaluate."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in samples:
        lam = rng.standard_normal(4)
        lam /= np.linalg.norm(lam)
        angles = tuple(rng.uniform(0.0, 2 * np.pi, len(spec.weight_rows)))
        v = action_apply(p.u, GroupElement(lam, angles), spec.pairs, spec.weight_rows)
        worst = max(worst, float(np.linalg.norm(residual_and_jacobian(v, spec)[0])))
    return {"passed": worst <= 10 * spec.tol, "worst_residual": worst, "bound": 10 * spec.tol}


# -- vertices -----------------------------------------------------------------

def all_support_patterns():
    return list(itertools.combinations(range(1, 8), 4))


def predicted_vertex_patterns():
    return [(1, a, b, c) for a in (2, 3) for b in (4, 5) for c in (6, 7)]


def vertex_witness(pattern) -> np.ndarray:
    """1/2 (1, i, j, k) placed on the four support coordinates (1-based)."""
    u = np.zeros((7, 4))
    for slot, idx in enumerate(pattern):
        u[idx - 1, slot] = 0.5
    return u


def _support_start(seed, pattern, k):
    gen = np.random.Generator(np.random.Philox(key=(int(seed) % 2**64) + ((1000 * _pattern_code(pattern) + k) << 64)))
    u = np.zeros((7, 4))
    for idx in pattern:
        u[idx - 1] = gen.standard_normal(4)
    return u / np.linalg.norm(u)


def _pattern_code(pattern) -> int:
    return sum(1 << (i - 1) for i in pattern)


def vertex_support_scan(spec: LevelSetSpec, tol=None, starts: int = 20, seed: int = 0,
                        max_iter: int = 300, raise_on_failure=False) -> dict:
    """Multi-start feasibility of each four-coordinate support.

    "feasible" means some start reached ``tol``; "infeasible" means the best
    residual stayed above the 1e-3 threshold (a numerical finding, the exact
    argument is algebraic); anything in between is "indeterminate".
    """
    if spec.family != "triple" or not 0 < spec.weights[0] < spec.weights[1] < spec.weights[2]:
        raise ValueError("vertex scan needs a triple spec with 0 < p1 < p2 < p3")
    tol = spec.tol if tol is None else tol
    fun = lambda v: residual_and_jacobian(v, spec)  # noqa: E731
    rows = []
    for pattern in all_support_patterns():
        cols = np.array([4 * (i - 1) + c for i in pattern for c in range(4)])
        best = math.inf
        for k in range(starts):
            x0 = _support_start(seed, pattern, k).ravel()
            _, norm, _, _ = levenberg_marquardt(fun, x0, tol, max_iter, cols=cols)
            best = min(best, norm)
            if best <= tol:
                break
        status = "feasible" if best <= tol else ("infeasible" if best > INFEASIBLE_THRESHOLD else "indeterminate")
        row = {"pattern": list(pattern), "status": status, "best_residual": best}
        if status == "feasible":
            w = vertex_witness(pattern)
            row["witness_residual"] = float(np.linalg.norm(residual_and_jacobian(w, spec)[0]))
        rows.append(row)
    feasible = sorted(tuple(r["pattern"]) for r in rows if r["status"] == "feasible")
    predicted = sorted(predicted_vertex_patterns())
    report = {
        "passed": feasible == predicted and all(
            r["status"] == "infeasible" for r in rows if tuple(r["pattern"]) not in predicted),
        "feasible": [list(p) for p in feasible],
        "unexpected_feasible": [list(p) for p in feasible if p not in predicted],
        "missing": [list(p) for p in predicted if p not in feasible],
        "patterns": rows,
        "starts": starts,
        "infeasible_threshold": INFEASIBLE_THRESHOLD,
        "note": "infeasibility is a multi-start numerical finding",
    }
    if raise_on_failure:
        if report["unexpected_feasible"]:
            raise UnexpectedFeasiblePattern("support pattern outside the vertex set is feasible", report)
        if report["missing"]:
            raise MissingVertexPattern("predicted vertex pattern not reached", report)
    return report


def frame_determinant_signs(samples) -> list[int]:
    """Signs of det of the 4 x 4 frame block on a vertex support, per sample."""
    out = []
    for u in samples:
        u = as_qvec(u)
        support = [n for n in range(u.shape[0]) if np.linalg.norm(u[n]) > 1e-8]
        if len(support) == 4:
            out.append(int(np.sign(np.linalg.det(u[support]))))
    return out


# -- the singular stratum for unit weights ------------------------------------

def _stratum_residual(w):
    """Reduced system for u1 = 0, u_{2a+1} = i u_{2a}; unknowns (u2, u4, u6)."""
    q = w.reshape(3, 4)
    t = _SP1_TENSORS[0]
    sym = t + t.transpose(1, 0, 2)
    r = np.empty(4)
    jac = np.zeros((4, 12))
    r[0] = 2.0 * (w @ w) - 1.0
    jac[0] = 4.0 * w
    for c in range(1, 4):
        r[c] = sum(q[a] @ t[:, :, c] @ q[a] for a in range(3))
        for a in range(3):
            jac[c, 4 * a:4 * a + 4] = sym[:, :, c] @ q[a]
    return r, jac


def embed_stratum(w) -> np.ndarray:
    q = np.asarray(w, dtype=float).reshape(3, 4)
    u = np.zeros((7, 4))
    for a in range(3):
        u[1 + 2 * a] = q[a]
        u[2 + 2 * a] = quat_mul(I, q[a])
    return u


def singular_stratum_point(seed: int, retries: int = 10) -> np.ndarray:
    """A point of the (1, 1, 1) level set fixed by a circle in Sp(1) x U(1)."""
    spec = triple_spec((1, 1, 1))
    for k in range(retries):
        gen = np.random.Generator(np.random.Philox(key=(int(seed) % 2**64) + ((7919 + k) << 64)))
        w0 = gen.standard_normal(12)
        w0 /= math.sqrt(2.0) * np.linalg.norm(w0)
        w, norm, _, _ = levenberg_marquardt(_stratum_residual, w0, 1e-14, 200)
        u = embed_stratum(w)
        if norm <= 1e-14 and np.linalg.norm(residual_and_jacobian(u, spec)[0]) <= 1e-12:
            return u
    raise ConstructionFailed(f"no singular-stratum point after {retries} attempts")


def isotropy_element(t: float) -> GroupElement:
    """(cos t + i sin t, A(t))."""
    return GroupElement(np.cos(t) * np.array([1.0, 0, 0, 0]) + np.sin(t) * I, (t,))


def isotropy_fix_check(u, angles=(0.3, 1.0, 2.5)) -> dict:
    errs = [float(np.linalg.norm(action_apply(u, isotropy_element(t), TRIPLE_PAIRS, ((1, 1, 1),)) - u))
            for t in angles]
    return {"angles": list(angles), "displacements": errs, "passed": max(errs) < 1e-10}


def aligned_pair_point(p, signs) -> np.ndarray:
    """A point with u1 = 0 and u_{2a+1} = signs[a] i u_{2a} on the level set of ``p``.

    With w_a = conj(u_{2a}) i u_{2a}, the Sp(1) and U(1) equations reduce to
    sum w_a = 0 and sum p_a signs[a] w_a = 0.  Taking w_a = k_a v with k in
    the kernel of those two rows solves them exactly.
    """
    rows = np.array([[1.0, 1.0, 1.0], [s * w for s, w in zip(signs, p)]], dtype=float)
    k = np.cross(rows[0], rows[1])
    if np.allclose(k, 0.0):
        k = np.array([1.0, 1.0, -2.0])
    if np.all(np.abs(k) < 1e-12):
        raise ConstructionFailed("no nonzero kernel vector")
    v = np.array([0.0, 0.0, 1.0])
    u = np.zeros((7, 4))
    for a in range(3):
        if k[a] == 0:
            continue
        base = math.sqrt(abs(k[a])) * unit_imaginary_rotor(np.sign(k[a]) * v)
        u[1 + 2 * a] = base
        u[2 + 2 * a] = signs[a] * quat_mul(I, base)
    return u / np.linalg.norm(u)


# -- co-associativity -----------------------------------------------------------

def complement_basis(u) -> np.ndarray:
    """Orthonormal basis (as rows) of the complement of the frame's row space in R^7."""
    f = frame_rows(u)
    q, _ = np.linalg.qr(f.T, mode="complete")
    return q[:, 4:].T


def phi_on_complement(u, conv) -> float:
    g = complement_basis(u)
    return abs(calibration_phi(g[0], g[1], g[2], conv))


def _phi_along_orbit(g, conv, ts):
    """|phi| on the complement rotated by the unit-weight circle, for each angle in ``ts``.

    The complement of a rotated frame is the rotated complement, so only the
    basis ``g`` (rows) has to be moved.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    c, s = np.cos(-ts), np.sin(-ts)
    rot = np.broadcast_to(g, (ts.size,) + g.shape).copy()
    for a, b in TRIPLE_PAIRS:
        ga, gb = g[:, a], g[:, b]
        rot[:, :, a] = c[:, None] * ga + s[:, None] * gb
        rot[:, :, b] = -s[:, None] * ga + c[:, None] * gb
    t = conv.table[1:, 1:, 1:]
    return np.abs(np.einsum("na,nb,nc,abc->n", rot[:, 0], rot[:, 1], rot[:, 2], t))


def phi_orbit_max(u, conv, grid: int = 2048) -> tuple[float, float]:
    """Maximum over the unit-weight circle orbit of |phi| on the frame complement; (value, angle)."""
    g = complement_basis(u)
    ts = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = _phi_along_orbit(g, conv, ts)
    k = int(np.argmax(vals))
    h = 2 * np.pi / grid
    a, b = ts[k] - h, ts[k] + h
    gr = (math.sqrt(5) - 1) / 2
    f = lambda t: float(_phi_along_orbit(g, conv, t)[0])  # noqa: E731
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(50):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return max(f(t), float(vals[k])), float(t)


def coassociativity_check(points, conv, tol: float = 1e-6) -> dict:
    """|phi| on the complement of each frame, pointwise and maximised over the circle orbit.

    The pointwise value is 1 exactly on co-associative frames; every point of
    the unit-weight level set is a circle translate of one, which the orbit
    maximum detects.
    """
    pointwise, aligned = [], []
    for u in points:
        pointwise.append(phi_on_complement(u, conv))
        aligned.append(phi_orbit_max(u, conv)[0])
    pw = np.array(pointwise)
    al = np.array(aligned)
    pw_dev = np.abs(pw - 1.0)
    al_dev = np.abs(al - 1.0)
    report = {
        "points": len(pw),
        "pointwise": {
            "values_min": float(pw.min()), "values_max": float(pw.max()),
            "within_tol": int((pw_dev <= tol).sum()),
            "departing_1e-3": int((pw_dev > 1e-3).sum()),
            "worst_index": int(np.argmax(pw_dev)),
        },
        "orbit_aligned": {
            "values_min": float(al.min()), "values_max": float(al.max()),
            "within_tol": int((al_dev <= tol).sum()),
            "departing_1e-3": int((al_dev > 1e-3).sum()),
        },
        "tol": tol,
    }
    report["pointwise_passed"] = bool(np.all(pw_dev <= tol))
    report["orbit_aligned_passed"] = bool(np.all(al_dev <= tol))
    return report


# -- dimensions ---------------------------------------------------------------

def dimension_report(spec: LevelSetSpec, samples=None) -> dict:
    chain_ok = (spec.expected_level_dim == spec.sphere_dim - (spec.constraint_count - 1)
                and spec.expected_quotient_dim == spec.expected_level_dim - spec.group_dim)
    expected = {"triple": (27, 15, 11), "quad": (31, 19, 15), "theta": (27, 12, 7),
                "stiefel": (27, 18, 15)}[spec.family]
    rep = {
        "ambient_sphere_dim": spec.sphere_dim,
        "constraint_count": spec.constraint_count,
        "moment_constraints": spec.constraint_count - 1,
        "expected_level_dim": spec.expected_level_dim,
        "group_dim": spec.group_dim,
        "expected_quotient_dim": spec.expected_quotient_dim,
        "chain_ok": chain_ok and (spec.sphere_dim, spec.expected_level_dim, spec.expected_quotient_dim) == expected,
    }
    if samples is not None:
        nulls = sorted({spec.n_real - p.jacobian_rank for p in samples})
        rep["observed_nullities"] = nulls
        rep["nullity_matches"] = nulls == [spec.expected_level_dim]
    return rep
