"""Quaternion and imaginary-octonion arithmetic.

Quaternions are numpy arrays whose last axis has length 4, ordered
``(w, x, y, z)`` in the basis ``1, i, j, k``.  Imaginary quaternions use the
last three components only.  Imaginary octonions are length-7 arrays in the
ordered basis ``(i, j, k, e, ie, je, ke)``; a full octonion carries a leading
real part (length 8).
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

OCT_BASIS = ("i", "j", "k", "e", "ie", "je", "ke")

# Fano lines (a, b, c) with e_a e_b = +/- e_c, 1-based in OCT_BASIS order.
# The index structure is forced by the basis names; only the signs vary.
FANO_LINES = ((1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 4, 7), (1, 6, 7), (2, 7, 5), (3, 5, 6))

CONVENTION_ENV = "SASRED_CONVENTION"
_PACKAGED_CONVENTION = Path(__file__).with_name("data") / "octonion_convention.json"


class NoConventionFound(RuntimeError):
    pass


class UncalibratedConvention(ValueError):
    pass


# -- quaternions -------------------------------------------------------------

def quat(w=0.0, x=0.0, y=0.0, z=0.0) -> np.ndarray:
    return np.array([w, x, y, z], dtype=float)


ONE = quat(1.0)
I = quat(0, 1, 0, 0)
J = quat(0, 0, 1, 0)
K = quat(0, 0, 0, 1)


def quat_mul(a, b):
    """Hamilton product (``ij = k``), broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=-1)


def quat_conj(a):
    return np.asarray(a, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def quat_norm(a):
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


def imag(a):
    """Imaginary part of a quaternion as a length-3 array."""
    return np.asarray(a, dtype=float)[..., 1:]


def from_imag(v):
    v = np.asarray(v, dtype=float)
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def commutator(a, b):
    return quat_mul(a, b) - quat_mul(b, a)


def unit_imaginary_rotor(target):
    """Unit quaternion ``q`` with ``conj(q) i q`` equal to the unit vector ``target``."""
    t = np.asarray(target, dtype=float)
    t = t / np.linalg.norm(t)
    # conj(q) i q rotates i by the inverse of q's rotation; q = conj(r) for
    # the rotor r taking i to t under r v conj(r).
    axis = np.cross([1.0, 0.0, 0.0], t)
    s = np.linalg.norm(axis)
    c = t[0]
    if s < 1e-15:
        r = ONE.copy() if c > 0 else quat(0, 0, 1, 0)
    else:
        angle = np.arctan2(s, c)
        r = np.concatenate([[np.cos(angle / 2)], np.sin(angle / 2) * axis / s])
    return quat_conj(r)


# -- octonions ----------------------------------------------------------------

@dataclass(frozen=True)
class MultiplicationConvention:
    """Sign choice for the imaginary-octonion table plus the pairing used by
    the octonionic formula for the U(1) moment map.

    ``line_signs[n]`` is the sign s in ``e_a e_b = s e_c`` for ``FANO_LINES[n]``.
    The pairing fields are only meaningful once ``calibrated`` is set:
    component ``a`` of nu equals ``nu_signs[a]`` times octonionic expression
    number ``nu_perm[a]``; ``epsilon_sign`` multiplies the cross term and
    ``epsilon_sum`` is ``"cyclic"`` (one ordered term per a) or ``"full"``
    (both orders, antisymmetrised).
    """

    line_signs: tuple[int, ...]
    nu_perm: tuple[int, int, int] = (0, 1, 2)
    nu_signs: tuple[int, int, int] = (1, 1, 1)
    epsilon_sign: int = 1
    epsilon_sum: str = "cyclic"
    calibrated: bool = False

    @property
    def table(self) -> np.ndarray:
        return _structure_tensor(self.line_signs)

    def products(self):
        """The 21 products ``e_a e_b = s e_c`` with a < b, as (a, b, c, s), 1-based."""
        t = self.table
        out = []
        for a, b in itertools.combinations(range(1, 8), 2):
            c = int(np.flatnonzero(t[a, b])[0])
            out.append((a, b, c, int(t[a, b, c])))
        return out

    def to_json(self) -> dict:
        return {
            "basis": list(OCT_BASIS),
            "products": [
                {"a": OCT_BASIS[a - 1], "b": OCT_BASIS[b - 1], "c": OCT_BASIS[c - 1], "sign": s}
                for a, b, c, s in self.products()
            ],
            "nu_pairing": {"perm": list(self.nu_perm), "signs": list(self.nu_signs)},
            "epsilon_sign": self.epsilon_sign,
            "epsilon_sum": self.epsilon_sum,
            "calibrated": self.calibrated,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MultiplicationConvention":
        index = {name: n + 1 for n, name in enumerate(OCT_BASIS)}
        prods = {}
        for p in doc["products"]:
            prods[(index[p["a"]], index[p["b"]])] = (index[p["c"]], int(p["sign"]))
        if len(prods) != 21:
            raise ValueError("convention file must list 21 products")
        signs = []
        for a, b, c in FANO_LINES:
            key = (min(a, b), max(a, b))
            got_c, s = prods[key]
            if got_c != c:
                raise ValueError(f"product {OCT_BASIS[a-1]}*{OCT_BASIS[b-1]} does not land on {OCT_BASIS[c-1]}")
            signs.append(s if a < b else -s)
        conv = cls(
            line_signs=tuple(signs),
            nu_perm=tuple(doc["nu_pairing"]["perm"]),
            nu_signs=tuple(doc["nu_pairing"]["signs"]),
            epsilon_sign=int(doc["epsilon_sign"]),
            epsilon_sum=doc["epsilon_sum"],
            calibrated=bool(doc.get("calibrated", False)),
        )
        if conv.products() != sorted((a, b, *prods[(a, b)]) for a, b in prods):
            raise ValueError("convention file is not a consistent octonion table")
        if not satisfies_norm_composition(conv):
            raise ValueError("convention file violates norm composition")
        return conv


def _structure_tensor(line_signs) -> np.ndarray:
    t = np.zeros((8, 8, 8))
    t[0, 0, 0] = 1.0
    for a in range(1, 8):
        t[0, a, a] = t[a, 0, a] = 1.0
        t[a, a, 0] = -1.0
    for (a, b, c), s in zip(FANO_LINES, line_signs):
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            t[x, y, z] = s
            t[y, x, z] = -s
    return t


def oct_mul(a, b, conv: MultiplicationConvention) -> np.ndarray:
    """Product of two imaginary octonions; returns a length-8 full octonion."""
    a8 = np.concatenate([[0.0], np.asarray(a, dtype=float)])
    b8 = np.concatenate([[0.0], np.asarray(b, dtype=float)])
    return np.einsum("a,b,abc->c", a8, b8, conv.table)


def calibration_phi(a, b, c, conv: MultiplicationConvention) -> float:
    """Associative 3-form <ab, c>."""
    return float(oct_mul(a, b, conv)[1:] @ np.asarray(c, dtype=float))


def satisfies_norm_composition(conv: MultiplicationConvention, trials: int = 64, seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    t = conv.table
    x = rng.standard_normal((trials, 8))
    y = rng.standard_normal((trials, 8))
    xy = np.einsum("na,nb,abc->nc", x, y, t)
    lhs = np.linalg.norm(xy, axis=1)
    rhs = np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1)
    return bool(np.all(np.abs(lhs - rhs) <= 1e-12 * rhs))


def candidate_tables():
    """All sign choices with ij = k that compose norms, in lexicographic order."""
    out = []
    for rest in itertools.product((1, -1), repeat=6):
        conv = MultiplicationConvention(line_signs=(1,) + rest)
        if satisfies_norm_composition(conv):
            out.append(conv)
    return out


def frame_rows(u) -> np.ndarray:
    """The 4 x n real matrix whose row a holds the a-th components of u."""
    return np.asarray(u, dtype=float).reshape(-1, 4).T


def octonionic_terms(u, conv: MultiplicationConvention) -> np.ndarray:
    """The three raw octonionic expressions 2<f0 f^a +- eps f^b f^c, i>, before pairing."""
    f = frame_rows(u)
    if f.shape[1] != 7:
        raise ValueError("octonionic formula needs seven quaternionic coordinates")
    t = conv.table
    f8 = np.concatenate([np.zeros((4, 1)), f], axis=1)

    def i_part(x, y):
        # <xy, i>: only the coefficient of basis element 1 (= i) is needed
        return x @ t[:, :, 1] @ y

    out = np.empty(3)
    for a, (b, c) in zip((1, 2, 3), ((2, 3), (3, 1), (1, 2))):
        cross = i_part(f8[b], f8[c])
        if conv.epsilon_sum == "full":
            cross = cross - i_part(f8[c], f8[b])
        out[a - 1] = 2.0 * (i_part(f8[0], f8[a]) + conv.epsilon_sign * cross)
    return out


def apply_pairing(terms, conv: MultiplicationConvention) -> np.ndarray:
    return np.array([conv.nu_signs[a] * terms[conv.nu_perm[a]] for a in range(3)])


def calibrate_convention(samples: int = 1000, seed: int = 1, reference=None) -> MultiplicationConvention:
    """Search the finite set of conventions for one reproducing the quaternionic
    U(1) moment map with unit weights.

    ``reference`` maps a (7, 4) coordinate array to the imaginary part of the
    target moment map; it defaults to the weighted moment map with p = (1, 1, 1).
    """
    if samples < 100:
        raise ValueError("calibration needs at least 100 samples")
    if reference is None:
        from .momentmaps import moment_u1_weighted

        def reference(u):
            return imag(moment_u1_weighted(u, (1, 1, 1)))

    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((samples, 7, 4))
    pts /= np.linalg.norm(pts.reshape(samples, -1), axis=1)[:, None, None]
    target = np.array([reference(u) for u in pts])

    # screen on a handful of points, confirm on all of them
    for table in candidate_tables():
        for eps_sum in ("cyclic", "full"):
            for eps in (1, -1):
                base = MultiplicationConvention(table.line_signs, epsilon_sign=eps, epsilon_sum=eps_sum)
                raw = np.array([octonionic_terms(u, base) for u in pts[:8]])
                for perm in itertools.permutations(range(3)):
                    for signs in itertools.product((1, -1), repeat=3):
                        conv = MultiplicationConvention(
                            table.line_signs, perm, signs, eps, eps_sum, calibrated=True)
                        got = np.array([apply_pairing(r, conv) for r in raw])
                        if np.max(np.abs(got - target[:8])) > 1e-10:
                            continue
                        full = np.array([apply_pairing(octonionic_terms(u, conv), conv) for u in pts])
                        if np.max(np.abs(full - target)) <= 1e-10:
                            return conv
    raise NoConventionFound(
        "no octonion sign convention reproduces the U(1) moment map; "
        "check oct_mul and the octonionic formula")


def save_convention(conv: MultiplicationConvention, path) -> None:
    Path(path).write_text(json.dumps(conv.to_json(), indent=2) + "\n")


def load_convention(path=None) -> MultiplicationConvention:
    """Load the frozen convention; ``$SASRED_CONVENTION`` overrides the packaged file."""
    if path is None:
        path = os.environ.get(CONVENTION_ENV) or _PACKAGED_CONVENTION
    return MultiplicationConvention.from_json(json.loads(Path(path).read_text()))
