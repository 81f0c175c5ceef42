"""Triality triples and the symmetry actions on hermitian triples.

The group behind the twisted eigenvalue problem is the copy of Spin7 made
of pairs (T1, T2) of orthogonal 8x8 matrices with T1(x) T2(y) = T1(xy) for
all x, y; projecting to T2 double-covers the SO7 stabilizing the unit.
Lifts are computed by linear intertwiner systems: the one-dimensional
solution space makes the double cover concrete, and the normalization
requires a square root which over F_p may fail (a retry signal, not an
error).  Three actions on hermitian triples are provided: the twisted
Spin7 action (T2 on c, T1 on a, the conjugation twist of T1 on b), the
plain SO7 action entrywise, and transpose-congruence by 3x3 scalar
matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import cayley, linalg
from .cayley import AlgebraElement
from .coeffs import ComplexField
from .jordan import HermitianTriple

LIFT_TOL = 1e-10


class LiftError(RuntimeError):
    """The intertwiner system did not produce a usable companion."""


class NonResidueError(LiftError):
    """Normalization needs a square root that F_p lacks; retry with new input."""


def apply_matrix(ring, m: np.ndarray, x: AlgebraElement) -> AlgebraElement:
    vec = np.array(x.coords, dtype=m.dtype if m.dtype != object else object)
    out = linalg.matmul(ring, m, vec)
    return AlgebraElement(ring, x.level, tuple(out.tolist()))


def _column_element(ring, m: np.ndarray, j: int) -> AlgebraElement:
    return AlgebraElement(ring, 3, tuple(m[:, j].tolist()))


def triality_defect(ring, t1: np.ndarray, t2: np.ndarray):
    """Worst violation of T1(e_i) T2(e_j) = T1(e_i e_j) over all 64 pairs.

    Returns an exact integer count of failing pairs over a field, a float
    magnitude over the complex numbers.
    """
    tab = cayley.mult_table(3)
    approx = isinstance(ring, ComplexField)
    worst = 0.0 if approx else 0
    cols1 = [_column_element(ring, t1, j) for j in range(8)]
    cols2 = [_column_element(ring, t2, j) for j in range(8)]
    for i in range(8):
        for j in range(8):
            lhs = cols1[i] * cols2[j]
            s, k = tab[i][j]
            rhs = cols1[k] if s > 0 else -cols1[k]
            if approx:
                worst = max(worst, max(abs(p - q) for p, q in zip(lhs.coords, rhs.coords)))
            else:
                if lhs.coords != rhs.coords:
                    worst += 1
    return worst


@dataclass(frozen=True)
class TrialityTriple:
    """A pair (T1, T2) with T1(x)T2(y) = T1(xy); encodes (T1, T2, T1)."""

    ring: object
    t1: np.ndarray
    t2: np.ndarray

    @classmethod
    def identity(cls, ring) -> "TrialityTriple":
        return cls(ring, linalg.eye(ring, 8), linalg.eye(ring, 8))

    def defect(self):
        return triality_defect(self.ring, self.t1, self.t2)


def _canonical_sign(ring, m: np.ndarray) -> np.ndarray:
    """Deterministic sign for the two lifts: first significant entry made
    a least residue (field) or of positive real part (complex)."""
    if isinstance(ring, ComplexField):
        flat = m.ravel()
        scale = float(np.max(np.abs(flat)))
        for v in flat:
            if abs(v) > 1e-6 * scale:
                if v.real < 0 or (abs(v.real) <= 1e-12 * scale and v.imag < 0):
                    return -m
                return m
        return m
    p = ring.p
    for v in m.ravel().tolist():
        if v % p:
            return (-m) % p if v % p > p - v % p else m % p
    return m


def _normalize_orthogonal(ring, x: np.ndarray, what: str) -> np.ndarray:
    """Rescale an intertwiner solution X (with X^T X scalar) to orthogonality."""
    gram = linalg.matmul(ring, x.T, x)
    c = gram[0, 0]
    if isinstance(ring, ComplexField):
        scale = float(np.max(np.abs(gram)))
        if abs(c) <= 1e-12 * max(scale, 1e-300):
            raise LiftError(f"{what}: degenerate normalization scalar")
        if np.max(np.abs(gram - c * np.eye(8))) > 1e-8 * scale:
            raise LiftError(f"{what}: solution is not conformal")
        return _canonical_sign(ring, x / ring.sqrt(c))
    p = ring.p
    if c == 0 or np.any((gram - c * linalg.eye(ring, 8)) % p):
        raise LiftError(f"{what}: solution is not conformal")
    r = ring.sqrt(int(c))
    if r is None:
        raise NonResidueError(f"{what}: normalization scalar is a non-residue mod {p}")
    return _canonical_sign(ring, (x * pow(r, -1, p)) % p)


def lift_right_companion(ring, t2: np.ndarray, tol: float = LIFT_TOL) -> TrialityTriple:
    """Lift T2 in SO7 (fixing e_1) to the triality pair (T1, T2).

    T1 spans the solutions of T1 R_{e_j} = R_{T2(e_j)} T1; the space must
    be one-dimensional, which certifies T2 lies in the SO7 image.
    """
    pairs = []
    for j in range(8):
        pj = cayley.right_mult_matrix(cayley.basis(ring, 3, j))
        qj = cayley.right_mult_matrix(_column_element(ring, t2, j))
        pairs.append((pj, qj))
    sols = linalg.solve_intertwiner(ring, pairs, tol=1e-9 if isinstance(ring, ComplexField) else None)
    if len(sols) != 1:
        raise LiftError(f"right companion: solution dimension {len(sols)}, "
                        "T2 is not in the SO7 image")
    t1 = _normalize_orthogonal(ring, sols[0], "right companion")
    if not isinstance(ring, ComplexField):
        t2 = t2 % ring.p
    triple = TrialityTriple(ring, t1, t2)
    d = triple.defect()
    if (isinstance(ring, ComplexField) and d > tol) or (not isinstance(ring, ComplexField) and d):
        raise LiftError(f"right companion: defect {d} after normalization")
    return triple


def fast_right_companion(ring, t2: np.ndarray) -> np.ndarray:
    """The right-companion lift through its first column.

    Setting x = e1 in the triality identity gives T1 = L_u T2 with
    u = T1(e1); u then solves the linear system
    [R_{T2(e_i e_j)} - R_{T2(e_j)} R_{T2(e_i)}] u = 0 over all basis
    pairs, whose solution space is the same one-dimensional double-cover
    fiber as the full intertwiner system, at an 8-unknown cost.  Used in
    optimization inner loops; agrees with lift_right_companion up to the
    shared sign canonicalization.
    """
    tab = cayley.mult_table(3)
    if isinstance(ring, ComplexField):
        stack = cayley.right_basis_matrices(3).astype(np.complex128)
        rbyc = np.einsum("ij,ikl->jkl", t2.astype(np.complex128), stack)
        sgn = np.array([[tab[i][j][0] for j in range(8)] for i in range(8)])
        idx = np.array([[tab[i][j][1] for j in range(8)] for i in range(8)])
        targets = sgn[:, :, None, None] * rbyc[idx]
        prods = np.einsum("jab,ibc->ijac", rbyc, rbyc)
        system = (targets - prods).reshape(512, 8)
    else:
        rbyc = [cayley.right_mult_matrix(_column_element(ring, t2, j)) for j in range(8)]
        blocks = []
        for i in range(8):
            for j in range(8):
                s, k = tab[i][j]
                blocks.append((s * rbyc[k] - linalg.matmul(ring, rbyc[j], rbyc[i])) % ring.p)
        system = np.concatenate(blocks, axis=0)
    ker = linalg.nullspace(ring, system, tol=1e-9 if isinstance(ring, ComplexField) else None)
    if ker.shape[1] != 1:
        raise LiftError(f"right companion: solution dimension {ker.shape[1]}, "
                        "T2 is not in the SO7 image")
    u = AlgebraElement(ring, 3, tuple(ker[:, 0].tolist()))
    c = u.norm_sq()
    if isinstance(ring, ComplexField):
        if abs(c) <= 1e-12:
            raise LiftError("right companion: isotropic first column")
        t1 = cayley.left_mult_matrix(u.scale(1 / ring.sqrt(c))) @ t2
        return _canonical_sign(ring, t1)
    r = ring.sqrt(int(c))
    if r is None:
        raise NonResidueError("right companion: normalization scalar is a "
                              f"non-residue mod {ring.p}")
    t1 = linalg.matmul(ring, cayley.left_mult_matrix(u.scale(ring.inv(r))), t2)
    return _canonical_sign(ring, t1)


def lift_left_companion(ring, t1: np.ndarray, tol: float = LIFT_TOL) -> np.ndarray:
    """Companion T2 with T2(uv) = T1(u) T2(v), for T1 in SO7 fixing e_1.

    This is the other Spin7 copy, the one acting in the untwisted problem;
    only the lifted T2 matrix is returned.
    """
    pairs = []
    for j in range(8):
        pj = cayley.left_mult_matrix(cayley.basis(ring, 3, j))
        qj = cayley.left_mult_matrix(_column_element(ring, t1, j))
        pairs.append((pj, qj))
    sols = linalg.solve_intertwiner(ring, pairs, tol=1e-9 if isinstance(ring, ComplexField) else None)
    if len(sols) != 1:
        raise LiftError(f"left companion: solution dimension {len(sols)}")
    t2 = _normalize_orthogonal(ring, sols[0], "left companion")
    # defining property: T2(e_i e_j) = T1(e_i) T2(e_j)
    tab = cayley.mult_table(3)
    approx = isinstance(ring, ComplexField)
    cols1 = [_column_element(ring, t1, j) for j in range(8)]
    cols2 = [_column_element(ring, t2, j) for j in range(8)]
    for i in range(8):
        for j in range(8):
            lhs = cols1[i] * cols2[j]
            s, k = tab[i][j]
            rhs = cols2[k] if s > 0 else -cols2[k]
            if approx:
                if max(abs(p - q) for p, q in zip(lhs.coords, rhs.coords)) > tol:
                    raise LiftError("left companion: defining property fails")
            elif lhs.coords != rhs.coords:
                raise LiftError("left companion: defining property fails")
    return t2


def kappa(ring, t: np.ndarray) -> np.ndarray:
    """K_T(x) = conj(T(conj(x))), i.e. C T C with C = diag(1,-1,..,-1)."""
    sign = np.ones(8, dtype=np.int64)
    sign[1:] = -1
    if isinstance(ring, ComplexField):
        return t * np.outer(sign, sign)
    return (t * np.outer(sign, sign)) % ring.p


def spin7_act(t: TrialityTriple, a: HermitianTriple) -> HermitianTriple:
    """The twisted action: c <- T2(c), a <- T1(a), b <- K_{T1}(b)."""
    ring = a.ring
    kt1 = kappa(ring, t.t1)
    return HermitianTriple(ring, a.level, a.lambdas,
                           apply_matrix(ring, t.t1, a.a),
                           apply_matrix(ring, kt1, a.b),
                           apply_matrix(ring, t.t2, a.c))


def so7_act(ring, t1: np.ndarray, a: HermitianTriple) -> HermitianTriple:
    """The untwisted entrywise action of SO7 on the three octonion slots."""
    return HermitianTriple(ring, a.level, a.lambdas,
                           apply_matrix(ring, t1, a.a),
                           apply_matrix(ring, t1, a.b),
                           apply_matrix(ring, t1, a.c))


def sl3_act(ring, h: np.ndarray, a: HermitianTriple) -> HermitianTriple:
    """Transpose-congruence H^T A H; scalar 3x3 coefficients commute with
    the octonion entries so the product is unambiguous."""
    from .jordan import to_full_matrix
    full = to_full_matrix(a)
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = cayley.zero(ring, a.level)
            for k in range(3):
                for l in range(3):
                    acc = acc + full[k][l].scale(ring.mul(h[k, i], h[l, j]))
            row.append(acc)
        out.append(row)
    lams = tuple(out[i][i].coords[0] for i in range(3))
    return HermitianTriple(ring, a.level, lams, out[1][2], out[2][0], out[0][1])


def random_so7(ring, rng: random.Random, tries: int = 64) -> np.ndarray:
    """Random special-orthogonal matrix fixing e_1 (Cayley of a skew)."""
    for _ in range(tries):
        skew = linalg.random_skew(ring, 8, rng, fix_first=True)
        try:
            return linalg.cayley_orthogonal(ring, skew)
        except linalg.SingularMatrixError:
            continue
    raise RuntimeError("could not sample an SO7 element (singular I+S repeatedly)")


def random_spin7(ring, rng: random.Random, tries: int = 64) -> TrialityTriple:
    """Random triality pair, retrying on non-residue normalizations."""
    last = None
    for _ in range(tries):
        t2 = random_so7(ring, rng)
        try:
            return lift_right_companion(ring, t2)
        except NonResidueError as exc:
            last = exc
            continue
    raise LiftError(f"no liftable T2 found in {tries} tries: {last}")
