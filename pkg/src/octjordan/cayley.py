"""Composition algebras of dimension 2^k, k = 0..3, by Cayley-Dickson doubling.

The doubling rule is (a, b)(c, d) = (ac - conj(d) b,  d a + b conj(c)) with
the level-k basis ordered [lower half | lower half . l].  This convention is
not negotiable: at k = 3 it reproduces, entry for entry, the 8x8 left and
right multiplication tables that the rest of the package (and its test
fixtures) are calibrated against.  Basis vectors are e_1 .. e_{2^k} with
e_1 the unit; the quaternions sit at coords 1..4 and l = e_5.

Scalars come from a ring object (see :mod:`octjordan.coeffs`); everything
here works identically over a prime field, over complex floats, or over a
polynomial ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_LEVEL = 3


@lru_cache(maxsize=None)
def mult_table(level: int):
    """Structure constants: tables (sign, idx) with e_i e_j = sign * e_idx."""
    if not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"level {level} out of range 0..{MAX_LEVEL}")
    if level == 0:
        return ((( 1, 0),),)
    prev = mult_table(level - 1)
    h = 1 << (level - 1)
    rows = []
    for i in range(2 * h):
        row = []
        for j in range(2 * h):
            if i < h and j < h:
                s, k = prev[i][j]
            elif i < h:
                # (a, 0)(0, d) = (0, d a)
                s, k = prev[j - h][i]
                k += h
            elif j < h:
                # (0, b)(c, 0) = (0, b conj(c))
                s, k = prev[i - h][j]
                if j != 0:
                    s = -s
                k += h
            else:
                # (0, b)(0, d) = (-conj(d) b, 0)
                s, k = prev[j - h][i - h]
                s = -s
                if j != h:
                    s = -s
            row.append((s, k))
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def left_basis_matrices(level: int) -> np.ndarray:
    """Stack of matrices L_{e_i}, shape (n, n, n); L_x = sum_i x_i L_{e_i}."""
    n = 1 << level
    tab = mult_table(level)
    out = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for c in range(n):
            s, k = tab[i][c]
            out[i, k, c] = s
    return out


@lru_cache(maxsize=None)
def right_basis_matrices(level: int) -> np.ndarray:
    """Stack of matrices R_{e_i}; R_x y = coords(y x)."""
    n = 1 << level
    tab = mult_table(level)
    out = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for c in range(n):
            s, k = tab[c][i]
            out[i, k, c] = s
    return out


def left_table_symbolic(level: int = 3) -> list[list[int]]:
    """Left multiplication table with entries as signed variable indices.

    Entry (r, c) = s*(i+1) means the matrix of left multiplication by
    x = sum x_i e_i has s * x_{i+1} in that position.
    """
    n = 1 << level
    tab = mult_table(level)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for c in range(n):
            s, k = tab[i][c]
            out[k][c] = s * (i + 1)
    return out


def right_table_symbolic(level: int = 3) -> list[list[int]]:
    """Right multiplication table in the same signed-index encoding."""
    n = 1 << level
    tab = mult_table(level)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for c in range(n):
            s, k = tab[c][i]
            out[k][c] = s * (i + 1)
    return out


@dataclass(frozen=True)
class AlgebraElement:
    """Element of the level-k composition algebra, as a coordinate tuple."""

    ring: object
    level: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 1 << self.level:
            raise ValueError("coordinate count does not match level")

    def _require_same(self, other: "AlgebraElement"):
        if self.level != other.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")
        if self.ring != other.ring:
            raise ValueError("ring mismatch")

    def __add__(self, other):
        self._require_same(other)
        r = self.ring
        return AlgebraElement(r, self.level, tuple(
            r.add(a, b) for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._require_same(other)
        r = self.ring
        return AlgebraElement(r, self.level, tuple(
            r.sub(a, b) for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        r = self.ring
        return AlgebraElement(r, self.level, tuple(r.neg(a) for a in self.coords))

    def __mul__(self, other):
        """The algebra product, via the structure-constant table."""
        self._require_same(other)
        r = self.ring
        tab = mult_table(self.level)
        n = len(self.coords)
        out = [r.zero] * n
        for i, xi in enumerate(self.coords):
            if r.is_zero(xi) and r.kind == "exact":
                continue
            for j, yj in enumerate(other.coords):
                s, k = tab[i][j]
                term = r.mul(xi, yj)
                out[k] = r.add(out[k], term) if s > 0 else r.sub(out[k], term)
        return AlgebraElement(r, self.level, tuple(out))

    def scale(self, s):
        r = self.ring
        return AlgebraElement(r, self.level, tuple(r.mul(s, a) for a in self.coords))

    def conjugate(self):
        r = self.ring
        return AlgebraElement(r, self.level,
                              (self.coords[0],) + tuple(r.neg(a) for a in self.coords[1:]))

    def real_part(self):
        return self.coords[0]

    def imag_part(self):
        r = self.ring
        return AlgebraElement(r, self.level, (r.zero,) + self.coords[1:])

    def norm_sq(self):
        """x conj(x) as a ring scalar; equals the coordinate sum of squares."""
        r = self.ring
        acc = r.zero
        for a in self.coords:
            acc = r.add(acc, r.mul(a, a))
        return acc


def zero(ring, level: int) -> AlgebraElement:
    return AlgebraElement(ring, level, (ring.zero,) * (1 << level))


def basis(ring, level: int, i: int) -> AlgebraElement:
    """Basis vector e_{i+1} (0-indexed argument)."""
    coords = [ring.zero] * (1 << level)
    coords[i] = ring.one
    return AlgebraElement(ring, level, tuple(coords))


def unit(ring, level: int) -> AlgebraElement:
    return basis(ring, level, 0)


def embed_scalar(ring, level: int, s) -> AlgebraElement:
    coords = [ring.zero] * (1 << level)
    coords[0] = s
    return AlgebraElement(ring, level, tuple(coords))


def random_element(ring, level: int, rng: random.Random) -> AlgebraElement:
    return AlgebraElement(ring, level,
                          tuple(ring.random(rng) for _ in range(1 << level)))


def bilinear(x: AlgebraElement, y: AlgebraElement):
    """The symmetric form polarizing norm_sq: B(x, y) = sum_i x_i y_i."""
    r = x.ring
    acc = r.zero
    for a, b in zip(x.coords, y.coords):
        acc = r.add(acc, r.mul(a, b))
    return acc


def left_mult_matrix(x: AlgebraElement) -> np.ndarray:
    """Matrix L_x with L_x coords(y) = coords(x y)."""
    return _mult_matrix(x, right=False)


def right_mult_matrix(x: AlgebraElement) -> np.ndarray:
    """Matrix R_x with R_x coords(y) = coords(y x)."""
    return _mult_matrix(x, right=True)


def _mult_matrix(x: AlgebraElement, right: bool) -> np.ndarray:
    r = x.ring
    stack = right_basis_matrices(x.level) if right else left_basis_matrices(x.level)
    if r.kind == "approx":
        vec = np.array(x.coords, dtype=np.complex128)
        return np.tensordot(vec, stack.astype(np.complex128), axes=(0, 0))
    if getattr(r, "int64_safe", False):
        vec = np.array(x.coords, dtype=np.int64)
        # entries are +-x_i, no reduction needed
        return np.tensordot(vec, stack, axes=(0, 0))
    n = 1 << x.level
    out = np.zeros((n, n), dtype=object)
    out[:] = r.zero
    tab = mult_table(x.level)
    for i, xi in enumerate(x.coords):
        for c in range(n):
            s, k = (tab[c][i] if right else tab[i][c])
            out[k, c] = xi if s > 0 else r.neg(xi)
    return out


def associator(c: AlgebraElement, b: AlgebraElement, a: AlgebraElement) -> AlgebraElement:
    """[c, b, a] = (cb)a - c(ba); identically zero below level 3."""
    return (c * b) * a - c * (b * a)


def phi(c: AlgebraElement, b: AlgebraElement, a: AlgebraElement):
    """(1/2) Re((c conj(b) - conj(b) c) a), a scalar invariant of the triple."""
    r = c.ring
    bb = b.conjugate()
    comm = c * bb - bb * c
    half = r.inv(r.from_int(2)) if r.kind != "approx" else 0.5
    return r.mul(half, (comm * a).real_part())


def gram_im(c: AlgebraElement, b: AlgebraElement, a: AlgebraElement):
    """Gram determinant of the imaginary parts under the polar form of norm_sq."""
    r = c.ring
    u, v, w = c.imag_part(), b.imag_part(), a.imag_part()
    g = [[bilinear(p, q) for q in (u, v, w)] for p in (u, v, w)]

    def m(*vals):
        acc = vals[0]
        for t in vals[1:]:
            acc = r.mul(acc, t)
        return acc

    pos = r.add(r.add(m(g[0][0], g[1][1], g[2][2]), m(g[0][1], g[1][2], g[2][0])),
                m(g[0][2], g[1][0], g[2][1]))
    neg = r.add(r.add(m(g[0][2], g[1][1], g[2][0]), m(g[0][0], g[1][2], g[2][1])),
                m(g[0][1], g[1][0], g[2][2]))
    return r.sub(pos, neg)


@dataclass(frozen=True)
class QuaternionSplitting:
    """Decomposition x = x0 + x1 . l along O = H + H.l, H = span(e1..e4)."""

    x0: AlgebraElement
    x1: AlgebraElement


def split(x: AlgebraElement) -> QuaternionSplitting:
    if x.level != 3:
        raise ValueError("splitting is defined at level 3 only")
    r = x.ring
    zeros = (r.zero,) * 4
    x0 = AlgebraElement(r, 3, x.coords[:4] + zeros)
    x1 = AlgebraElement(r, 3, x.coords[4:] + zeros)
    return QuaternionSplitting(x0, x1)


def recompose(s: QuaternionSplitting) -> AlgebraElement:
    ell = basis(s.x0.ring, 3, 4)
    return s.x0 + s.x1 * ell
