"""Hermitian 3x3 matrices over a composition algebra and their invariants.

A point is stored as three diagonal scalars and three off-diagonal algebra
elements,

        [ l1        c      conj(b) ]
        [ conj(c)   l2     a       ]
        [ b         conj(a) l3     ],

with the flat coordinate order c(1..2^k), b, a, l1, l2, l3 (so 27
coordinates at the octonion level).  The module provides the degree-3 and
degree-6 invariants (Cartan determinant, comatrix, the octonionic
degeneracy sextic, the twisted cubic and twisted sextic) and the two
24x24 block matrices whose determinants those invariants govern:
det(M) = sextic^4 and det(N) = cubic^4 * twisted_sextic^2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import cayley
from .cayley import AlgebraElement
from .coeffs import ComplexField


@dataclass(frozen=True)
class HermitianTriple:
    ring: object
    level: int
    lambdas: tuple
    a: AlgebraElement
    b: AlgebraElement
    c: AlgebraElement

    def __post_init__(self):
        if len(self.lambdas) != 3:
            raise ValueError("three diagonal scalars required")
        for x in (self.a, self.b, self.c):
            if x.level != self.level:
                raise ValueError("off-diagonal level mismatch")

    def scale(self, s) -> "HermitianTriple":
        r = self.ring
        return HermitianTriple(r, self.level,
                               tuple(r.mul(s, l) for l in self.lambdas),
                               self.a.scale(s), self.b.scale(s), self.c.scale(s))

    def flatten(self) -> list:
        return list(self.c.coords) + list(self.b.coords) + list(self.a.coords) \
            + list(self.lambdas)


def identity_triple(ring, level: int) -> HermitianTriple:
    z = cayley.zero(ring, level)
    return HermitianTriple(ring, level, (ring.one,) * 3, z, z, z)


def diagonal_triple(ring, level: int, l1, l2, l3) -> HermitianTriple:
    z = cayley.zero(ring, level)
    return HermitianTriple(ring, level, (l1, l2, l3), z, z, z)


def random_triple(ring, level: int, rng: random.Random) -> HermitianTriple:
    return HermitianTriple(ring, level,
                           tuple(ring.random(rng) for _ in range(3)),
                           cayley.random_element(ring, level, rng),
                           cayley.random_element(ring, level, rng),
                           cayley.random_element(ring, level, rng))


def unflatten(ring, level: int, coords) -> HermitianTriple:
    n = 1 << level
    if len(coords) != 3 * n + 3:
        raise ValueError(f"expected {3 * n + 3} coordinates")
    c = AlgebraElement(ring, level, tuple(coords[:n]))
    b = AlgebraElement(ring, level, tuple(coords[n:2 * n]))
    a = AlgebraElement(ring, level, tuple(coords[2 * n:3 * n]))
    return HermitianTriple(ring, level, tuple(coords[3 * n:]), a, b, c)


def det_cartan(t: HermitianTriple):
    """l1 l2 l3 + 2 Re(c(ab)) - l2 |b|^2 - l1 |a|^2 - l3 |c|^2."""
    r = t.ring
    l1, l2, l3 = t.lambdas
    re_cab = (t.c * (t.a * t.b)).real_part()
    out = r.mul(r.mul(l1, l2), l3)
    out = r.add(out, r.add(re_cab, re_cab))
    out = r.sub(out, r.mul(l2, t.b.norm_sq()))
    out = r.sub(out, r.mul(l1, t.a.norm_sq()))
    out = r.sub(out, r.mul(l3, t.c.norm_sq()))
    return out


def com(t: HermitianTriple) -> HermitianTriple:
    """Formal comatrix; satisfies Com(A) A = det(A) I in associative data."""
    r = t.ring
    l1, l2, l3 = t.lambdas
    a, b, c = t.a, t.b, t.c
    lam = (r.sub(r.mul(l2, l3), a.norm_sq()),
           r.sub(r.mul(l1, l3), b.norm_sq()),
           r.sub(r.mul(l1, l2), c.norm_sq()))
    new_c = b.conjugate() * a.conjugate() - c.scale(l3)
    new_a = c.conjugate() * b.conjugate() - a.scale(l1)
    new_b = a.conjugate() * c.conjugate() - b.scale(l2)
    return HermitianTriple(r, t.level, lam, new_a, new_b, new_c)


def s_odm(t: HermitianTriple):
    """Degeneracy sextic of the untwisted problem:
    Det^2 - 4 phi(c,b,a) Det - |[c,b,a]|^2."""
    if t.level != 3:
        raise ValueError("sextic defined at level 3")
    r = t.ring
    d = det_cartan(t)
    ph = cayley.phi(t.c, t.b, t.a)
    asq = cayley.associator(t.c, t.b, t.a).norm_sq()
    four_ph_d = r.mul(r.from_int(4), r.mul(ph, d))
    return r.sub(r.sub(r.mul(d, d), four_ph_d), asq)


def twisted_cubic(t: HermitianTriple):
    """Det - 2 Re(c(ab)) + 2 Re(conj(c)(ba)); the cubic factor of det(N)."""
    if t.level != 3:
        raise ValueError("twisted invariants defined at level 3")
    r = t.ring
    d = det_cartan(t)
    re_cab = (t.c * (t.a * t.b)).real_part()
    re_cba = (t.c.conjugate() * (t.b * t.a)).real_part()
    return r.add(r.sub(d, r.add(re_cab, re_cab)), r.add(re_cba, re_cba))


def twisted_sextic(t: HermitianTriple):
    """The sextic factor of det(N) (degeneracy of the twisted kernel)."""
    if t.level != 3:
        raise ValueError("twisted invariants defined at level 3")
    r = t.ring
    l1, l2, l3 = t.lambdas
    na, nb, nc = t.a.norm_sq(), t.b.norm_sq(), t.c.norm_sq()
    lll = r.mul(r.mul(l1, l2), l3)
    env = r.sub(r.add(r.add(r.mul(l1, na), r.mul(l2, nb)), r.mul(l3, nc)), lll)
    re_c = t.c.real_part()
    re_ab = (t.a * t.b).real_part()
    four = r.from_int(4)
    mid = r.mul(four, r.mul(env, r.mul(re_c, re_ab)))
    tail = r.add(r.mul(r.mul(nb, na), r.mul(re_c, re_c)),
                 r.mul(nc, r.mul(re_ab, re_ab)))
    tail = r.sub(tail, r.mul(r.mul(na, nb), nc))
    return r.add(r.sub(r.mul(env, env), mid), r.mul(four, tail))


def build_M(t: HermitianTriple) -> np.ndarray:
    """Symmetric 3*2^k block matrix with left-multiplication blocks."""
    lc = cayley.left_mult_matrix(t.c)
    return _assemble(t, lc)


def build_N(t: HermitianTriple) -> np.ndarray:
    """The twisted variant: right multiplication by c in the (1,2) block."""
    if t.level != 3:
        raise ValueError("twisted matrix defined at level 3")
    rc = cayley.right_mult_matrix(t.c)
    return _assemble(t, rc)


def _assemble(t: HermitianTriple, cblock: np.ndarray) -> np.ndarray:
    r = t.ring
    la = cayley.left_mult_matrix(t.a)
    lb = cayley.left_mult_matrix(t.b)
    n = 1 << t.level
    if isinstance(r, ComplexField):
        idn = np.eye(n, dtype=np.complex128)
    else:
        idn = np.eye(n, dtype=np.int64)
        if la.dtype == object:
            idn = idn.astype(object)
    l1, l2, l3 = t.lambdas
    out = np.block([
        [l1 * idn, cblock, lb.T],
        [cblock.T, l2 * idn, la],
        [lb, la.T, l3 * idn],
    ])
    if not isinstance(r, ComplexField):
        out = out % r.p
    return out


def to_full_matrix(t: HermitianTriple) -> list:
    """The honest 3x3 matrix of algebra elements (diagonal embedded)."""
    r = t.ring
    emb = lambda s: cayley.embed_scalar(r, t.level, s)
    l1, l2, l3 = t.lambdas
    a, b, c = t.a, t.b, t.c
    return [[emb(l1), c, b.conjugate()],
            [c.conjugate(), emb(l2), a],
            [b, a.conjugate(), emb(l3)]]


def full_matmul(x: list, y: list) -> list:
    """Product of 3x3 matrices of algebra elements (order preserved)."""
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = x[i][0] * y[0][j]
            for k in (1, 2):
                acc = acc + x[i][k] * y[k][j]
            row.append(acc)
        out.append(row)
    return out


# JSON interchange: prime-field scalars as decimal strings, complex as [re, im]

def encode_scalar(ring, s):
    if isinstance(ring, ComplexField):
        return [s.real, s.imag]
    return str(int(s))


def decode_scalar(ring, v):
    if isinstance(ring, ComplexField):
        re, im = v
        return complex(re, im)
    return int(v) % ring.p


def triple_to_json(t: HermitianTriple) -> dict:
    enc = lambda x: [encode_scalar(t.ring, s) for s in x.coords]
    return {"level": t.level,
            "lambda": [encode_scalar(t.ring, s) for s in t.lambdas],
            "a": enc(t.a), "b": enc(t.b), "c": enc(t.c)}


def triple_from_json(ring, d: dict) -> HermitianTriple:
    level = int(d["level"])
    n = 1 << level
    def dec_el(key):
        vals = d[key]
        if len(vals) != n:
            raise ValueError(f"{key} must have {n} coordinates at level {level}")
        return AlgebraElement(ring, level, tuple(decode_scalar(ring, v) for v in vals))
    lams = d["lambda"]
    if len(lams) != 3:
        raise ValueError("lambda must have three entries")
    return HermitianTriple(ring, level,
                           tuple(decode_scalar(ring, v) for v in lams),
                           dec_el("a"), dec_el("b"), dec_el("c"))
