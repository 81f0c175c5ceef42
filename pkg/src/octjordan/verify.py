"""Randomized (Schwartz-Zippel) verification of the polynomial identities.

Every identity the geometry relies on is a polynomial defect that must
vanish identically; each check samples seeded random points in F_p^n and
requires the defect to be exactly zero at every one of them.  A nonzero
defect polynomial of degree d survives a single trial with probability at
most d/p, so the per-check failure bound reported is trials * d / p (a
union bound; with p = 2^31 - 1 and degree 24 it is far below 1e-5 at 100
trials).

Degrees are recorded with respect to the hermitian-triple coordinates; in
the equivariance checks the group element is sampled separately and the
defect is linear in the point.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import cayley, linalg, symmetry
from .cayley import AlgebraElement
from .coeffs import PrimeField, derive_rng
from .jordan import (HermitianTriple, build_M, build_N, com, det_cartan,
                     diagonal_triple, full_matmul, random_triple, s_odm,
                     to_full_matrix, twisted_cubic, twisted_sextic)


@dataclass
class CheckResult:
    check_id: str
    name: str
    passed: bool
    trials: int
    degree: int
    failure_bound: float
    elapsed: float
    detail: str = ""
    warnings: list = field(default_factory=list)


@dataclass
class SuiteReport:
    prime: int
    seed: int
    trials: int
    results: list
    elapsed: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json_dict(self) -> dict:
        return {
            "prime": self.prime,
            "seed": self.seed,
            "trials": self.trials,
            "all_passed": self.all_passed,
            "elapsed_sec": self.elapsed,
            "checks": [{
                "id": r.check_id,
                "name": r.name,
                "passed": r.passed,
                "trials": r.trials,
                "degree": r.degree,
                "failure_bound": r.failure_bound,
                "elapsed_sec": r.elapsed,
                "detail": r.detail,
                "warnings": r.warnings,
            } for r in self.results],
        }


class CheckFailure(Exception):
    """Raised inside a trial; carries the point and defect description."""


def _quaternionic(ring, rng) -> AlgebraElement:
    return AlgebraElement(ring, 3, tuple(ring.random(rng) for _ in range(4)) + (0,) * 4)


def _fail(msg: str, point=None):
    if point is not None:
        msg += f" at point {point}"
    raise CheckFailure(msg)


# individual trial bodies ----------------------------------------------------

def _c1_composition(ring, rng):
    for level in range(4):
        x = cayley.random_element(ring, level, rng)
        y = cayley.random_element(ring, level, rng)
        if (x * y).norm_sq() != ring.mul(x.norm_sq(), y.norm_sq()):
            _fail(f"composition law fails at level {level}", (x.coords, y.coords))
    x = cayley.random_element(ring, 3, rng)
    y = cayley.random_element(ring, 3, rng)
    u = cayley.random_element(ring, 3, rng)
    if (x * (x * y)).coords != ((x * x) * y).coords:
        _fail("left alternativity fails", (x.coords, y.coords))
    if ((y * x) * x).coords != (y * (x * x)).coords:
        _fail("right alternativity fails", (x.coords, y.coords))
    if ((u * x) * (y * u)).coords != (u * ((x * y) * u)).coords:
        _fail("Moufang identity fails", (u.coords, x.coords, y.coords))
    if ((x * y) * u).real_part() != (x * (y * u)).real_part():
        _fail("trace associativity fails", (x.coords, y.coords, u.coords))


def _c2_splitting(ring, rng):
    ell = cayley.basis(ring, 3, 4)
    u, v = _quaternionic(ring, rng), _quaternionic(ring, rng)
    if (u * (v * ell)).coords != ((v * u) * ell).coords:
        _fail("u(v.e) = (vu)e fails", (u.coords, v.coords))
    if ((u * ell) * (v * ell)).coords != (-(v.conjugate() * u)).coords:
        _fail("(ue)(ve) = -conj(v)u fails", (u.coords, v.coords))
    if (u * ell).coords != (ell * u.conjugate()).coords:
        _fail("ue = e conj(u) fails", (u.coords,))
    if ((u * ell) * v).coords != ((u * v.conjugate()) * ell).coords:
        _fail("(ue)v = (u conj(v))e fails", (u.coords, v.coords))


def _c3_gram(ring, rng):
    c, b, a = (cayley.random_element(ring, 3, rng) for _ in range(3))
    lhs = cayley.associator(c, b, a).norm_sq()
    ph = cayley.phi(c, b, a)
    rhs = ring.mul(ring.from_int(4), ring.sub(cayley.gram_im(c, b, a), ring.mul(ph, ph)))
    if lhs != rhs:
        _fail("Gram-associator identity fails", (c.coords, b.coords, a.coords))


def _check_com_factorization(ring, t: HermitianTriple):
    d = det_cartan(t)
    want = to_full_matrix(diagonal_triple(ring, t.level, d, d, d))
    for prod in (full_matmul(to_full_matrix(com(t)), to_full_matrix(t)),
                 full_matmul(to_full_matrix(t), to_full_matrix(com(t)))):
        for i in range(3):
            for j in range(3):
                if prod[i][j].coords != want[i][j].coords:
                    _fail(f"Com factorization fails in entry ({i},{j})", t.flatten())


def _c4_com(ring, rng):
    for level in (0, 1, 2):
        _check_com_factorization(ring, random_triple(ring, level, rng))
    quat = HermitianTriple(ring, 3, tuple(ring.random(rng) for _ in range(3)),
                           _quaternionic(ring, rng), _quaternionic(ring, rng),
                           _quaternionic(ring, rng))
    _check_com_factorization(ring, quat)


def _c5_associative_det(ring, rng):
    for level, power in ((0, 1), (1, 2), (2, 4)):
        t = random_triple(ring, level, rng)
        if linalg.det(ring, build_M(t)) != pow(det_cartan(t), power, ring.p):
            _fail(f"det(M) != Det^{power} at level {level}", t.flatten())


def _c6_det_m(ring, rng):
    t = random_triple(ring, 3, rng)
    if linalg.det(ring, build_M(t)) != pow(s_odm(t), 4, ring.p):
        _fail("det(M_O) != S_ODM^4", t.flatten())


def _c7_det_n(ring, rng):
    t = random_triple(ring, 3, rng)
    want = ring.mul(pow(twisted_cubic(t), 4, ring.p), pow(twisted_sextic(t), 2, ring.p))
    if linalg.det(ring, build_N(t)) != want:
        _fail("det(N_O) != cubic^4 * sextic^2", t.flatten())


def _sample_left_pair(ring, rng, tries=64):
    for _ in range(tries):
        t1 = symmetry.random_so7(ring, rng)
        try:
            return t1, symmetry.lift_left_companion(ring, t1)
        except symmetry.NonResidueError:
            continue
    raise CheckFailure("could not lift any T1 (all normalizations non-residues)")


def _c8_equivariance(ring, rng):
    # untwisted: M(T1.A) = diag(T2,T2,T2) M(A) diag(T2,T2,T2)^T
    t1, t2 = _sample_left_pair(ring, rng)
    blocks = np.zeros((24, 24), dtype=t2.dtype)
    for k in range(3):
        blocks[8 * k:8 * k + 8, 8 * k:8 * k + 8] = t2
    t = random_triple(ring, 3, rng)
    lhs = build_M(symmetry.so7_act(ring, t1, t))
    rhs = linalg.matmul(ring, linalg.matmul(ring, blocks, build_M(t)), blocks.T)
    if not np.array_equal(lhs, rhs):
        _fail("M_O conjugation equivariance fails", t.flatten())
    # twisted: N((T1,T2).A) = diag(T1,T1,T2) N(A) diag(T1,T1,T2)^T
    trip = symmetry.random_spin7(ring, rng)
    blocks = np.zeros((24, 24), dtype=trip.t1.dtype)
    blocks[0:8, 0:8] = trip.t1
    blocks[8:16, 8:16] = trip.t1
    blocks[16:24, 16:24] = trip.t2
    t = random_triple(ring, 3, rng)
    lhs = build_N(symmetry.spin7_act(trip, t))
    rhs = linalg.matmul(ring, linalg.matmul(ring, blocks, build_N(t)), blocks.T)
    if not np.array_equal(lhs, rhs):
        _fail("N_O conjugation equivariance fails", t.flatten())


def _c9_sl3_and_ratios(ring, rng):
    h = linalg.field_array(ring, [[ring.random(rng) for _ in range(3)] for _ in range(3)])
    dh = linalg.det(ring, h)
    if dh == 0:
        return  # measure-zero resample-free skip
    points = [random_triple(ring, 3, rng) for _ in range(5)]
    dh4 = pow(int(dh), 4, ring.p)
    for t in points:
        moved = symmetry.sl3_act(ring, h, t)
        if det_cartan(moved) != ring.mul(ring.mul(dh, dh), det_cartan(t)):
            _fail("det_cartan congruence covariance fails", t.flatten())
        if s_odm(moved) != ring.mul(dh4, s_odm(t)):
            _fail("S_ODM congruence covariance (det^4) fails", t.flatten())
    # SO7 leaves S_ODM invariant up to a constant: test ratio constancy
    t1, _ = _sample_left_pair(ring, rng)
    vals = [(s_odm(symmetry.so7_act(ring, t1, t)), s_odm(t)) for t in points]
    g0, v0 = vals[0]
    for g, v in vals[1:]:
        if ring.mul(g, v0) != ring.mul(v, g0):
            _fail("S_ODM ratio under SO7 is not constant")
    if v0 != 0 and g0 != v0:
        _fail("S_ODM multiplier under SO7 differs from 1")
    # Spin7 leaves the twisted sextic invariant up to a constant
    trip = symmetry.random_spin7(ring, rng)
    vals = [(twisted_sextic(symmetry.spin7_act(trip, t)), twisted_sextic(t)) for t in points]
    g0, v0 = vals[0]
    for g, v in vals[1:]:
        if ring.mul(g, v0) != ring.mul(v, g0):
            _fail("twisted sextic ratio under Spin7 is not constant")
    if v0 != 0 and g0 != v0:
        _fail("twisted sextic multiplier under Spin7 differs from 1")
    # congruences mixing the third row into the first two break the twisted
    # kernel (an octonion-commutator obstruction), so the twisted invariants
    # are covariant exactly for the block subgroup fixing that split
    hb = linalg.field_array(ring, [[ring.random(rng), ring.random(rng), 0],
                                   [ring.random(rng), ring.random(rng), 0],
                                   [0, 0, ring.random(rng)]])
    dhb = linalg.det(ring, hb)
    if dhb == 0:
        return
    db2, db4 = pow(int(dhb), 2, ring.p), pow(int(dhb), 4, ring.p)
    for t in points:
        moved = symmetry.sl3_act(ring, hb, t)
        if twisted_cubic(moved) != ring.mul(db2, twisted_cubic(t)):
            _fail("twisted cubic covariance under block congruence fails", t.flatten())
        if twisted_sextic(moved) != ring.mul(db4, twisted_sextic(t)):
            _fail("twisted sextic covariance under block congruence fails", t.flatten())


def multiplicity_defect(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement) -> int:
    """Rank of L_a L_b R_c + R_c^T L_b^T L_a^T - 2 Re(conj(c)(ba)) I.

    The twisted operator has 2 Re(conj(c) b a) as an eigenvalue of
    multiplicity at least 4, so the rank is at most 4, with equality at
    generic triples.
    """
    ring = a.ring
    la, lb = cayley.left_mult_matrix(a), cayley.left_mult_matrix(b)
    rc = cayley.right_mult_matrix(c)
    prod = linalg.matmul(ring, linalg.matmul(ring, la, lb), rc)
    op = prod + prod.T
    shift = (c.conjugate() * (b * a)).real_part()
    op = op - (shift + shift) * np.eye(8, dtype=np.int64)
    if isinstance(ring, PrimeField):
        op = op % ring.p
    return linalg.rank(ring, op)


def _c10_multiplicity(ring, rng):
    a, b, c = (cayley.random_element(ring, 3, rng) for _ in range(3))
    r = multiplicity_defect(a, b, c)
    if r > 4:
        _fail(f"multiplicity defect rank {r} > 4", (a.coords, b.coords, c.coords))


def _schur_factor_trial(ring, rng, twisted: bool):
    p = ring.p
    for _ in range(64):
        t = random_triple(ring, 3, rng)
        na, nc = t.a.norm_sq(), t.c.norm_sq()
        l1, l2, l3 = t.lambdas
        if 0 in (na, nc, l2):
            continue
        inv_l2 = ring.inv(l2)
        delta = ring.sub(ring.mul(nc, l1), ring.mul(ring.mul(nc, nc), inv_l2))
        nu = ring.sub(ring.mul(l3, na), ring.mul(ring.mul(na, na), inv_l2))
        if delta == 0 or nu == 0:
            continue
        break
    else:
        raise CheckFailure("no admissible point for the Schur factorization")
    la = cayley.left_mult_matrix(t.a)
    lb = cayley.left_mult_matrix(t.b)
    cb = cayley.right_mult_matrix(t.c) if twisted else cayley.left_mult_matrix(t.c)
    idn = linalg.eye(ring, 8)
    bmat = (linalg.matmul(ring, linalg.matmul(ring, la, lb), cb)
            - ring.mul(ring.mul(na, nc), inv_l2) * idn) % p
    z = np.zeros((8, 8), dtype=idn.dtype)
    r1 = np.block([[ring.inv(nc) * cb % p, z, z],
                   [z, idn, z],
                   [z, z, ring.inv(na) * la.T % p]]) % p
    r2 = np.block([[idn, ring.mul(nc, inv_l2) * idn % p, z],
                   [z, idn, z],
                   [ring.inv(delta) * bmat % p, ring.mul(na, inv_l2) * idn % p, idn]]) % p
    w = (nu * idn - ring.inv(delta) * linalg.matmul(ring, bmat, bmat.T)) % p
    dmid = np.block([[delta * idn % p, z, z],
                     [z, l2 * idn, z],
                     [z, z, w]]) % p
    prod = linalg.matmul(ring, r1, r2)
    prod = linalg.matmul(ring, prod, dmid)
    prod = linalg.matmul(ring, prod, r2.T)
    prod = linalg.matmul(ring, prod, r1.T)
    target = build_N(t) if twisted else build_M(t)
    if not np.array_equal(prod, target):
        name = "S1 S2 D S2^T S1^T = N_O" if twisted else "R1 R2 D R2^T R1^T = M_O"
        _fail(f"proof factorization {name} fails", t.flatten())


def _c11_schur(ring, rng):
    _schur_factor_trial(ring, rng, twisted=False)
    _schur_factor_trial(ring, rng, twisted=True)


def charpoly_factor_check(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement,
                          kappa_val) -> tuple:
    """Check det(kI - (L_a L_b L_c + t(L_c)t(L_b)t(L_a))) against the
    fourth power of the quadratic (k - 2Re(c(ab)))(k - 2Re(c(ba))) - |[c,b,a]|^2.

    Returns ("pass", ""), ("warn", msg) when the quadratic matches with a
    different exponent, or ("fail", msg).
    """
    ring = a.ring
    p = ring.p
    la, lb, lc = (cayley.left_mult_matrix(x) for x in (a, b, c))
    prod = linalg.matmul(ring, linalg.matmul(ring, la, lb), lc)
    op = (prod + prod.T) % p
    mat = (kappa_val * np.eye(8, dtype=np.int64) - op) % p
    lhs = linalg.det(ring, mat)
    re_cab = (c * (a * b)).real_part()
    re_cba = (c * (b * a)).real_part()
    asq = cayley.associator(c, b, a).norm_sq()
    quad = ring.sub(ring.mul(ring.sub(kappa_val, ring.add(re_cab, re_cab)),
                             ring.sub(kappa_val, ring.add(re_cba, re_cba))), asq)
    if lhs == pow(quad, 4, p):
        return "pass", ""
    if quad != 0:
        for k in range(1, 9):
            if lhs == pow(quad, k, p):
                return "warn", f"charpoly quadratic matches with exponent {k}, not 4"
    return "fail", f"det does not factor through the quadratic (lhs={lhs}, quad={quad})"


def _charpoly_trial(ring, rng):
    a, b, c = (cayley.random_element(ring, 3, rng) for _ in range(3))
    status, msg = charpoly_factor_check(a, b, c, ring.random(rng))
    if status == "fail":
        _fail(msg, (a.coords, b.coords, c.coords))
    return [msg] if status == "warn" else []


_CHECKS = [
    ("C1", "composition, alternativity, Moufang, trace associativity", 4, _c1_composition),
    ("C2", "quaternionic splitting relations", 2, _c2_splitting),
    ("C3", "Gram-associator identity", 6, _c3_gram),
    ("C4", "comatrix factorization (associative data)", 3, _c4_com),
    ("C5", "det(M_A) = Det^n_A for the associative levels", 12, _c5_associative_det),
    ("C6", "det(M_O) = S_ODM^4", 24, _c6_det_m),
    ("C7", "det(N_O) = cubic^4 * sextic^2", 24, _c7_det_n),
    ("C8", "M_O and N_O conjugation equivariance", 1, _c8_equivariance),
    ("C9", "SL3 covariance and invariant-ratio constancy", 12, _c9_sl3_and_ratios),
    ("C10", "twisted multiplicity bound rank <= 4", 15, _c10_multiplicity),
    ("C11", "Schur factorizations from the degeneracy proofs", 24, _c11_schur),
    ("charpoly", "untwisted characteristic polynomial factorization", 24, _charpoly_trial),
]


def check_ids() -> list:
    return [cid for cid, *_ in _CHECKS]


def _run_check(prime: int, seed: int, trials: int, cid: str) -> CheckResult:
    ring = PrimeField(prime)
    entry = next(c for c in _CHECKS if c[0] == cid)
    _, name, degree, body = entry
    c_start = time.perf_counter()
    passed, detail, warnings = True, "", []
    for trial in range(trials):
        rng = derive_rng(seed, cid, trial)
        try:
            extra = body(ring, rng)
            if extra:
                warnings.extend(extra)
        except CheckFailure as exc:
            passed, detail = False, f"trial {trial}: {exc}"
            break
    bound = min(1.0, trials * degree / prime)
    return CheckResult(cid, name, passed, trials, degree, bound,
                       time.perf_counter() - c_start, detail, warnings)


def run_suite(prime: int, seed: int, trials: int, checks=None,
              jobs: int = 1) -> SuiteReport:
    """Run the registered checks; any nonzero defect fails its check at the
    offending trial and the remaining checks still run.  With jobs > 1 the
    checks run in worker processes (trials stay seeded per check and index,
    so the report is identical either way)."""
    max_degree = max(deg for _, _, deg, _ in _CHECKS)
    if prime <= max_degree:
        raise ValueError(f"prime {prime} must exceed the maximum identity "
                         f"degree {max_degree}")
    wanted = None if checks is None else {c.lower() for c in checks}
    if wanted is not None:
        unknown = wanted - {cid.lower() for cid, *_ in _CHECKS}
        if unknown:
            raise ValueError(f"unknown check ids: {sorted(unknown)}")
    ids = [cid for cid, *_ in _CHECKS
           if wanted is None or cid.lower() in wanted]
    t_start = time.perf_counter()
    if jobs > 1 and len(ids) > 1:
        import multiprocessing
        with multiprocessing.Pool(min(jobs, len(ids))) as pool:
            results = pool.starmap(_run_check,
                                   [(prime, seed, trials, cid) for cid in ids])
    else:
        results = [_run_check(prime, seed, trials, cid) for cid in ids]
    return SuiteReport(prime, seed, trials, results, time.perf_counter() - t_start)
