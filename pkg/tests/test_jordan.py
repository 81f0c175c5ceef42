import numpy as np
import pytest

from octjordan import cayley, jordan, linalg
from octjordan.cayley import AlgebraElement, basis, zero
from octjordan.coeffs import ComplexField, PrimeField, derive_rng
from octjordan.jordan import (HermitianTriple, build_M, build_N, com,
                              det_cartan, diagonal_triple, full_matmul,
                              identity_triple, random_triple, s_odm,
                              to_full_matrix, triple_from_json,
                              triple_to_json, twisted_cubic, twisted_sextic,
                              unflatten)

P31 = 2**31 - 1
F = PrimeField(P31)


def test_det_cartan_basics():
    assert det_cartan(identity_triple(F, 3)) == 1
    t = diagonal_triple(F, 3, 2, 3, 5)
    assert det_cartan(t) == 30
    e1 = basis(F, 3, 0)
    t = HermitianTriple(F, 3, (0, 0, 0), e1, e1, e1)
    assert det_cartan(t) == 2  # only the 2Re(cab) term survives


def test_com_basics():
    ident = identity_triple(F, 3)
    cm = com(ident)
    assert cm.lambdas == (1, 1, 1)
    assert cm.a.coords == zero(F, 3).coords
    t = diagonal_triple(F, 3, 2, 3, 5)
    assert com(t).lambdas == (15, 10, 6)


@pytest.mark.parametrize("level", [0, 1, 2])
def test_com_factorization_associative(level):
    rng = derive_rng(0, "comfact", level)
    for _ in range(20):
        t = random_triple(F, level, rng)
        d = det_cartan(t)
        lhs = full_matmul(to_full_matrix(com(t)), to_full_matrix(t))
        rhs = full_matmul(to_full_matrix(t), to_full_matrix(com(t)))
        want = to_full_matrix(diagonal_triple(F, level, d, d, d))
        for i in range(3):
            for j in range(3):
                assert lhs[i][j].coords == want[i][j].coords
                assert rhs[i][j].coords == want[i][j].coords


def test_com_factorization_quaternionic_octonion_data():
    rng = derive_rng(0, "comfactq")
    for _ in range(10):
        def quat():
            return AlgebraElement(F, 3, tuple(F.random(rng) for _ in range(4)) + (0,) * 4)
        t = HermitianTriple(F, 3, tuple(F.random(rng) for _ in range(3)),
                            quat(), quat(), quat())
        d = det_cartan(t)
        lhs = full_matmul(to_full_matrix(com(t)), to_full_matrix(t))
        want = to_full_matrix(diagonal_triple(F, 3, d, d, d))
        for i in range(3):
            for j in range(3):
                assert lhs[i][j].coords == want[i][j].coords


def test_com_factorization_fails_generically_at_level3():
    # the defect must be nonzero for generic octonionic data
    rng = derive_rng(0, "comdefect")
    t = random_triple(F, 3, rng)
    d = det_cartan(t)
    lhs = full_matmul(to_full_matrix(com(t)), to_full_matrix(t))
    want = to_full_matrix(diagonal_triple(F, 3, d, d, d))
    assert any(lhs[i][j].coords != want[i][j].coords for i in range(3) for j in range(3))


def test_s_odm_special_values():
    t = diagonal_triple(F, 3, 2, 3, 5)
    assert s_odm(t) == 900
    rng = derive_rng(0, "sodmreal")
    for _ in range(5):
        reals = [cayley.embed_scalar(F, 3, F.random(rng)) for _ in range(3)]
        t = HermitianTriple(F, 3, tuple(F.random(rng) for _ in range(3)), *reals)
        d = det_cartan(t)
        assert s_odm(t) == F.mul(d, d)


def test_det_m_is_sodm_fourth_power():
    rng = derive_rng(0, "detm")
    for _ in range(10):
        t = random_triple(F, 3, rng)
        assert linalg.det(F, build_M(t)) == pow(s_odm(t), 4, P31)


@pytest.mark.parametrize("level,na", [(0, 1), (1, 2), (2, 4)])
def test_det_m_associative_levels(level, na):
    rng = derive_rng(0, "detmlow", level)
    for _ in range(10):
        t = random_triple(F, level, rng)
        assert linalg.det(F, build_M(t)) == pow(det_cartan(t), na, P31)


def test_twisted_invariants_special_values():
    t = diagonal_triple(F, 3, 2, 3, 5)
    assert twisted_cubic(t) == 30
    assert twisted_sextic(t) == 900
    # c = 0 specialization
    rng = derive_rng(0, "c0")
    for _ in range(5):
        a = cayley.random_element(F, 3, rng)
        b = cayley.random_element(F, 3, rng)
        l1, l2, l3 = (F.random(rng) for _ in range(3))
        t = HermitianTriple(F, 3, (l1, l2, l3), a, b, zero(F, 3))
        e = F.sub(F.add(F.mul(l1, a.norm_sq()), F.mul(l2, b.norm_sq())),
                  F.mul(F.mul(l1, l2), l3))
        assert twisted_sextic(t) == F.mul(e, e)


def test_det_n_factorization():
    rng = derive_rng(0, "detn")
    for _ in range(10):
        t = random_triple(F, 3, rng)
        want = F.mul(pow(twisted_cubic(t), 4, P31), pow(twisted_sextic(t), 2, P31))
        assert linalg.det(F, build_N(t)) == want


def test_build_m_structure():
    t = diagonal_triple(F, 3, 2, 3, 5)
    m = build_M(t)
    assert linalg.det(F, m) == pow(30, 8, P31)
    rng = derive_rng(0, "sym")
    t = random_triple(F, 3, rng)
    m = build_M(t)
    assert np.array_equal(m, m.T)
    n = build_N(t)
    assert np.array_equal(n, n.T)


def test_build_n_diagonal_det():
    t = diagonal_triple(F, 3, 2, 3, 5)
    assert linalg.det(F, build_N(t)) == pow(30, 8, P31)


def test_build_n_real_c_equals_m():
    rng = derive_rng(0, "realc")
    t = random_triple(F, 3, rng)
    t = HermitianTriple(F, 3, t.lambdas, t.a, t.b, cayley.embed_scalar(F, 3, 17))
    assert np.array_equal(build_M(t), build_N(t))


def test_homogeneity():
    rng = derive_rng(0, "homog")
    t = random_triple(F, 3, rng)
    s = F.random(rng)
    st = t.scale(s)
    assert det_cartan(st) == F.mul(pow(s, 3, P31), det_cartan(t))
    assert s_odm(st) == F.mul(pow(s, 6, P31), s_odm(t))
    assert twisted_cubic(st) == F.mul(pow(s, 3, P31), twisted_cubic(t))
    assert twisted_sextic(st) == F.mul(pow(s, 6, P31), twisted_sextic(t))


def test_twisted_kernel_vectors_complex():
    # nullspace vectors of N at a degenerate point satisfy the twisted system
    C = ComplexField()
    rng = derive_rng(0, "twker")
    for _ in range(5):
        t = random_triple(C, 3, rng)
        # force the cubic to vanish by solving for lambda3 (it is linear)
        base = HermitianTriple(C, 3, (t.lambdas[0], t.lambdas[1], 0j), t.a, t.b, t.c)
        c0 = twisted_cubic(base)
        bump = HermitianTriple(C, 3, (t.lambdas[0], t.lambdas[1], 1 + 0j), t.a, t.b, t.c)
        slope = twisted_cubic(bump) - c0
        if abs(slope) < 1e-6:
            continue
        l3 = -c0 / slope
        tt = HermitianTriple(C, 3, (t.lambdas[0], t.lambdas[1], l3), t.a, t.b, t.c)
        n = build_N(tt)
        ker = linalg.nullspace(C, n, tol=1e-7)
        assert ker.shape[1] >= 1
        v = ker[:, 0]
        x = AlgebraElement(C, 3, tuple(v[:8]))
        y = AlgebraElement(C, 3, tuple(v[8:16]))
        z = AlgebraElement(C, 3, tuple(v[16:]))
        l1, l2, l3 = tt.lambdas
        r1 = x.scale(l1) + y * tt.c + tt.b.conjugate() * z
        r2 = x * tt.c.conjugate() + y.scale(l2) + tt.a * z
        r3 = tt.b * x + tt.a.conjugate() * y + z.scale(l3)
        for res in (r1, r2, r3):
            assert max(abs(w) for w in res.coords) < 1e-6


def test_flatten_roundtrip_and_json():
    rng = derive_rng(0, "flat")
    t = random_triple(F, 3, rng)
    flat = t.flatten()
    assert len(flat) == 27
    t2 = unflatten(F, 3, flat)
    assert t2 == t
    t3 = triple_from_json(F, triple_to_json(t))
    assert t3 == t
    C = ComplexField()
    tc = random_triple(C, 3, rng)
    tc2 = triple_from_json(C, triple_to_json(tc))
    assert all(abs(p - q) < 1e-15 for p, q in zip(tc.flatten(), tc2.flatten()))
