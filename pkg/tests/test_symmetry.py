import numpy as np
import pytest

from octjordan import cayley, linalg
from octjordan.coeffs import ComplexField, PrimeField, derive_rng
from octjordan.jordan import (HermitianTriple, build_M, build_N, det_cartan,
                              random_triple, s_odm, twisted_cubic,
                              twisted_sextic)
from octjordan.symmetry import (LiftError, TrialityTriple,
                                fast_right_companion, kappa,
                                lift_left_companion, lift_right_companion,
                                random_so7, random_spin7, sl3_act, so7_act,
                                spin7_act, triality_defect)

P31 = 2**31 - 1
F = PrimeField(P31)
C = ComplexField()


def test_lift_identity():
    t = lift_right_companion(F, linalg.eye(F, 8))
    assert np.array_equal(t.t1, linalg.eye(F, 8))
    t2 = lift_left_companion(F, linalg.eye(F, 8))
    assert np.array_equal(t2, linalg.eye(F, 8))


def test_lift_right_complex():
    rng = derive_rng(0, "liftc")
    for _ in range(3):
        t2 = random_so7(C, rng)
        trip = lift_right_companion(C, t2)
        assert trip.defect() <= 1e-10
        assert np.linalg.norm(trip.t1.T @ trip.t1 - np.eye(8)) < 1e-10


def test_lift_right_field_exact():
    rng = derive_rng(0, "liftf")
    trip = random_spin7(F, rng)
    assert trip.defect() == 0
    assert np.array_equal(linalg.matmul(F, trip.t1.T, trip.t1), linalg.eye(F, 8))


def test_lift_left_field():
    rng = derive_rng(0, "liftl")
    for attempt in range(32):
        t1 = random_so7(F, rng)
        try:
            t2 = lift_left_companion(F, t1)
            break
        except LiftError:
            continue
    else:
        pytest.fail("no liftable T1 found")
    assert np.array_equal(linalg.matmul(F, t2.T, t2), linalg.eye(F, 8))


def test_lift_rejects_non_so7():
    # a generic orthogonal matrix not fixing e1 is not in the SO7 image
    rng = derive_rng(0, "reject")
    bad = linalg.cayley_orthogonal(F, linalg.random_skew(F, 8, rng, fix_first=False))
    with pytest.raises(LiftError):
        lift_right_companion(F, bad)


def test_kappa():
    assert np.array_equal(kappa(F, linalg.eye(F, 8)), linalg.eye(F, 8))
    rng = derive_rng(0, "kap")
    t = random_so7(F, rng)
    k = kappa(F, t)
    assert np.array_equal(linalg.matmul(F, k.T, k), linalg.eye(F, 8))
    assert np.array_equal(kappa(F, k), t)


def test_kappa_triple_is_triality():
    # if (T1,T2,T1) is a triality then (K_{T1}, T1, T2) is one as well
    rng = derive_rng(0, "kaptrip")
    trip = random_spin7(F, rng)
    k1 = kappa(F, trip.t1)
    tab = cayley.mult_table(3)
    for i in range(8):
        for j in range(8):
            x = cayley.AlgebraElement(F, 3, tuple(k1[:, i].tolist()))
            y = cayley.AlgebraElement(F, 3, tuple(trip.t1[:, j].tolist()))
            s, k = tab[i][j]
            rhs = trip.t2[:, k] if s > 0 else (-trip.t2[:, k]) % P31
            assert list((x * y).coords) == list(rhs)


def test_spin7_act_identity():
    rng = derive_rng(0, "actid")
    a = random_triple(F, 3, rng)
    out = spin7_act(TrialityTriple.identity(F), a)
    assert out == a


def test_spin7_invariance_and_conjugation():
    rng = derive_rng(0, "inv7")
    trip = random_spin7(F, rng)
    blocks = np.zeros((24, 24), dtype=np.int64)
    blocks[0:8, 0:8] = trip.t1
    blocks[8:16, 8:16] = trip.t1
    blocks[16:24, 16:24] = trip.t2
    for _ in range(5):
        a = random_triple(F, 3, rng)
        moved = spin7_act(trip, a)
        assert twisted_cubic(moved) == twisted_cubic(a)
        assert twisted_sextic(moved) == twisted_sextic(a)
        lhs = build_N(moved)
        rhs = linalg.matmul(F, linalg.matmul(F, blocks, build_N(a)), blocks.T)
        assert np.array_equal(lhs, rhs)


def test_so7_m_conjugation():
    rng = derive_rng(0, "conj7")
    for attempt in range(32):
        t1 = random_so7(F, rng)
        try:
            t2 = lift_left_companion(F, t1)
            break
        except LiftError:
            continue
    else:
        pytest.fail("no liftable T1")
    blocks = np.zeros((24, 24), dtype=np.int64)
    for k in range(3):
        blocks[8 * k:8 * k + 8, 8 * k:8 * k + 8] = t2
    for _ in range(5):
        a = random_triple(F, 3, rng)
        moved = so7_act(F, t1, a)
        assert s_odm(moved) == s_odm(a)
        lhs = build_M(moved)
        rhs = linalg.matmul(F, linalg.matmul(F, blocks, build_M(a)), blocks.T)
        assert np.array_equal(lhs, rhs)


def test_sl3_act():
    rng = derive_rng(0, "sl3")
    a = random_triple(F, 3, rng)
    assert sl3_act(F, linalg.eye(F, 3), a) == a
    for _ in range(5):
        h = linalg.field_array(F, [[F.random(rng) for _ in range(3)] for _ in range(3)])
        if linalg.det(F, h) == 0:
            continue
        moved = sl3_act(F, h, a)
        dh = linalg.det(F, h)
        assert det_cartan(moved) == F.mul(F.mul(dh, dh), det_cartan(a))


def test_sl3_spin7_rank_preservation_on_degenerate_point():
    # group moves preserve the rank of N at degenerate points
    rng = derive_rng(0, "rankpres")
    trip = random_spin7(F, rng)
    while True:
        a = random_triple(F, 3, rng)
        # make the cubic vanish by solving the linear equation in lambda3
        base = HermitianTriple(F, 3, (a.lambdas[0], a.lambdas[1], 0), a.a, a.b, a.c)
        c0 = twisted_cubic(base)
        c1 = twisted_cubic(HermitianTriple(F, 3, (a.lambdas[0], a.lambdas[1], 1),
                                           a.a, a.b, a.c))
        slope = F.sub(c1, c0)
        if slope == 0:
            continue
        l3 = F.mul(F.neg(c0), F.inv(slope))
        a = HermitianTriple(F, 3, (a.lambdas[0], a.lambdas[1], l3), a.a, a.b, a.c)
        break
    assert twisted_cubic(a) == 0
    r0 = linalg.rank(F, build_N(a))
    assert r0 < 24
    assert linalg.rank(F, build_N(spin7_act(trip, a))) == r0
    # congruences in the block subgroup compatible with the twist also
    # preserve the rank of N at degenerate points
    hb = linalg.field_array(F, [[3, 7, 0], [2, 5, 0], [0, 0, 11]])
    assert linalg.rank(F, build_N(sl3_act(F, hb, a))) == r0


def test_fast_lift_agrees_with_intertwiner_lift():
    rng = derive_rng(0, "fastagree")
    for _ in range(3):
        t2 = random_so7(C, rng)
        slow = lift_right_companion(C, t2)
        fast = fast_right_companion(C, t2)
        assert np.linalg.norm(slow.t1 - fast) < 1e-9
    for _ in range(16):
        t2 = random_so7(F, rng)
        try:
            slow = lift_right_companion(F, t2)
        except LiftError:
            continue
        assert np.array_equal(slow.t1, fast_right_companion(F, t2))
        break
    else:
        pytest.fail("no liftable T2 found over the field")


def test_triality_defect_counts():
    rng = derive_rng(0, "defcnt")
    trip = random_spin7(F, rng)
    assert triality_defect(F, trip.t1, trip.t2) == 0
    wrong = trip.t1.copy()
    wrong[0, 0] = (wrong[0, 0] + 1) % P31
    assert triality_defect(F, wrong, trip.t2) > 0
