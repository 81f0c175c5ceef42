import math

import pytest

from octjordan import linalg
from octjordan.coeffs import ComplexField, derive_rng
from octjordan.jordan import (HermitianTriple, build_M, build_N,
                              diagonal_triple, triple_from_json, twisted_cubic,
                              twisted_sextic)
from octjordan.strata import (Hypersurface, corank_census, sample_on,
                              surface_value)
from octjordan.symmetry import random_spin7, spin7_act

C = ComplexField()


@pytest.mark.parametrize("surface", list(Hypersurface))
def test_sample_residual_contract(surface):
    rng = derive_rng(0, "resid", surface.value)
    for _ in range(10):
        t = sample_on(surface, rng)
        scale = math.sqrt(sum(abs(z) ** 2 for z in t.flatten()))
        degree = 3 if surface is Hypersurface.TWISTED_CUBIC else 6
        assert abs(surface_value(surface, t)) <= 1e-9 * max(1.0, scale) ** degree


def test_real_offdiagonal_sodm_reduces_to_det():
    # with real a, b, c the sextic degenerates to Det^2, so sampled l3 solves Det=0
    import random

    from octjordan import cayley
    from octjordan.jordan import det_cartan, s_odm
    rng = derive_rng(0, "realdraw")
    rr = random.Random(4)
    for _ in range(5):
        reals = [cayley.embed_scalar(C, 3, complex(rr.uniform(-1, 1))) for _ in range(3)]
        base = HermitianTriple(C, 3, (C.random(rr), C.random(rr), 0j), *reals)
        d0 = det_cartan(base)
        d1 = det_cartan(HermitianTriple(C, 3, (base.lambdas[0], base.lambdas[1], 1 + 0j),
                                        base.a, base.b, base.c))
        slope = d1 - d0
        if abs(slope) < 1e-9:
            continue
        l3 = -d0 / slope
        t = HermitianTriple(C, 3, (base.lambdas[0], base.lambdas[1], l3),
                            base.a, base.b, base.c)
        assert abs(det_cartan(t)) < 1e-9
        assert abs(s_odm(t)) < 1e-9


def test_cubic_sample_keeps_sextic_generic():
    rng = derive_rng(0, "cubgen")
    away = 0
    for _ in range(20):
        t = sample_on(Hypersurface.TWISTED_CUBIC, rng)
        assert abs(twisted_cubic(t)) <= 1e-6
        if abs(twisted_sextic(t)) > 1e-3:
            away += 1
    assert away >= 18  # the sextic generically does not vanish on the cubic


def test_diagonal_point_corank_eight():
    t = diagonal_triple(C, 3, 0j, 1 + 0j, 1 + 0j)
    m = build_M(t)
    assert 24 - linalg.rank(C, m, tol=1e-8) == 8


def test_census_modes_small():
    cens = corank_census(Hypersurface.S_ODM, "M", samples=40, tol=1e-8, seed=0)
    assert cens.mode == 4
    assert cens.histogram[4] >= 38
    cens = corank_census(Hypersurface.TWISTED_CUBIC, "N", samples=40, tol=1e-8, seed=0)
    assert cens.mode == 4
    cens = corank_census(Hypersurface.TWISTED_SEXTIC, "N", samples=40, tol=1e-8, seed=0)
    assert cens.mode == 2
    assert cens.witness_corank == 2
    # the witness is a genuine rank-22 point
    w = triple_from_json(C, cens.witness)
    assert linalg.rank(C, build_N(w), tol=1e-8) == 22


def test_census_gap_ratios():
    cens = corank_census(Hypersurface.S_ODM, "M", samples=40, tol=1e-8, seed=1)
    assert cens.gap_ratios_ok >= 36  # >= 90% well-separated


def test_census_reports_fields():
    cens = corank_census(Hypersurface.TWISTED_SEXTIC, "N", samples=5, tol=1e-7, seed=3)
    d = cens.to_json_dict()
    assert d["tol"] == 1e-7 and d["backend"] == "svd"
    assert sum(cens.histogram.values()) == 5


def test_census_determinism_and_merge_consistency():
    a = corank_census(Hypersurface.S_ODM, "M", samples=10, seed=7).to_json_dict()
    b = corank_census(Hypersurface.S_ODM, "M", samples=10, seed=7).to_json_dict()
    assert a == b


def test_group_moves_preserve_corank():
    rng = derive_rng(0, "movecorank")
    trip = random_spin7(C, rng)
    for _ in range(3):
        t = sample_on(Hypersurface.TWISTED_SEXTIC, rng)
        moved = spin7_act(trip, t)
        r0 = linalg.rank(C, build_N(t), tol=1e-8)
        r1 = linalg.rank(C, build_N(moved), tol=1e-8)
        assert r0 == r1
