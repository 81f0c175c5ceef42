import numpy as np
import pytest

from octjordan.autdim import (CHART_ROWS, PolyRing, SparsePoly,
                              aut_dimension_bound, expand_sodm, gradient,
                              jacobian_image_rank, random_restriction,
                              symbolic_triple)
from octjordan.coeffs import PrimeField, derive_rng
from octjordan.jordan import random_triple, s_odm

P31 = 2**31 - 1


def test_sparse_poly_arithmetic():
    p = 313
    x = SparsePoly.variable(3, 0)
    y = SparsePoly.variable(3, 1)
    q = x.mul(x, p).add(y.scale(2, p), p)     # x^2 + 2y
    assert q.coefficient((2, 0, 0)) == 1
    assert q.coefficient((0, 1, 0)) == 2
    assert q.sub(q, p).is_zero()
    assert q.eval((5, 7, 0), p) == (25 + 14) % p
    assert q.total_degree() == 2
    # cancellation removes entries
    r = x.sub(x, p)
    assert len(r) == 0


def test_poly_ring_inverse_of_constant_only():
    ring = PolyRing(313, 3)
    two = ring.from_int(2)
    assert ring.mul(ring.inv(two), two).coefficient((0, 0, 0)) == 1
    with pytest.raises(ZeroDivisionError):
        ring.inv(ring.variable(0))


def test_gradient_basics():
    p = 313
    ring = PolyRing(p, 27)
    cube = ring.variable(24).mul(ring.variable(24), p)
    for v in (25, 25, 26, 26):
        cube = cube.mul(ring.variable(v), p)
    g = gradient(cube, p)
    assert g[24].coefficient((0,) * 24 + (1, 2, 2)) == 2
    assert all(gi.is_zero() for i, gi in enumerate(g) if i not in (24, 25, 26))
    zg = gradient(SparsePoly.zero(27), p)
    assert len(zg) == 27 and all(q.is_zero() for q in zg)


def test_sodm_expansion_shape():
    s = expand_sodm(313)
    assert s.total_degree() == 6
    assert s.is_homogeneous()
    assert s.coefficient((0,) * 24 + (2, 2, 2)) == 1  # the (l1 l2 l3)^2 term


def test_euler_identity():
    # sum x_i dS/dx_i = 6 S for a homogeneous sextic
    p = 313
    s = expand_sodm(p)
    parts = gradient(s, p)
    rng = derive_rng(0, "euler")
    for _ in range(10):
        pt = [rng.randrange(p) for _ in range(27)]
        lhs = sum(x * g.eval(pt, p) for x, g in zip(pt, parts)) % p
        assert lhs == 6 * s.eval(pt, p) % p


@pytest.mark.parametrize("prime", [313, P31])
def test_expansion_agrees_with_direct_evaluation(prime):
    field = PrimeField(prime)
    s = expand_sodm(prime)
    rng = derive_rng(0, "crossoracle", prime)
    trials = 100 if prime == 313 else 20
    for _ in range(trials):
        t = random_triple(field, 3, rng)
        assert s.eval(t.flatten(), prime) == s_odm(t)


def test_jacobian_rank_zero_map():
    p = 313
    parts = gradient(expand_sodm(p), p)
    assert jacobian_image_rank(parts, np.zeros((27, 6), dtype=np.int64), p) == 0


def test_jacobian_rank_133_mod_313():
    p = 313
    parts = gradient(expand_sodm(p), p)
    rng = derive_rng(0, "rank313")
    r = jacobian_image_rank(parts, random_restriction(p, rng), p)
    assert r == 133
    assert r <= CHART_ROWS


def test_jacobian_rank_133_survives_large_prime_rerun():
    # semicontinuity: rerunning over a large prime still reaches 133
    parts = gradient(expand_sodm(P31), P31)
    rng = derive_rng(0, "rankbig")
    assert jacobian_image_rank(parts, random_restriction(P31, rng), P31) == 133


def test_aut_dimension_bound_reports():
    rep = aut_dimension_bound(313, seed=1, retries=3)
    assert rep["max_rank"] == 133
    assert rep["aut_dim_bound"] == 29
    assert rep["sodm_degree"] == 6
    assert "162 - 29 = 133" in rep["consistency"]
    empty = aut_dimension_bound(313, seed=1, retries=0)
    assert "max_rank" not in empty and "note" in empty


def test_twisted_sextic_variant_reports_without_target():
    rep = aut_dimension_bound(313, seed=0, retries=1, invariant="twisted_sextic")
    assert rep["invariant"] == "twisted_sextic"
    assert rep["sextic_degree"] == 6
    assert 0 < rep["max_rank"] <= CHART_ROWS
    assert rep["aut_dim_bound"] == CHART_ROWS - rep["max_rank"]
    assert "consistency" not in rep  # no published value to compare against


def test_symbolic_triple_layout():
    ring = PolyRing(313, 27)
    t = symbolic_triple(ring)
    flat = t.flatten()
    for i, q in enumerate(flat):
        assert q.coefficient(tuple(1 if j == i else 0 for j in range(27))) == 1
        assert len(q) == 1
