import random

import pytest

from octjordan.coeffs import ComplexField, PrimeField, derive_rng, is_prime

P31 = 2**31 - 1


def test_is_prime_basics():
    assert is_prime(2) and is_prime(3) and is_prime(313) and is_prime(P31)
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)
    assert not is_prime(313 * 317)
    # strong pseudoprime to several bases
    assert not is_prime(3215031751)


def test_prime_field_rejects_bad_modulus():
    with pytest.raises(ValueError):
        PrimeField(360)
    with pytest.raises(ValueError):
        PrimeField(2)


def test_sqrt_zero_and_one():
    f = PrimeField(313)
    assert f.sqrt(0) == 0
    assert f.sqrt(1) in (1, 312)


def test_sqrt_two_mod_313():
    # frozen from exhaustive search over F_313: 120^2 = 193^2 = 2
    f = PrimeField(313)
    r = f.sqrt(2)
    assert r in (120, 193)
    assert f.sqrt(5) is None  # 5 is a non-residue mod 313


@pytest.mark.parametrize("p", [313, 10007, P31])
def test_sqrt_roundtrip(p):
    f = PrimeField(p)
    rng = random.Random(1)
    for _ in range(50):
        x = rng.randrange(p)
        r = f.sqrt(x)
        if r is not None:
            assert r * r % p == x


def test_ring_axioms_sampled():
    f = PrimeField(P31)
    rng = random.Random(2)
    for _ in range(200):
        a, b, c = (f.random(rng) for _ in range(3))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1


def test_random_determinism():
    f = PrimeField(P31)
    xs = [f.random(derive_rng(7, "t", i)) for i in range(10)]
    ys = [f.random(derive_rng(7, "t", i)) for i in range(10)]
    zs = [f.random(derive_rng(8, "t", i)) for i in range(10)]
    assert xs == ys
    assert xs != zs


def test_uniformity_chi_square():
    # 10^4 draws over F_7: each residue within 5 sigma of the uniform count
    f = PrimeField(7)
    rng = derive_rng(0, "chi")
    n = 10_000
    counts = [0] * 7
    for _ in range(n):
        counts[f.random(rng)] += 1
    expect = n / 7
    sigma = (n * (1 / 7) * (6 / 7)) ** 0.5
    for k in counts:
        assert abs(k - expect) <= 5 * sigma


def test_complex_ring():
    r = ComplexField()
    rng = random.Random(3)
    for _ in range(100):
        z = r.random(rng)
        assert abs(z.real) <= 1 and abs(z.imag) <= 1
    a, b, c = (r.random(rng) for _ in range(3))
    assert abs(r.mul(r.mul(a, b), c) - r.mul(a, r.mul(b, c))) < 1e-12
    assert r.eq(r.mul(a, r.inv(a)), 1)
    assert r.sqrt(-1) == 1j
    # determinism contract
    assert [ComplexField().random(derive_rng(5, i)) for i in range(4)] == \
           [ComplexField().random(derive_rng(5, i)) for i in range(4)]
