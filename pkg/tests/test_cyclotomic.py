import random
from fractions import Fraction
from math import inf

import pytest

from wildram.cyclotomic import (
    CyclotomicNumber,
    lambda_val,
    residue,
    s_arith,
    verify_cyclotomic_identities,
)
from wildram.errors import BadDenominator, BadResidueChoice, NotPrime, ZeroDivisor
from wildram.ff import GF


def random_cyclo(p, rng, ints=False):
    if ints:
        return CyclotomicNumber(p, [rng.randrange(-5, 6) for _ in range(p - 1)])
    return CyclotomicNumber(
        p, [Fraction(rng.randrange(-9, 10), rng.randrange(1, 7)) for _ in range(p - 1)]
    )


def test_basic_arithmetic():
    p = 5
    z = CyclotomicNumber.zeta(p)
    one = CyclotomicNumber.from_rational(p, 1)
    # zeta^5 = 1 and the minimal polynomial relation
    assert z**5 == one
    assert sum((z**i for i in range(5)), CyclotomicNumber.from_rational(p, 0)) == 0

    rng = random.Random(5)
    for _ in range(20):
        x = random_cyclo(p, rng)
        y = random_cyclo(p, rng)
        zc = random_cyclo(p, rng)
        assert (x + y) * zc == x * zc + y * zc
        if not x.is_zero():
            assert x * x.inverse() == one


def test_conjugates_and_norm():
    rng = random.Random(9)
    for p in (3, 5, 7):
        one = CyclotomicNumber.from_rational(p, 1)
        for _ in range(10):
            x = random_cyclo(p, rng)
            y = random_cyclo(p, rng)
            assert (x * y).norm() == x.norm() * y.norm()
        lam = CyclotomicNumber.lam(p)
        # Norm(lambda) = +- p
        assert abs(lam.norm()) == p
        assert one.norm() == 1


def test_lambda_val():
    for p in (2, 3, 5, 7, 11, 13):
        lam = CyclotomicNumber.lam(p)
        assert lambda_val(lam) == 1
        assert lambda_val(CyclotomicNumber.from_rational(p, p)) == p - 1
        if p > 2:
            assert lambda_val(CyclotomicNumber.zeta(p)) == 0
        assert lambda_val(CyclotomicNumber.from_rational(p, 0)) == inf

    # oracle: for plain integers v_lambda(n) = (p-1) * v_p(n)
    p = 5
    assert lambda_val(CyclotomicNumber.from_rational(p, 50)) == 2 * (p - 1)
    assert lambda_val(CyclotomicNumber.from_rational(p, Fraction(1, 5))) == -(p - 1)


def test_valuation_laws_random():
    rng = random.Random(31)
    p = 5
    for _ in range(30):
        x = random_cyclo(p, rng)
        y = random_cyclo(p, rng)
        if x.is_zero() or y.is_zero():
            continue
        vx, vy = lambda_val(x), lambda_val(y)
        assert lambda_val(x * y) == vx + vy
        vsum = lambda_val(x + y)
        assert vsum >= min(vx, vy)
        if vx != vy:
            assert vsum == min(vx, vy)


def test_integrality_vs_valuation():
    rng = random.Random(41)
    for _ in range(20):
        x = random_cyclo(7, rng, ints=True)
        if not x.is_zero():
            assert x.is_integral()
            assert lambda_val(x) >= 0


def test_residue():
    p = 5
    lam = CyclotomicNumber.lam(p)
    assert residue(lam) == 0
    z = CyclotomicNumber.zeta(p)
    for i in range(1, p):
        partial = sum((z**j for j in range(i)), CyclotomicNumber.from_rational(p, 0))
        assert residue(partial) == i % p

    unit = CyclotomicNumber.from_rational(p, p) / lam ** (p - 1)
    assert residue(unit) == p - 1  # Wilson: -1 mod p

    with pytest.raises(BadDenominator):
        residue(CyclotomicNumber.from_rational(p, Fraction(1, p)))


def test_residue_is_ring_hom():
    rng = random.Random(43)
    p = 7
    for _ in range(25):
        x = random_cyclo(p, rng, ints=True)
        y = random_cyclo(p, rng, ints=True)
        assert residue(x + y) == (residue(x) + residue(y)) % p
        assert residue(x * y) == (residue(x) * residue(y)) % p


def test_verify_identities_all_small_primes():
    for p in (2, 3, 5, 7, 11, 13):
        rep = verify_cyclotomic_identities(p)
        assert rep["product_identity"]
        assert rep["lambda_val_p"] == p - 1
        assert rep["wilson_residue"] == (-1) % p
    with pytest.raises(NotPrime):
        verify_cyclotomic_identities(4)


def test_p2_degenerate():
    # zeta_2 = -1, lambda = -2: everything is rational
    lam = CyclotomicNumber.lam(2)
    assert lam == CyclotomicNumber.from_rational(2, -2)
    assert lambda_val(lam) == 1
    assert residue(CyclotomicNumber.from_rational(2, -1)) == 1


def test_s_ring_arithmetic():
    R = s_arith(3, 2)
    s = R.s()
    one = R.one()
    # s^2 = 2
    assert s * s == R.scalar(2)
    # (1+s)(1-s) = 1 - s^2 = -1, a unit
    prod = (one + s) * (one - s)
    assert prod == R.scalar(-1)
    inv = R.invert(prod)
    assert inv * prod == one


def test_s_ring_zero_divisor():
    R = s_arith(3, 1)  # s^2 = 1 factors as (s-1)(s+1)
    s = R.s()
    one = R.one()
    assert (s - one) * (s + one) == R.zero()
    with pytest.raises(ZeroDivisor) as ei:
        R.invert(s - one)
    assert ei.value.factor is not None


def test_s_ring_residue():
    R = s_arith(3, 1)
    F3 = GF(3)
    sbar = F3.one()
    s = R.s()
    assert R.residue_s(s * s, sbar) == F3.one()
    with pytest.raises(BadResidueChoice):
        R.residue_s(s, F3.from_int(0))

    # residue through an extension: sbar in F_9 with sbar^2 = 2
    R2 = s_arith(3, 2)
    F9 = GF(3, 2)
    roots = [e for e in F9.elements() if e * e == F9.from_int(2)]
    assert roots
    sbar9 = roots[0]
    assert R2.residue_s(R2.s() * R2.s(), sbar9) == F9.from_int(2)


def test_s_ring_p2():
    R = s_arith(2, 3)
    s = R.s()
    assert s == R.scalar(3)
    assert (s * s) == R.scalar(9)


def test_json_roundtrip():
    x = CyclotomicNumber(5, [Fraction(1, 2), 3, 0, Fraction(-7, 3)])
    assert CyclotomicNumber.from_json(x.to_json()) == x
