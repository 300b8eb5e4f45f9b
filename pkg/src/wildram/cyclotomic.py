"""Exact arithmetic in Q(zeta_p) and in the s-rings Q(zeta_p)[s]/(s^(p-1) - a).

Elements of Q(zeta_p) are stored on the power basis 1, zeta, ..., zeta^(p-2)
with big-rational coordinates, reduced modulo the p-th cyclotomic polynomial.
The valuation at the totally ramified prime above p is normalized so that
v(lambda) = 1 for lambda = zeta - 1, hence v(p) = p - 1; since the residue
degree is 1 it can be computed as the p-adic valuation of the norm.

p = 2 degenerates gracefully: zeta_2 = -1, lambda = -2, and everything
collapses to plain rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import inf

from .errors import (
    BadDenominator,
    BadResidueChoice,
    NegativeValuation,
    NotPrime,
    ZeroDivisor,
)
from .ff import FieldElement, is_prime

INFINITE = inf  # valuation of zero


class CyclotomicNumber:
    """Element of Q(zeta_p): coords c_0..c_(p-2) for sum c_i zeta^i."""

    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords):
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != p - 1:
            raise ValueError(f"need {p - 1} coordinates for Q(zeta_{p})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coords", cs)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rational(cls, p: int, value) -> CyclotomicNumber:
        return cls(p, (Fraction(value),) + (Fraction(0),) * (p - 2))

    @classmethod
    def zeta(cls, p: int, i: int = 1) -> CyclotomicNumber:
        return cls._from_zeta_powers(p, {i % p: Fraction(1)})

    @classmethod
    def lam(cls, p: int) -> CyclotomicNumber:
        """lambda = zeta_p - 1, the uniformizer above p."""
        return cls.zeta(p) - cls.from_rational(p, 1)

    @classmethod
    def _from_zeta_powers(cls, p: int, powers: dict[int, Fraction]) -> CyclotomicNumber:
        # reduce zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)) and zeta^p = 1
        coords = [Fraction(0)] * (p - 1)
        for e, c in powers.items():
            e %= p
            if e < p - 1:
                coords[e] += c
            else:
                for j in range(p - 1):
                    coords[j] -= c
        return cls(p, coords)

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other) -> CyclotomicNumber:
        if isinstance(other, CyclotomicNumber):
            if other.p != self.p:
                raise ValueError("mixed cyclotomic fields")
            return other
        return CyclotomicNumber.from_rational(self.p, other)

    def __add__(self, other):
        o = self._check(other)
        return CyclotomicNumber(self.p, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return CyclotomicNumber(self.p, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CyclotomicNumber(self.p, [-a for a in self.coords])

    def __mul__(self, other):
        o = self._check(other)
        p = self.p
        prod: dict[int, Fraction] = {}
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(o.coords):
                if b:
                    prod[(i + j) % p] = prod.get((i + j) % p, Fraction(0)) + a * b
        return CyclotomicNumber._from_zeta_powers(p, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CyclotomicNumber.from_rational(self.p, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # product of the other Galois conjugates over the rational norm
        num = CyclotomicNumber.from_rational(self.p, 1)
        for j in range(2, self.p):
            num = num * self.conjugate(j)
        n = (self * num).coords[0]  # = Norm(self), a rational
        return num * CyclotomicNumber.from_rational(self.p, Fraction(1) / n)

    def conjugate(self, j: int) -> CyclotomicNumber:
        """Galois conjugate zeta -> zeta^j for j prime to p."""
        powers: dict[int, Fraction] = {}
        for i, c in enumerate(self.coords):
            if c:
                powers[(i * j) % self.p] = powers.get((i * j) % self.p, Fraction(0)) + c
        return CyclotomicNumber._from_zeta_powers(self.p, powers)

    def norm(self) -> Fraction:
        """Product of all p-1 Galois conjugates; an exact rational."""
        out = CyclotomicNumber.from_rational(self.p, 1)
        for j in range(1, self.p):
            out = out * self.conjugate(j)
        assert all(c == 0 for c in out.coords[1:])
        return out.coords[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def is_integral(self) -> bool:
        """All power-basis coordinates integral (Z[zeta_p] is the maximal order)."""
        return all(c.denominator == 1 for c in self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(self.p, other)
        return (
            isinstance(other, CyclotomicNumber)
            and other.p == self.p
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((self.p, self.coords))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}*z^{i}" if i else f"{c}")
        return "Cyc(" + (" + ".join(terms) if terms else "0") + f"; p={self.p})"

    def to_json(self):
        return {
            "p": self.p,
            "coords": [[c.numerator, c.denominator] for c in self.coords],
        }

    @classmethod
    def from_json(cls, d) -> CyclotomicNumber:
        return cls(int(d["p"]), [Fraction(n, m) for n, m in d["coords"]])


def _vp(x: Fraction, p: int) -> int | float:
    if x == 0:
        return INFINITE
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def lambda_val(x: CyclotomicNumber) -> int | float:
    """Valuation at the prime above p, normalized with v(lambda) = 1.

    The prime is totally ramified with residue degree 1, so the valuation
    equals the p-adic valuation of the rational norm.
    """
    if x.is_zero():
        return INFINITE
    return _vp(x.norm(), x.p)


def residue(x: CyclotomicNumber) -> int:
    """Image in the residue field F_p (as an int in [0, p)): zeta -> 1, mod p."""
    if any(c.denominator % x.p == 0 for c in x.coords):
        raise BadDenominator("a coordinate denominator is divisible by p")
    if lambda_val(x) < 0:
        raise NegativeValuation("element has a pole above p")
    total = sum(x.coords, Fraction(0))
    num, den = total.numerator, total.denominator
    return num * pow(den, -1, x.p) % x.p


def verify_cyclotomic_identities(p: int) -> dict:
    """Exact checks: prod(1 - zeta^i) = p, v(p) = p-1, Wilson residue, digits.

    Returns a report dict; raises AssertionError on any failure.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    one = CyclotomicNumber.from_rational(p, 1)
    zeta = CyclotomicNumber.zeta(p)
    prod = one
    for i in range(1, p):
        prod = prod * (one - zeta**i)
    assert prod == p, f"prod(1 - zeta^i) = {prod!r} != {p}"

    lam = CyclotomicNumber.lam(p)
    assert lambda_val(lam) == 1
    assert lambda_val(CyclotomicNumber.from_rational(p, p)) == p - 1
    assert lambda_val(zeta) == 0

    unit = CyclotomicNumber.from_rational(p, p) / lam ** (p - 1)
    wilson = residue(unit)
    assert wilson == (-1) % p, f"residue(p/lambda^(p-1)) = {wilson}"

    digit_checks = []
    for i in range(1, p):
        partial = sum((zeta**j for j in range(i)), CyclotomicNumber.from_rational(p, 0))
        r = residue(partial)
        assert r == i % p
        digit_checks.append(r)

    return {
        "p": p,
        "product_identity": True,
        "lambda_val_p": p - 1,
        "wilson_residue": wilson,
        "digit_residues": digit_checks,
    }


class SRingElement:
    """Element of Q(zeta_p)[s]/(s^(p-1) - a): coefficients by power of s."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: SRing, coeffs):
        p = ring.p
        cs = list(coeffs)
        for i, c in enumerate(cs):
            if not isinstance(c, CyclotomicNumber):
                cs[i] = CyclotomicNumber.from_rational(p, c)
        if len(cs) != p - 1:
            raise ValueError(f"need {p - 1} s-coefficients")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("SRingElement is immutable")

    def _check(self, other) -> SRingElement:
        if isinstance(other, SRingElement):
            if other.ring is not self.ring and other.ring.key() != self.ring.key():
                raise ValueError("mixed s-rings")
            return other
        return self.ring.scalar(other)

    def __add__(self, other):
        o = self._check(other)
        return SRingElement(self.ring, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return SRingElement(self.ring, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return SRingElement(self.ring, [-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._check(other)
        n = self.ring.p - 1
        a = self.ring.a_cyclo
        out = [CyclotomicNumber.from_rational(self.ring.p, 0)] * n
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(o.coeffs):
                if not y.is_zero():
                    e = i + j
                    term = x * y
                    if e >= n:
                        e -= n
                        term = term * a
                    out[e] = out[e] + term
        return SRingElement(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        return self * self.ring.invert(o)

    def __pow__(self, e: int):
        out = self.ring.one()
        base = self
        if e < 0:
            base = self.ring.invert(self)
            e = -e
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = self.ring.scalar(other)
        return (
            isinstance(other, SRingElement)
            and other.ring.key() == self.ring.key()
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.ring.key(), self.coeffs))

    def gauss_val(self) -> int | float:
        """min over s-coefficients of the lambda-adic valuation (s is a unit)."""
        return min((lambda_val(c) for c in self.coeffs), default=INFINITE)

    def __repr__(self):
        return f"SRing({[repr(c) for c in self.coeffs]})"

    def to_json(self):
        return {"a": self.ring.a, "coeffs": [c.to_json() for c in self.coeffs]}


class SRing:
    """Arithmetic handle for Q(zeta_p)[s]/(s^(p-1) - a), a a p-unit integer.

    The relation need not be irreducible; division detects zero divisors
    and reports the offending factor of s^(p-1) - a.
    """

    def __init__(self, p: int, a: int):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if a == 0:
            raise BadResidueChoice("parameter a must be nonzero")
        if a % p == 0 and p != 2:
            # the coefficient-min valuation on formal s assumes v(s) = 0;
            # only the degenerate p = 2 ring (s literal) tolerates p | a
            raise BadResidueChoice(f"parameter a = {a} must be prime to {p}")
        self.p = p
        self.a = a
        self.a_cyclo = CyclotomicNumber.from_rational(p, a)

    def key(self):
        return (self.p, self.a)

    def zero(self) -> SRingElement:
        return self.scalar(0)

    def one(self) -> SRingElement:
        return self.scalar(1)

    def scalar(self, c) -> SRingElement:
        if not isinstance(c, CyclotomicNumber):
            c = CyclotomicNumber.from_rational(self.p, c)
        pad = [CyclotomicNumber.from_rational(self.p, 0)] * (self.p - 2)
        return SRingElement(self, [c] + pad)

    def s(self) -> SRingElement:
        if self.p == 2:
            # s^1 = a: s is the rational a itself
            return self.scalar(self.a)
        coeffs = [CyclotomicNumber.from_rational(self.p, 0)] * (self.p - 1)
        coeffs[1] = CyclotomicNumber.from_rational(self.p, 1)
        return SRingElement(self, coeffs)

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def div(self, x, y):
        return x / y

    def invert(self, x: SRingElement) -> SRingElement:
        """Inverse via extended Euclid against s^(p-1) - a; ZeroDivisor if stuck."""
        if x.is_zero():
            raise ZeroDivisor("inversion of zero", factor=self.modulus_coeffs())
        n = self.p - 1
        # polynomials over Q(zeta_p) as coefficient lists, constant first
        r0 = [-self.a_cyclo] + [CyclotomicNumber.from_rational(self.p, 0)] * (n - 1) + [
            CyclotomicNumber.from_rational(self.p, 1)
        ]
        r1 = list(x.coeffs)
        t0: list[CyclotomicNumber] = []
        t1 = [CyclotomicNumber.from_rational(self.p, 1)]
        zero = CyclotomicNumber.from_rational(self.p, 0)

        def trim(c):
            c = list(c)
            while c and c[-1].is_zero():
                c.pop()
            return c

        def sub(u, v):
            m = max(len(u), len(v))
            return trim(
                [
                    (u[i] if i < len(u) else zero) - (v[i] if i < len(v) else zero)
                    for i in range(m)
                ]
            )

        def mulp(u, v):
            if not u or not v:
                return []
            out = [zero] * (len(u) + len(v) - 1)
            for i, ui in enumerate(u):
                if not ui.is_zero():
                    for j, vj in enumerate(v):
                        out[i + j] = out[i + j] + ui * vj
            return trim(out)

        def divmodp(u, v):
            u = list(u)
            inv = v[-1].inverse()
            q = [zero] * max(len(u) - len(v) + 1, 0)
            while len(u) >= len(v) and u:
                if u[-1].is_zero():
                    u.pop()
                    continue
                shift = len(u) - len(v)
                c = u[-1] * inv
                q[shift] = c
                for j in range(len(v)):
                    u[shift + j] = u[shift + j] - c * v[j]
                u.pop()
            return trim(q), trim(u)

        r0, r1 = trim(r0), trim(r1)
        while r1:
            q, r = divmodp(r0, r1)
            t2 = sub(t0, mulp(q, t1))
            r0, r1 = r1, r
            t0, t1 = t1, t2
        if len(r0) != 1:
            raise ZeroDivisor(
                "relation s^(p-1) - a is reducible; hit a zero divisor",
                factor=tuple(r0),
            )
        c = r0[0].inverse()
        inv_coeffs = [t * c for t in t0] + [zero] * (n - len(t0))
        return SRingElement(self, inv_coeffs[:n])

    def modulus_coeffs(self):
        n = self.p - 1
        out = [CyclotomicNumber.from_rational(self.p, -self.a)]
        out += [CyclotomicNumber.from_rational(self.p, 0)] * (n - 1)
        out.append(CyclotomicNumber.from_rational(self.p, 1))
        return tuple(out)

    def residue_s(self, x: SRingElement, sbar: FieldElement) -> FieldElement:
        """Reduce coefficient-wise (zeta -> 1, mod p) and substitute s -> sbar.

        sbar must satisfy sbar^(p-1) = a mod p inside its own field.
        """
        K = sbar.field
        if K.p != self.p:
            raise BadResidueChoice("sbar lives in the wrong characteristic")
        if self.a % self.p == 0:
            raise BadResidueChoice("reduction needs p not dividing a")
        target = K.from_int(self.a % self.p)
        if sbar ** (self.p - 1) != target:
            raise BadResidueChoice(
                f"sbar^(p-1) != {self.a} mod {self.p} in {K!r}"
            )
        acc = K.zero()
        power = K.one()
        for i, c in enumerate(x.coeffs):
            if i > 0:
                power = power * sbar
            acc = acc + K.from_int(residue(c)) * power
        return acc


def s_arith(p: int, a: int) -> SRing:
    """Ring handle for Q(zeta_p)[s]/(s^(p-1) - a) with p not dividing a."""
    return SRing(p, a)
