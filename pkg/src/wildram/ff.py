"""Exact arithmetic in finite fields F_{p^k} and polynomial algebra over them.

A field is F_p[x]/(modulus) with an explicit monic irreducible modulus,
elements are coordinate vectors in the power basis of the modulus root,
and polynomials are coefficient lists (constant term first).  Everything
is exact and deterministic:

* when no modulus is supplied, the lexicographically smallest monic
  irreducible is chosen (coefficients read as base-p digits, leading
  term most significant), so serialized fields replay bit-for-bit;
* root finding scans the field exhaustively below a size threshold and
  switches to equal-degree splitting driven by a seeded deterministic
  generator above it;
* embeddings between fields are constructed once, cached, and routed
  through already-known smaller embeddings so that chains compose
  consistently within a session.

Heavy operations (Frobenius powering, kernels, reductions in fields of
large degree) run on numpy int64 arrays mod p; small fields use plain
tuple arithmetic.
"""

from __future__ import annotations

import hashlib
import math
import os
import random
from functools import reduce

import numpy as np

from . import _linalg
from .errors import (
    BudgetExceeded,
    DegreeMismatch,
    FieldMismatch,
    NoEmbedding,
    NotPrime,
    ReducibleModulus,
    ZeroBase,
    ZeroPolynomial,
)

DEFAULT_BUDGET = 1 << 16

# Above this extension degree, element products go through numpy.
_NUMPY_MUL_DEGREE = 24
# Struct-constant tensors are only built for small fields (k**3 entries).
_STRUCT_TENSOR_MAX_K = 8
# Work cap for exhaustive root scans: |K| * (deg + 1) elementary products.
_EXHAUST_WORK_CAP = 1 << 21


def enumeration_budget() -> int:
    """Active enumeration budget; WILDRAM_BUDGET overrides the default 2^16."""
    raw = os.environ.get("WILDRAM_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any field size used here."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _stable_seed(*parts) -> int:
    blob = repr(parts).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


# ---------------------------------------------------------------------------
# Polynomials over the prime field, as int tuples (constant first).
# Only used for modulus bookkeeping; everything user-facing is FqPoly.
# ---------------------------------------------------------------------------

def _fp_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _fp_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_divmod(a, b, p):
    a = [int(v) for v in a]
    db, dl = len(b) - 1, int(b[-1])
    inv = pow(dl, -1, p)
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - 1 - db
        coef = a[-1] * inv % p
        q[shift] = coef
        for j in range(db + 1):
            a[shift + j] = (a[shift + j] - coef * b[j]) % p
        a.pop()
    return _fp_trim(q), _fp_trim(a)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = tuple(c * inv % p for c in a)
    return a


def _fp_frobenius_rows(mu: tuple[int, ...], p: int) -> np.ndarray:
    """Rows x^(i*p) mod mu for 0 <= i < deg(mu), as a (k, k) int64 matrix."""
    k = len(mu) - 1
    rows = np.zeros((k, k), dtype=np.int64)
    cur = [0] * k
    cur[0] = 1
    rows[0, 0] = 1
    for i in range(1, k):
        ext = [0] * p + cur  # multiply by x^p
        for top in range(len(ext) - 1, k - 1, -1):
            c = ext[top]
            if c:
                ext[top] = 0
                for j in range(k):
                    ext[top - k + j] = (ext[top - k + j] - c * mu[j]) % p
        cur = [v % p for v in ext[:k]]
        rows[i] = cur
    return rows


def _fp_is_irreducible(mu: tuple[int, ...], p: int) -> bool:
    """Rabin's test, with the Frobenius action run as matrix iteration."""
    k = len(mu) - 1
    if k == 1:
        return True
    if mu[0] == 0:  # divisible by x
        return False
    if _fp_gcd(mu, _fp_trim([(i * c) % p for i, c in enumerate(mu)][1:]), p) != (1,):
        return False  # not squarefree
    frob = _fp_frobenius_rows(mu, p)
    # h_i = x^(p^i) mod mu as vectors; h_{i+1} = frob.T @ h_i
    h = np.zeros(k, dtype=np.int64)
    if p < k:
        h[p] = 1
    else:
        h[:] = frob[1]
    needed = {k // q for q in _prime_divisors(k)}
    x_vec = np.zeros(k, dtype=np.int64)
    x_vec[1] = 1
    cur = h.copy()
    step = 1
    checks = {}
    while step < k:
        if step in needed:
            checks[step] = cur.copy()
        cur = (frob.T @ cur) % p
        step += 1
    if not np.array_equal(cur, x_vec):
        return False
    for d, vec in checks.items():
        diff = _fp_trim([int(v) for v in (vec - x_vec) % p])
        if _fp_gcd(mu, diff, p) != (1,):
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _small_irreducibles(p: int, max_deg: int) -> list[tuple[int, ...]]:
    # For max_deg <= 3 trial division by smaller irreducibles is a full test.
    out: list[tuple[int, ...]] = []
    for deg in range(1, max_deg + 1):
        for n in range(p**deg):
            mu = tuple((n // p**i) % p for i in range(deg)) + (1,)
            if any(
                len(g) - 1 <= deg // 2 and not _fp_divmod(mu, g, p)[1] for g in out
            ):
                continue
            out.append(mu)
    return out


def _search_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k over F_p in base-p digit order."""
    if k == 1:
        return (0, 1)
    trial = _small_irreducibles(p, min(3, k - 1))
    for n in range(p**k):
        coeffs = [(n // p ** (k - 1 - j)) % p for j in range(k)]
        mu = tuple(reversed(coeffs)) + (1,)
        if mu[0] == 0:
            continue
        if any(not _fp_divmod(mu, g, p)[1] for g in trial):
            continue
        if _fp_is_irreducible(mu, p):
            return mu
    raise ReducibleModulus(f"no irreducible of degree {k} over F_{p}")  # unreachable


# ---------------------------------------------------------------------------
# Fields and elements
# ---------------------------------------------------------------------------

class FiniteField:
    """F_{p^k} = F_p[x]/(modulus); immutable, compared by (p, k, modulus)."""

    __slots__ = ("p", "k", "modulus", "_cache")

    def __init__(self, p: int, k: int, modulus=None, _trusted=False):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if k < 1:
            raise DegreeMismatch("extension degree must be positive")
        if modulus is None:
            modulus = _search_irreducible(p, k)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise DegreeMismatch(
                    f"modulus must be monic of degree {k}, got {modulus}"
                )
            if not _trusted and not _fp_is_irreducible(modulus, p):
                raise ReducibleModulus(f"{modulus} is reducible over F_{p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("FiniteField is immutable")

    # -- identity ----------------------------------------------------------

    @property
    def order(self) -> int:
        return self.p**self.k

    def key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    # -- construction of elements -------------------------------------------

    def element(self, coords) -> FieldElement:
        c = tuple(int(v) % self.p for v in coords)
        if len(c) != self.k:
            raise DegreeMismatch(f"need {self.k} coordinates, got {len(c)}")
        return FieldElement(self, c)

    def from_int(self, n: int) -> FieldElement:
        return FieldElement(self, (n % self.p,) + (0,) * (self.k - 1))

    def zero(self) -> FieldElement:
        return self.from_int(0)

    def one(self) -> FieldElement:
        return self.from_int(1)

    def gen(self) -> FieldElement:
        """The class of x, a root of the modulus."""
        if self.k == 1:
            return self.zero()
        return FieldElement(self, (0, 1) + (0,) * (self.k - 2))

    def element_from_index(self, n: int) -> FieldElement:
        coords = tuple((n // self.p ** (self.k - 1 - j)) % self.p for j in range(self.k))
        return FieldElement(self, coords)

    def elements(self):
        """All field elements in lexicographic coordinate order."""
        for n in range(self.order):
            yield self.element_from_index(n)

    # -- cached numpy structure ---------------------------------------------

    def _reduction(self) -> np.ndarray:
        """Rows x^(k+j) mod modulus for 0 <= j < k-1."""
        red = self._cache.get("red")
        if red is None:
            p, k, mu = self.p, self.k, self.modulus
            red = np.zeros((max(k - 1, 0), k), dtype=np.int64)
            cur = [(-mu[j]) % p for j in range(k)]  # x^k mod mu
            for j in range(k - 1):
                red[j] = cur
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    for t in range(k):
                        cur[t] = (cur[t] - top * mu[t]) % p
            self._cache["red"] = red
        return red

    def frobenius_matrix(self) -> np.ndarray:
        """Matrix of c -> c^p on coordinates (columns are basis images)."""
        mat = self._cache.get("frob")
        if mat is None:
            mat = _fp_frobenius_rows(self.modulus, self.p).T.copy()
            self._cache["frob"] = mat
        return mat

    def struct_tensor(self) -> np.ndarray | None:
        """S[a, b, c] = coordinate a of (basis_b * basis_c); small fields only."""
        if self.k > _STRUCT_TENSOR_MAX_K:
            return None
        s = self._cache.get("struct")
        if s is None:
            k = self.k
            s = np.zeros((k, k, k), dtype=np.int64)
            for b in range(k):
                eb = tuple(1 if t == b else 0 for t in range(k))
                for c in range(k):
                    ec = tuple(1 if t == c else 0 for t in range(k))
                    s[:, b, c] = self._mul_coords(eb, ec)
            self._cache["struct"] = s
        return s

    def mult_matrix(self, elem: FieldElement) -> np.ndarray:
        """Matrix of multiplication by elem on coordinates."""
        k = self.k
        mat = np.zeros((k, k), dtype=np.int64)
        cur = elem.coords
        mat[:, 0] = cur
        for j in range(1, k):
            cur = self._shift_coords(cur)
            mat[:, j] = cur
        return mat

    # -- coordinate arithmetic ----------------------------------------------

    def _shift_coords(self, c):
        """Multiply by x and reduce."""
        p, k, mu = self.p, self.k, self.modulus
        top = c[-1]
        out = [0] + list(c[:-1])
        if top:
            for t in range(k):
                out[t] = (out[t] - top * mu[t]) % p
        return tuple(v % p for v in out)

    def _mul_coords(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        if k <= _NUMPY_MUL_DEGREE:
            conv = [0] * (2 * k - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        conv[i + j] += ai * bj
            red = self._reduction()
            out = conv[:k]
            for j in range(k - 1):
                c = conv[k + j]
                if c:
                    row = red[j]
                    for t in range(k):
                        out[t] += c * int(row[t])
            return tuple(v % p for v in out)
        conv = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = conv[:k].copy()
        tail = conv[k:]
        if tail.size:
            out += tail @ self._reduction()[: tail.size]
        return tuple(int(v) for v in out % p)

    def _inv_coords(self, a):
        p, k = self.p, self.k
        if all(v == 0 for v in a):
            raise ZeroDivisionError("inversion of zero field element")
        if k == 1:
            return (pow(a[0], -1, p),)
        if k > _NUMPY_MUL_DEGREE:
            mat = self.mult_matrix(FieldElement(self, tuple(a)))
            e0 = np.zeros(k, dtype=np.int64)
            e0[0] = 1
            sol = _linalg.solve(mat, e0, p)
            return tuple(int(v) for v in sol)
        # extended Euclid in F_p[x]: maintain t_i with t_i * a = r_i (mod modulus)
        r0, r1 = self.modulus, _fp_trim(list(a))
        t0, t1 = (), (1,)
        while r1:
            q, r = _fp_divmod(r0, r1, p)
            qt = _fp_mul(q, t1, p)
            m = max(len(t0), len(qt))
            t2 = _fp_trim(
                [
                    ((t0[i] if i < len(t0) else 0) - (qt[i] if i < len(qt) else 0)) % p
                    for i in range(m)
                ]
            )
            r0, r1 = r1, r
            t0, t1 = t1, t2
        # r0 is a nonzero constant: modulus is irreducible and a != 0
        lead_inv = pow(r0[-1], -1, p)
        inv = [0] * k
        for i, v in enumerate(t0):
            inv[i] = v * lead_inv % p
        return tuple(inv)


class FieldElement:
    """Immutable element of a FiniteField, hashable, with exact arithmetic."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FiniteField, coords: tuple[int, ...]):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field} vs {self.field}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coords, o.coords))
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coords, o.coords))
        )

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coords))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field._mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field._inv_coords(self.coords))

    def frobenius(self, j: int = 1) -> FieldElement:
        """p^j-th power via the cached Frobenius matrix."""
        mat = _linalg.matpow(self.field.frobenius_matrix(), j % self.field.k, self.field.p)
        vec = (mat @ np.asarray(self.coords, dtype=np.int64)) % self.field.p
        return FieldElement(self.field, tuple(int(v) for v in vec))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return (
            isinstance(other, FieldElement)
            and other.field == self.field
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((self.field.key(), self.coords))

    def sort_key(self):
        return self.coords

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroBase("order of zero")
        n = self.field.order - 1
        order = n
        for q in _prime_divisors(n):
            while order % q == 0 and self ** (order // q) == self.field.one():
                order //= q
        return order

    def degree_over_prime(self) -> int:
        """Size of the Frobenius orbit: degree of the element over F_p."""
        cur = self.frobenius()
        d = 1
        while cur != self:
            cur = cur.frobenius()
            d += 1
        return d

    def __repr__(self):
        return f"{list(self.coords)}:{self.field!r}"


# ---------------------------------------------------------------------------
# Polynomials over a field
# ---------------------------------------------------------------------------

class FqPoly:
    """Dense univariate polynomial over a FiniteField, constant term first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs):
        cs = list(coeffs)
        for i, c in enumerate(cs):
            if isinstance(c, int):
                cs[i] = field.from_int(c)
            elif c.field != field:
                raise FieldMismatch("coefficient from a different field")
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("FqPoly is immutable")

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(v) for v in ints])

    @classmethod
    def x(cls, field):
        return cls.from_ints(field, [0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, FqPoly)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field.key(), tuple(c.coords for c in self.coeffs)))

    def __getitem__(self, i: int) -> FieldElement:
        return self.coeffs[i] if i < len(self.coeffs) else self.field.zero()

    def lead(self) -> FieldElement:
        if self.is_zero():
            raise ZeroPolynomial("leading coefficient of zero")
        return self.coeffs[-1]

    def __add__(self, other):
        if not isinstance(other, FqPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return FqPoly(self.field, [self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        if not isinstance(other, FqPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return FqPoly(self.field, [self[i] - other[i] for i in range(n)])

    def __neg__(self):
        return FqPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return FqPoly(self.field, [c * other for c in self.coeffs])
        if not isinstance(other, FqPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return FqPoly(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return FqPoly(self.field, out)

    __rmul__ = __mul__

    def __divmod__(self, other: FqPoly):
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        if self.degree < other.degree:
            return FqPoly(self.field, []), self
        inv = other.lead().inverse()
        rem = list(self.coeffs)
        db = other.degree
        quo = [self.field.zero()] * (len(rem) - db)
        for top in range(len(rem) - 1, db - 1, -1):
            c = rem[top]
            if c.is_zero():
                continue
            c = c * inv
            quo[top - db] = c
            for j in range(db + 1):
                rem[top - db + j] = rem[top - db + j] - c * other.coeffs[j]
        return FqPoly(self.field, quo), FqPoly(self.field, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> FqPoly:
        if self.is_zero():
            return self
        return self * self.lead().inverse()

    def gcd(self, other: FqPoly) -> FqPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> FqPoly:
        return FqPoly(
            self.field,
            [self.coeffs[i] * i for i in range(1, len(self.coeffs))],
        )

    def evaluate(self, x: FieldElement) -> FieldElement:
        if x.field != self.field:
            raise FieldMismatch("evaluate: embed the polynomial first")
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: FqPoly) -> FqPoly:
        acc = FqPoly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * other + FqPoly(self.field, [c])
        return acc

    def shift(self, n: int) -> FqPoly:
        """Multiply by z^n."""
        if self.is_zero():
            return self
        return FqPoly(self.field, [self.field.zero()] * n + list(self.coeffs))

    def map_coeffs(self, fn) -> FqPoly:
        return FqPoly(self.field, [fn(c) for c in self.coeffs])

    def map_into(self, target: FiniteField) -> FqPoly:
        return FqPoly(target, [embed(c, target) for c in self.coeffs])

    def pow_mod(self, e: int, modulus: FqPoly) -> FqPoly:
        result = FqPoly.from_ints(self.field, [1])
        base = self % modulus
        while e > 0:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def to_int_lists(self):
        return [list(c.coords) for c in self.coeffs]

    def __repr__(self):
        if self.is_zero():
            return "FqPoly(0)"
        return f"FqPoly(deg {self.degree} over {self.field!r})"


# ---------------------------------------------------------------------------
# Frobenius powering mod a fixed polynomial (the DDF/root-finding engine)
# ---------------------------------------------------------------------------

class _FrobMod:
    """Computes h -> h^p mod g cheaply via the table of x^(ip) mod g.

    Over F_q the p-th power map on F_q[x]/(g) is semilinear: coefficients
    get their p-th power (an F_p-linear map on coordinates) and x^i turns
    into x^(ip), which is reduced once and tabulated.
    """

    def __init__(self, g: FqPoly):
        self.g = g.monic()
        self.field = g.field
        n = self.g.degree
        self.n = n
        rows = []
        cur = FqPoly.from_ints(self.field, [1])
        rows.append(cur)
        for _ in range(1, n):
            cur = cur.shift(self.field.p) % self.g
            rows.append(cur)
        self.rows = rows
        self._np = None
        if self.field.k <= _STRUCT_TENSOR_MAX_K:
            k = self.field.k
            table = np.zeros((n, n, k), dtype=np.int64)
            for i, r in enumerate(rows):
                for e, c in enumerate(r.coeffs):
                    table[i, e] = c.coords
            self._np = (table, self.field.struct_tensor(), self.field.frobenius_matrix())

    def apply_p(self, h: FqPoly) -> FqPoly:
        """h^p mod g for deg(h) < deg(g)."""
        if self._np is not None:
            table, struct, frob = self._np
            k = self.field.k
            arr = np.zeros((self.n, k), dtype=np.int64)
            for i, c in enumerate(h.coeffs):
                arr[i] = c.coords
            arr = (arr @ frob.T) % self.field.p
            out = np.einsum("ib,iec,abc->ea", arr, table, struct) % self.field.p
            return FqPoly(
                self.field,
                [self.field.element(tuple(int(v) for v in out[e])) for e in range(self.n)],
            )
        acc = FqPoly(self.field, [])
        for i, c in enumerate(h.coeffs):
            if not c.is_zero():
                acc = acc + self.rows[i] * c.frobenius()
        return acc

    def apply_q(self, h: FqPoly) -> FqPoly:
        for _ in range(self.field.k):
            h = self.apply_p(h)
        return h

    def power_of_x(self, e_log_q: int) -> FqPoly:
        """x^(q^e) mod g."""
        h = FqPoly.x(self.field) % self.g
        for _ in range(e_log_q):
            h = self.apply_q(h)
        return h


# ---------------------------------------------------------------------------
# Public field constructors
# ---------------------------------------------------------------------------

_FIELD_REGISTRY: dict[tuple, FiniteField] = {}


def make_field(p: int, k: int, modulus=None) -> FiniteField:
    """Field of order p^k; without a modulus the canonical one is searched."""
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    key = (p, k, modulus)
    f = _FIELD_REGISTRY.get(key)
    if f is None:
        f = FiniteField(p, k, modulus)
        _FIELD_REGISTRY[key] = f
        _FIELD_REGISTRY.setdefault((p, k, f.modulus), f)
    return f


def GF(p: int, k: int = 1) -> FiniteField:
    """Canonical field of order p^k (deterministic modulus)."""
    return make_field(p, k)


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

_EMBED_CACHE: dict[tuple, np.ndarray] = {}


def _roots_of_fp_poly(mu: tuple[int, ...], target: FiniteField) -> list[FieldElement]:
    """All roots in target of an irreducible mu over F_p with deg | target.k."""
    a = len(mu) - 1
    beta = _one_root_of_fp_poly(mu, target)
    orbit = [beta]
    cur = beta.frobenius()
    while cur != beta:
        orbit.append(cur)
        cur = cur.frobenius()
    assert len(orbit) == a
    return sorted(orbit, key=lambda e: e.sort_key())


def _one_root_of_fp_poly(mu: tuple[int, ...], target: FiniteField) -> FieldElement:
    a = len(mu) - 1
    p = target.p
    if target.order <= enumeration_budget():
        for elem in target.elements():
            acc = target.zero()
            for c in reversed(mu):
                acc = acc * elem + target.from_int(c)
            if acc.is_zero():
                return elem
        raise NoEmbedding(f"no root of {mu} in {target!r}")
    # Large target: locate the subfield of order p^a, present mu over an
    # abstract copy of it, split off one root there, and map back.
    frob = target.frobenius_matrix()
    mat = (_linalg.matpow(frob, a, p) - np.eye(target.k, dtype=np.int64)) % p
    sub_basis = _linalg.nullspace(mat, p)
    assert sub_basis.shape[0] == a
    gamma = None
    for i in range(sub_basis.shape[0]):
        cand = target.element(tuple(int(v) for v in sub_basis[i]))
        if not cand.is_zero() and cand.degree_over_prime() == a:
            gamma = cand
            break
    if gamma is None:
        acc = target.zero()
        for i in range(sub_basis.shape[0]):
            acc = acc + target.element(tuple(int(v) for v in sub_basis[i]))
            if acc.degree_over_prime() == a:
                gamma = acc
                break
    if gamma is None:
        rng = random.Random(_stable_seed("gamma", mu, target.key()))
        while gamma is None:
            coefs = [rng.randrange(p) for _ in range(a)]
            acc = target.zero()
            for c, i in zip(coefs, range(a)):
                acc = acc + target.element(tuple(int(v) for v in sub_basis[i])) * c
            if not acc.is_zero() and acc.degree_over_prime() == a:
                gamma = acc
    powers = [target.one()]
    for _ in range(a):
        powers.append(powers[-1] * gamma)
    stack = np.array([e.coords for e in powers], dtype=np.int64)
    dep = _linalg.nullspace(stack.T, p)  # rows: dependencies among 1..gamma^a
    minpoly = None
    for row in dep:
        if row[a] != 0:
            inv = pow(int(row[a]), -1, p)
            minpoly = tuple(int(v) * inv % p for v in row)
            break
    assert minpoly is not None and len(minpoly) == a + 1
    ab = FiniteField(p, a, minpoly, _trusted=True)
    mu_poly = FqPoly.from_ints(ab, mu)
    root = _cz_one_root(mu_poly, ab)
    beta = target.zero()
    for c, pw in zip(root.coords, powers):
        beta = beta + pw * c
    return beta


def _cz_one_root(f: FqPoly, K: FiniteField) -> FieldElement:
    """One root in K of f, which must split completely over K; seeded CZ."""
    rng = random.Random(_stable_seed("cz", f.to_int_lists(), K.key()))
    cur = f.monic()
    while cur.degree > 1:
        r = FqPoly(
            K, [K.element_from_index(rng.randrange(K.order)) for _ in range(cur.degree)]
        )
        if r.is_zero():
            continue
        if K.p == 2:
            # absolute-trace splitting: Tr(r) = r + r^2 + ... + r^(2^(k-1))
            tr = r % cur
            term = r % cur
            for _ in range(K.k - 1):
                term = (term * term) % cur
                tr = tr + term
            g = cur.gcd(tr)
        else:
            s = r.pow_mod((K.order - 1) // 2, cur)
            g = cur.gcd(s - FqPoly.from_ints(K, [1]))
        if 0 < g.degree < cur.degree:
            cur = g if g.degree <= cur.degree - g.degree else cur // g
    return -cur.coeffs[0] / cur.coeffs[1]


def embedding_matrix(src: FiniteField, target: FiniteField) -> np.ndarray:
    """Coordinate matrix of the session-fixed embedding src -> target."""
    if src.p != target.p:
        raise NoEmbedding("different characteristics")
    if target.k % src.k != 0:
        raise NoEmbedding(f"{src.k} does not divide {target.k}")
    key = (src.key(), target.key())
    mat = _EMBED_CACHE.get(key)
    if mat is not None:
        return mat
    if src.key() == target.key():
        mat = np.eye(src.k, dtype=np.int64)
    else:
        mat = _compose_via_cache(src, target)
    if mat is None:
        if src.k == 1:
            mat = np.zeros((target.k, 1), dtype=np.int64)
            mat[0, 0] = 1
        else:
            beta = _roots_of_fp_poly(src.modulus, target)[0]
            mat = np.zeros((target.k, src.k), dtype=np.int64)
            cur = target.one()
            mat[:, 0] = cur.coords
            for j in range(1, src.k):
                cur = cur * beta
                mat[:, j] = cur.coords
    _EMBED_CACHE[key] = mat
    return mat


def _compose_via_cache(src: FiniteField, target: FiniteField) -> np.ndarray | None:
    # Route through an already-chosen intermediate so towers stay coherent.
    for (a_key, b_key), m1 in list(_EMBED_CACHE.items()):
        if a_key == src.key() and b_key != target.key():
            mid_k = b_key[1]
            if target.k % mid_k == 0 and mid_k > src.k:
                m2 = _EMBED_CACHE.get((b_key, target.key()))
                if m2 is not None:
                    return _linalg.matmul(m2, m1, src.p)
    return None


def embed(x: FieldElement, target: FiniteField) -> FieldElement:
    """Image of x under the fixed embedding of its field into target."""
    if x.field == target:
        return x
    mat = embedding_matrix(x.field, target)
    vec = (mat @ np.asarray(x.coords, dtype=np.int64)) % target.p
    return FieldElement(target, tuple(int(v) for v in vec))


def common_overfield(*fields: FiniteField) -> FiniteField:
    """Canonical field containing embeddings of all the given fields."""
    p = fields[0].p
    k = reduce(math.lcm, [f.k for f in fields], 1)
    return GF(p, k)


# ---------------------------------------------------------------------------
# Factorization-flavored operations
# ---------------------------------------------------------------------------

def _pth_root_coeff(c: FieldElement) -> FieldElement:
    # Frobenius is invertible on a finite field; its inverse is p^(k-1)-power.
    return c.frobenius(c.field.k - 1)


def _pth_root_poly(f: FqPoly) -> FqPoly:
    p = f.field.p
    out = []
    for i in range(0, len(f.coeffs), p):
        out.append(_pth_root_coeff(f.coeffs[i]))
        for j in range(1, p):
            if i + j < len(f.coeffs) and not f.coeffs[i + j].is_zero():
                raise ZeroPolynomial("polynomial is not a p-th power")  # internal
    return FqPoly(f.field, out)


def squarefree_factor(f: FqPoly) -> list[tuple[FqPoly, int]]:
    """Squarefree decomposition [(g_i, e_i)] with monic pairwise-coprime g_i.

    Inseparable input (a polynomial in z^p) is handled by repeated p-th
    root descent; multiplicities multiply by p at each descent.
    """
    if f.is_zero():
        raise ZeroPolynomial("squarefree decomposition of zero")
    p = f.field.p
    f = f.monic()
    factors: list[tuple[FqPoly, int]] = []
    n = 1
    while True:
        df = f.derivative()
        sqf = False
        if not df.is_zero():
            g = f.gcd(df)
            h = f // g
            i = 1
            one = FqPoly.from_ints(f.field, [1])
            while h != one:
                gg = g.gcd(h)
                hh = h // gg
                if hh.degree > 0:
                    factors.append((hh, i * n))
                g, h, i = g // gg, gg, i + 1
            if g == one:
                sqf = True
            else:
                f = g
        if sqf or f.degree == 0:
            break
        f = _pth_root_poly(f)
        n *= p
    factors.sort(key=lambda t: (t[0].degree, [c.coords for c in t[0].coeffs], t[1]))
    return factors


def _exhaustive_distinct_roots(g: FqPoly, K: FiniteField) -> list[FieldElement]:
    roots = []
    for elem in K.elements():
        if g.evaluate(elem).is_zero():
            roots.append(elem)
    return roots


def _linear_part(g: FqPoly, K: FiniteField) -> FqPoly:
    """gcd(g, z^|K| - z): the product of (z - r) over the roots r in K."""
    g = g.monic()
    if g.degree == 1:
        return g
    fm = _FrobMod(g)
    h = fm.power_of_x(1)  # z^|K| mod g
    return g.gcd(h - FqPoly.x(K))


def _split_linear(ell: FqPoly, K: FiniteField) -> list[FieldElement]:
    """All roots of a product of distinct linear factors, via seeded CZ."""
    roots = []
    stack = [ell.monic()]
    rng = random.Random(_stable_seed("split", ell.to_int_lists(), K.key()))
    while stack:
        cur = stack.pop()
        if cur.degree == 0:
            continue
        if cur.degree == 1:
            roots.append(-cur.coeffs[0] / cur.coeffs[1])
            continue
        if not cur.coeffs[0]:
            roots.append(K.zero())
            cur = cur // FqPoly.x(K)
            stack.append(cur)
            continue
        r = FqPoly(
            K, [K.element_from_index(rng.randrange(K.order)) for _ in range(cur.degree)]
        )
        if r.degree < 1 and K.p != 2:
            r = r + FqPoly.x(K)
        if K.p == 2:
            tr = r % cur
            term = r % cur
            e = K.k
            for _ in range(e - 1):
                term = (term * term) % cur
                tr = tr + term
            gpart = cur.gcd(tr)
        else:
            s = r.pow_mod((K.order - 1) // 2, cur)
            gpart = cur.gcd(s - FqPoly.from_ints(K, [1]))
        if 0 < gpart.degree < cur.degree:
            stack.append(gpart)
            stack.append(cur // gpart)
        else:
            stack.append(cur)
    return roots


def roots_in(f: FqPoly, K: FiniteField) -> list[tuple[FieldElement, int]]:
    """Roots of f lying in K with multiplicities, sorted by coordinates.

    Exhaustive evaluation below the field-size threshold, equal-degree
    splitting (seeded, deterministic) above it.
    """
    if f.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    fe = f if f.field == K else f.map_into(K)
    if fe.degree < 1:
        return []
    out: list[tuple[FieldElement, int]] = []
    for part, mult in squarefree_factor(fe):
        if part.degree < 1:
            continue
        if K.order <= enumeration_budget() and K.order * (part.degree + 1) <= _EXHAUST_WORK_CAP:
            rs = _exhaustive_distinct_roots(part, K)
        else:
            ell = _linear_part(part, K)
            rs = _split_linear(ell, K) if ell.degree >= 1 else []
        out.extend((r, mult) for r in rs)
    out.sort(key=lambda t: t[0].sort_key())
    return out


def distinct_degree_profile(f: FqPoly) -> dict[int, int]:
    """Map e -> total degree of the product of irreducible factors of degree e.

    f must be squarefree.  The Frobenius iteration runs modulo the original
    polynomial; factors are peeled off a shrinking cofactor.
    """
    f = f.monic()
    field = f.field
    res: dict[int, int] = {}
    if f.degree < 1:
        return res
    fm = _FrobMod(f)
    h = FqPoly.x(field) % f
    rem = f
    e = 0
    x = FqPoly.x(field)
    while rem.degree > 0:
        e += 1
        if 2 * e > rem.degree:
            res[rem.degree] = res.get(rem.degree, 0) + rem.degree
            break
        h = fm.apply_q(h)
        g = rem.gcd(h - x)
        if g.degree > 0:
            res[e] = res.get(e, 0) + g.degree
            rem = rem // g
    return res


def splitting_degree(f: FqPoly) -> int:
    """Least e with all roots of f inside F_{q^e}: lcm of factor degrees."""
    if f.is_zero():
        raise ZeroPolynomial("splitting degree of zero")
    if f.degree < 1:
        return 1
    radical = FqPoly.from_ints(f.field, [1])
    for part, _ in squarefree_factor(f):
        radical = radical * part
    profile = distinct_degree_profile(radical)
    return reduce(math.lcm, profile.keys(), 1)


def solve_power(a: FieldElement, n: int) -> tuple[FieldElement, FiniteField]:
    """Smallest-extension solution b of b^n = a, lexicographically least.

    Returns (b, K) with K the smallest-degree extension of a's field that
    contains such a b.
    """
    if a.is_zero():
        raise ZeroBase("cannot extract a root of zero")
    if n < 1:
        raise DegreeMismatch("exponent must be positive")
    F = a.field
    q = F.order
    # b exists in F_{q^j} iff a^((q^j - 1)/gcd(n, q^j - 1)) = 1.
    for j in range(1, 4 * n * F.k + 4):
        m = q**j - 1
        g = math.gcd(n, m)
        if a ** (m // g) == F.one():
            K = GF(F.p, F.k * j)
            ae = embed(a, K)
            poly = FqPoly(K, [-ae] + [K.zero()] * (n - 1) + [K.one()])
            roots = roots_in(poly, K)
            assert roots, "criterion promised a root"
            return roots[0][0], K
    raise BudgetExceeded(f"no {n}-th root of {a!r} found within the degree bound")


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def field_to_json(F: FiniteField) -> dict:
    return {"p": F.p, "k": F.k, "modulus": list(F.modulus)}


def field_from_json(d: dict) -> FiniteField:
    return make_field(int(d["p"]), int(d["k"]), d.get("modulus"))


def element_to_json(x: FieldElement) -> list[int]:
    return list(x.coords)


def element_from_json(F: FiniteField, data) -> FieldElement:
    return F.element(data)


def poly_to_json(f: FqPoly) -> list[list[int]]:
    return [list(c.coords) for c in f.coeffs]


def poly_from_json(F: FiniteField, data) -> FqPoly:
    return FqPoly(F, [F.element(c) for c in data])
