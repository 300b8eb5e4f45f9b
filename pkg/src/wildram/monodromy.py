"""Geometric monodromy of additive polynomials and the lifting obstruction.

The fiber of f^n over a transcendental basepoint is a torsor over the root
space Z_n: fixing one preimage theta_n, the others are theta_n + alpha for
alpha in Z_n, and the Galois action is translation.  The levels therefore
carry a free transitive action of an elementary abelian p-group of rank
m*n, and the tower projections are alpha -> f(alpha).

Characteristic zero cannot reproduce this: a polynomial of degree d has a
cyclic inertia group of order d over infinity (the d-adic odometer), which
has elements of unbounded order, and for degree p^M with M >= 3 the
critical-point count 2(p^M - 1)/(p - 1) is not divisible by p^(M-1), so an
elementary abelian monodromy group of exponent p cannot act freely.  Both
obstructions are computed exactly here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .addpoly import AdditivePoly, RootSpace, is_separable, iterate, root_space
from .dynsys import ProjPoint, RationalMap, ram_profile
from .errors import BudgetExceeded, Inseparable, NotPolynomial, NotPrime
from .ff import enumeration_budget, is_prime


# ---------------------------------------------------------------------------
# Finite group actions, explicitly
# ---------------------------------------------------------------------------

class GroupAction:
    """A finite group acting on a finite set, stored as permutations.

    ``elements`` are hashable group labels, ``points`` hashable set labels,
    and ``perms[g]`` maps each point to its image under g.
    """

    def __init__(self, elements, points, perms, compose=None):
        self.elements = list(elements)
        self.points = list(points)
        self.perms = perms
        self._compose = compose

    @classmethod
    def translation(cls, roots, add=None):
        """The regular action x -> x + a of an additive group on itself."""
        elems = list(roots)
        if add is None:
            add = lambda a, x: a + x
        perms = {a: {x: add(a, x) for x in elems} for a in elems}
        return cls(elems, list(elems), perms)

    @classmethod
    def symmetric(cls, n: int):
        """The natural action of S_n on n points."""
        pts = list(range(n))
        elems = list(permutations(pts))
        perms = {g: {i: g[i] for i in pts} for g in elems}
        return cls(elems, pts, perms)

    def stabilizer_orders(self) -> dict:
        """Point -> order of its stabilizer subgroup."""
        out = {}
        for x in self.points:
            out[x] = sum(1 for g in self.elements if self.perms[g][x] == x)
        return out

    def is_free(self) -> bool:
        return all(v == 1 for v in self.stabilizer_orders().values())

    def is_transitive(self) -> bool:
        if not self.points:
            return True
        x0 = self.points[0]
        orbit = {self.perms[g][x0] for g in self.elements}
        return len(orbit) == len(self.points)

    def element_order(self, g) -> int:
        perm = self.perms[g]
        order = 1
        cur = perm
        while any(cur[x] != x for x in self.points):
            cur = {x: perm[cur[x]] for x in self.points}
            order += 1
        return order


def is_free(action: GroupAction) -> bool:
    """Every point stabilizer trivial."""
    return action.is_free()


def stabilizer_orders(action: GroupAction) -> list[int]:
    return sorted(action.stabilizer_orders().values())


# ---------------------------------------------------------------------------
# Monodromy levels and towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonodromyLevel:
    """Level n of the tower: Z_n acting on the fiber model by translation.

    The basepoint label theta_n corresponds to 0; the group is Z_n under
    addition and acts freely and transitively, so |group| = |fiber|.
    """

    poly: AdditivePoly
    level: int
    space: RootSpace
    action: GroupAction

    @property
    def order(self) -> int:
        return len(self.space.all_roots)

    def abelian_invariants(self) -> tuple[int, ...]:
        """Invariant factors, all p: exponent p is verified exhaustively."""
        p = self.poly.field.p
        for g in self.action.elements:
            o = self.action.element_order(g)
            assert o in (1, p), f"element of order {o} in an exponent-{p} group"
        rank = self.space.dimension
        return (p,) * rank


def monodromy_level(f: AdditivePoly, n: int, budget: int | None = None,
                    ambient=None) -> MonodromyLevel:
    """Build level n with verified transitivity and freeness."""
    if not is_separable(f):
        raise Inseparable("monodromy needs a separable additive polynomial")
    zs = root_space(f, n, budget=budget, ambient=ambient)
    action = GroupAction.translation(list(zs.all_roots))
    assert action.is_transitive(), "translation action must be transitive"
    assert action.is_free(), "translation action must be free"
    assert len(action.elements) == len(action.points)
    return MonodromyLevel(f, n, zs, action)


@dataclass(frozen=True)
class TowerProjection:
    """alpha -> f(alpha) from Z_n onto Z_(n-1): surjective, kernel Z_1."""

    source_level: int
    target_level: int
    mapping: dict  # element of Z_n -> element of Z_(n-1)
    kernel_size: int


@dataclass(frozen=True)
class Tower:
    poly: AdditivePoly
    levels: tuple[MonodromyLevel, ...]
    projections: tuple[TowerProjection, ...]

    @property
    def depth(self) -> int:
        return len(self.levels)


def tower(f: AdditivePoly, N: int, budget: int | None = None) -> Tower:
    """Levels 1..N in a common ambient field with verified projections.

    All levels are realized inside the splitting field of f^N so that the
    projection alpha -> f(alpha) is literal evaluation; surjectivity,
    kernel size p^m, and equivariance are checked exhaustively.
    """
    if not is_separable(f):
        raise Inseparable("towers need a separable additive polynomial")
    if budget is None:
        budget = enumeration_budget()
    top = root_space(f, N, budget=budget)
    K = top.field
    levels = []
    for n in range(1, N + 1):
        zs = top if n == N else root_space(f, n, budget=budget, ambient=K)
        action = GroupAction.translation(list(zs.all_roots))
        assert action.is_transitive() and action.is_free()
        levels.append(MonodromyLevel(f, n, zs, action))
    fK = f.map_into(K)
    p = f.field.p
    m = f.frobenius_degree
    projections = []
    for n in range(2, N + 1):
        upper = levels[n - 1]
        lower = levels[n - 2]
        lower_set = set(lower.space.all_roots)
        mapping = {}
        kernel = 0
        for alpha in upper.space.all_roots:
            img = fK.evaluate(alpha)
            assert img in lower_set, "projection left the lower root space"
            mapping[alpha] = img
            if img.is_zero():
                kernel += 1
        assert set(mapping.values()) == lower_set, "projection must be onto"
        assert kernel == p**m, f"kernel size {kernel} != p^m"
        # equivariance: f(x + a) = f(x) + f(a)
        roots = list(upper.space.all_roots)
        step = max(1, len(roots) // 12)
        for x in roots[::step]:
            for a in roots[::step]:
                assert mapping[x + a] == mapping[x] + mapping[a]
        projections.append(
            TowerProjection(n, n - 1, mapping, kernel)
        )
    return Tower(f, tuple(levels), tuple(projections))


# ---------------------------------------------------------------------------
# Characteristic-zero obstructions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionReport:
    """Exact arithmetic behind the no-free-action argument at one degree.

    crit_count = 2(p^M - 1)/(p - 1) counts critical points of a degree-p^M
    map in characteristic zero whose monodromy is elementary abelian of
    exponent p (every ramification index is then p).  If p^(M-1) does not
    divide it, some branch point has an unramified preimage and the
    inertia generator fixes a fiber point: the action is not free.
    """

    p: int
    m: int
    crit_count: int
    divides: bool
    obstructed: bool
    iterate_hint: int
    exponent_note: str

    def to_json(self):
        return {
            "p": self.p,
            "m": self.m,
            "crit_count": self.crit_count,
            "p_power_divides": self.divides,
            "obstructed": self.obstructed,
            "iterate_hint": self.iterate_hint,
            "exponent_note": self.exponent_note,
        }


def char0_obstruction(p: int, m: int) -> ObstructionReport:
    """Critical-point count and divisibility test for degree p^m, exactly."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise BudgetExceeded("m must be >= 1")
    crit_count = 2 * (p**m - 1) // (p - 1)
    divides = crit_count % p ** (m - 1) == 0
    # an inconclusive level passes to an iterate f^n of degree p^(nm), nm >= 3
    iterate_hint = max(1, -(-3 // m))  # ceil(3/m)
    exponent_note = (
        f"char p monodromy has exponent {p}; a degree-{p}^{m} polynomial in "
        f"characteristic zero embeds a cyclic inertia group of order {p**m} "
        "over infinity, of unbounded order along the tower"
    )
    return ObstructionReport(
        p=p,
        m=m,
        crit_count=crit_count,
        divides=divides,
        obstructed=not divides,
        iterate_hint=iterate_hint,
        exponent_note=exponent_note,
    )


@dataclass(frozen=True)
class LiftObstructionCertificate:
    """The full pipeline for one additive map: free level + arithmetic."""

    p: int
    ell: int
    n: int
    level_order: int
    level_points: int
    level_free: bool
    level_transitive: bool
    invariants: tuple[int, ...]
    report: ObstructionReport

    def to_json(self):
        return {
            "p": self.p,
            "ell": self.ell,
            "n": self.n,
            "level_order": self.level_order,
            "level_points": self.level_points,
            "level_free": self.level_free,
            "level_transitive": self.level_transitive,
            "abelian_invariants": list(self.invariants),
            "obstruction": self.report.to_json(),
        }


def lift_obstruction(f: AdditivePoly, budget: int | None = None) -> LiftObstructionCertificate:
    """Choose n with n*ell >= 3, exhibit the free level, emit the arithmetic.

    The free translation action at level n together with the critical-count
    arithmetic at degree p^(n*ell) shows no characteristic-zero map can
    realize the same monodromy action.
    """
    if not is_separable(f):
        raise Inseparable("the obstruction pipeline needs separable input")
    p = f.field.p
    ell = f.frobenius_degree
    n = max(1, -(-3 // ell))
    level = monodromy_level(f, n, budget=budget)
    report = char0_obstruction(p, n * ell)
    assert report.obstructed, "nm >= 3 must yield an obstructed degree"
    return LiftObstructionCertificate(
        p=p,
        ell=ell,
        n=n,
        level_order=len(level.action.elements),
        level_points=len(level.action.points),
        level_free=level.action.is_free(),
        level_transitive=level.action.is_transitive(),
        invariants=level.abelian_invariants(),
        report=report,
    )


def wreath_log_order(p: int, n: int) -> int:
    """log_p of the order of the n-fold iterated wreath product of Z/pZ."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1:
        raise BudgetExceeded("n must be >= 1")
    return sum(p**i for i in range(n))


def odometer_check(f: RationalMap, N: int) -> bool:
    """Profiles [d^n] over infinity for 1 <= n <= N: the cyclic inertia witness.

    f must be a polynomial of degree >= 2 over an exact characteristic-zero
    domain; total ramification over infinity at every iterate is the
    profile-level trace of the d-adic odometer.
    """
    if not f.is_polynomial:
        raise NotPolynomial("odometer needs a polynomial map")
    if f.domain.characteristic != 0:
        raise NotPolynomial("odometer lives in characteristic zero")
    d = f.degree
    g = f
    for n in range(1, N + 1):
        if ram_profile(g, ProjPoint.infinity()) != [d**n]:
            return False
        if n < N:
            g = g.compose(f)
    return True
