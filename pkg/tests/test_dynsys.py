import random
from fractions import Fraction

import pytest

from wildram.domains import FiniteFieldDomain, RationalDomain
from wildram.dynsys import (
    Pgl2,
    ProjPoint,
    RationalMap,
    conjugate,
    critical_points,
    fixed_point_data,
    multiplier,
    post_critical_orbit,
    ram_profile,
)
from wildram.errors import DegenerateMap, NotFixed
from wildram.ff import GF

QQ = RationalDomain()
INF = ProjPoint.infinity()


def qmap(num, den=None):
    return RationalMap(QQ, [Fraction(c) for c in num], None if den is None else [Fraction(c) for c in den])


def fmap(F, num, den=None):
    return RationalMap(
        FiniteFieldDomain(F),
        [F.from_int(c) for c in num],
        None if den is None else [F.from_int(c) for c in den],
    )


def test_ram_profile_squares():
    f = qmap([0, 0, 1])  # z^2
    assert ram_profile(f, ProjPoint.finite(Fraction(0))) == [2]
    assert ram_profile(f, ProjPoint.finite(Fraction(1))) == [1, 1]
    assert ram_profile(f, INF) == [2]


def test_ram_profile_additive_wild():
    F3 = GF(3)
    f = fmap(F3, [0, -1, 0, 1])  # z^3 - z
    # no finite ramification anywhere, total wildness over infinity
    for c in range(3):
        assert ram_profile(f, ProjPoint.finite(F3.from_int(c))) == [1, 1, 1]
    assert ram_profile(f, INF) == [3]


def test_ram_profile_sums_to_degree():
    rng = random.Random(3)
    F4 = GF(2, 2)
    dom = FiniteFieldDomain(F4)
    for _ in range(10):
        num = [F4.element_from_index(rng.randrange(4)) for _ in range(4)]
        den = [F4.element_from_index(rng.randrange(4)) for _ in range(2)]
        try:
            f = RationalMap(dom, num, den)
        except DegenerateMap:
            continue
        for n in range(4):
            Q = ProjPoint.finite(F4.element_from_index(n))
            assert sum(ram_profile(f, Q)) == f.degree
        assert sum(ram_profile(f, INF)) == f.degree


def test_critical_points_examples():
    # z^3 - z over F_3: only the wild point at infinity
    F3 = GF(3)
    f = fmap(F3, [0, -1, 0, 1])
    crits = critical_points(f)
    assert len(crits) == 1
    pt, e = crits[0]
    assert pt.is_infinity and e == 3

    # z^2 over Q
    g = qmap([0, 0, 1])
    crits = critical_points(g)
    assert {(pt.is_infinity, e) for pt, e in crits} == {(True, 2), (False, 2)}
    finite = [pt for pt, _ in crits if not pt.is_infinity]
    assert finite[0].value == 0


def test_critical_points_inseparable_rejected():
    F3 = GF(3)
    with pytest.raises(DegenerateMap):
        critical_points(fmap(F3, [0, 0, 0, 1]))  # z^3, derivative vanishes


def test_critical_points_need_extension():
    # z^2 + z over F_2: derivative is 1... use z^3 + z over F_2 whose
    # derivative z^2 + 1 = (z+1)^2 has the root 1 in F_2 itself
    F2 = GF(2)
    f = fmap(F2, [0, 1, 0, 1])
    crits = critical_points(f)
    labels = {("oo" if pt.is_infinity else tuple(pt.value.coords)): e for pt, e in crits}
    assert labels["oo"] == 3
    assert labels[(1,)] == 2


def test_post_critical_orbit_additive_loop():
    for p, k, c in ((2, 2, 2), (3, 1, 2), (5, 1, 3)):
        F = GF(p, k)
        coeffs = [F.zero(), -F.element_from_index(c)] + [F.zero()] * (p - 2) + [F.one()]
        f = RationalMap(FiniteFieldDomain(F), coeffs)
        scheme = post_critical_orbit(f, 10)
        assert len(scheme.vertices) == 1
        assert scheme.vertices[0].is_infinity
        assert scheme.edges == ((0, 0, p),)
        assert not scheme.was_truncated


def test_post_critical_orbit_z2_rational():
    f = qmap([0, 0, 1])  # z^2: 0 and oo are fixed critical points
    scheme = post_critical_orbit(f, 5)
    assert len(scheme.vertices) == 2
    assert {tuple(e) for e in scheme.edges} == {(0, 0, 2), (1, 1, 2)}
    assert not scheme.was_truncated


def test_post_critical_orbit_truncation():
    f = qmap([1, 0, 1])  # z^2 + 1 over Q
    scheme = post_critical_orbit(f, 3)
    assert scheme.was_truncated
    finite_vals = sorted(
        [pt.value for pt in scheme.vertices if not pt.is_infinity]
    )
    assert finite_vals == [Fraction(0), Fraction(1), Fraction(2), Fraction(5)]
    # 0 -> 1 -> 2 -> 5 (truncated), oo loop
    by_val = {None if pt.is_infinity else pt.value: i for i, pt in enumerate(scheme.vertices)}
    edge_set = set(scheme.edges)
    assert (by_val[Fraction(0)], by_val[Fraction(1)], 2) in edge_set
    assert (by_val[Fraction(1)], by_val[Fraction(2)], 1) in edge_set
    assert (by_val[Fraction(2)], by_val[Fraction(5)], 1) in edge_set
    assert (by_val[None], by_val[None], 2) in edge_set
    assert by_val[Fraction(5)] in scheme.truncated


def test_conjugate_identity_and_roundtrip():
    rng = random.Random(7)
    F9 = GF(3, 2)
    dom = FiniteFieldDomain(F9)
    ident = Pgl2.identity(dom)
    for _ in range(8):
        num = [F9.element_from_index(rng.randrange(9)) for _ in range(4)]
        den = [F9.element_from_index(rng.randrange(9)) for _ in range(2)]
        try:
            f = RationalMap(dom, num, den)
        except DegenerateMap:
            continue
        assert conjugate(f, ident) == f
        a, b, c, d = (F9.element_from_index(rng.randrange(9)) for _ in range(4))
        try:
            phi = Pgl2(dom, a, b, c, d)
        except DegenerateMap:
            continue
        assert conjugate(conjugate(f, phi), phi.inverse()) == f


def test_conjugate_monicization():
    # z -> bz with b^2 = a_p turns 2z^3 - z into the monic z^3 - z
    F9 = GF(3, 2)
    dom = FiniteFieldDomain(F9)
    two = F9.from_int(2)
    f = RationalMap(dom, [F9.zero(), -F9.one(), F9.zero(), two])
    b = next(e for e in F9.elements() if e * e == two)  # 2 is a square in F9
    phi = Pgl2.affine(dom, b, F9.zero())
    g = conjugate(f, phi)
    assert g.den == (F9.one(),)
    assert g.num[-1] == F9.one()  # monic
    assert g.num[1] == -F9.one()  # the z-coefficient survives unchanged


def test_multiplier():
    F3 = GF(3)
    dom = FiniteFieldDomain(F3)
    for c in (1, 2):
        f = fmap(F3, [0, -c, 0, 1])  # z^3 - cz
        lam = multiplier(f, ProjPoint.finite(F3.zero()))
        assert lam == F3.from_int(-c)

    g = qmap([0, 0, 1])
    assert multiplier(g, ProjPoint.finite(Fraction(0))) == 0
    with pytest.raises(NotFixed):
        multiplier(g, ProjPoint.finite(Fraction(2)))

    F9 = GF(3, 2)
    a1 = F9.gen()
    h = RationalMap(FiniteFieldDomain(F9), [F9.zero(), a1, F9.zero(), F9.one()])
    assert multiplier(h, ProjPoint.finite(F9.zero())) == a1


def test_multiplier_spectrum_conjugation_invariant():
    rng = random.Random(11)
    F5 = GF(5)
    dom = FiniteFieldDomain(F5)
    f = fmap(F5, [1, 2, 1])  # z^2 + 2z + 1
    fL, pts = fixed_point_data(f)
    spec = sorted(
        [multiplier(fL, pt).coords for pt in pts]
    )
    phi = Pgl2.affine(dom, F5.from_int(2), F5.from_int(3))
    g = conjugate(f, phi)
    gL, gpts = fixed_point_data(g)
    spec2 = sorted([multiplier(gL, pt).coords for pt in gpts])
    assert spec == spec2


def test_scheme_isomorphism_under_conjugation():
    F3 = GF(3)
    dom = FiniteFieldDomain(F3)
    f = fmap(F3, [0, -1, 0, 1])
    phi = Pgl2.affine(dom, F3.from_int(2), F3.from_int(1))
    g = conjugate(f, phi)
    s1 = post_critical_orbit(f, 10)
    s2 = post_critical_orbit(g, 10)
    assert s1.is_isomorphic_via(s2, lambda pt: phi.apply(pt))
    assert s1.weight_signature() == s2.weight_signature()


def test_riemann_hurwitz_tame():
    # characteristic zero: sum (e - 1) = 2d - 2 (maps chosen with rational criticals)
    for num in ([0, 0, 1], [1, 0, 1], [0, 0, 0, 1], [0, -3, 0, 1]):
        f = qmap(num)
        crits = critical_points(f)
        assert sum(e - 1 for _, e in crits) == 2 * f.degree - 2


def test_unsupported_extension_is_loud():
    from wildram.errors import UnsupportedExtension

    f = qmap([0, 1, 0, 1])  # critical points at +-i/sqrt(3)
    with pytest.raises(UnsupportedExtension):
        critical_points(f)


def test_dot_and_json_output():
    F3 = GF(3)
    f = fmap(F3, [0, -1, 0, 1])
    scheme = post_critical_orbit(f, 10)
    dot = scheme.to_dot()
    assert dot.startswith("digraph") and '"oo"' in dot and '"3"' in dot
    js = scheme.to_json()
    assert js["edges"] == [[0, 0, 3]]
    assert js["vertices"][0]["critical"]
