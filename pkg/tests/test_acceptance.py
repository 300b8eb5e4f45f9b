"""Acceptance suite: one test per criterion, every check exact.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the one-line
pass report (with wall time) per criterion.
"""

import random
import time
from fractions import Fraction

from wildram.addpoly import AdditivePoly, root_space
from wildram.cyclotomic import CyclotomicNumber, lambda_val, residue, verify_cyclotomic_identities
from wildram.domains import FiniteFieldDomain, RationalDomain
from wildram.dynsys import ProjPoint, RationalMap, post_critical_orbit, ram_profile
from wildram.ff import GF
from wildram.gmlift import (
    build_lift,
    lift_critical_data,
    lift_scheme_dot,
    multiplier_at_zero,
    orbit_search,
    pcf_locus_poly,
    reduce_lift,
    scaling_check,
)
from wildram.moduli import census
from wildram.monodromy import (
    char0_obstruction,
    lift_obstruction,
    monodromy_level,
    odometer_check,
    tower,
)

SEED = 20260809


def _report(number: int, label: str, t0: float) -> None:
    print(f"[PASS] criterion {number} ({label}): {time.time() - t0:.2f}s")


def _random_separable(F, m, rng):
    while True:
        coeffs = [F.element_from_index(rng.randrange(F.order)) for _ in range(m + 1)]
        if not coeffs[0].is_zero() and not coeffs[m].is_zero():
            return AdditivePoly(F, coeffs)


def test_criterion_1_monodromy_suite():
    t0 = time.time()
    rng = random.Random(SEED)
    cases = [(2, 1, 4), (2, 2, 2), (3, 1, 3), (3, 2, 2), (5, 1, 2)]
    for p, m, n_max in cases:
        F = GF(p, m)
        for _ in range(10):
            f = _random_separable(F, m, rng)
            for n in range(1, n_max + 1):
                zs = root_space(f, n)
                assert zs.dimension == m * n
                lvl = monodromy_level(f, n)
                assert lvl.action.is_transitive()
                assert lvl.action.is_free()
                assert lvl.abelian_invariants() == (p,) * (m * n)
            tw = tower(f, n_max)
            for proj in tw.projections:
                assert proj.kernel_size == p**m
                targets = set(proj.mapping.values())
                assert len(targets) == p ** (m * (proj.target_level))
    _report(1, "root spaces, free abelian levels, tower projections", t0)


def test_criterion_2_reduction_suite():
    t0 = time.time()
    av = {2: (1, 3, 5), 3: (1, 2, 4), 5: (1, 2, 3), 7: (1, 6, 13)}
    for p, a_list in av.items():
        K = GF(p, 4)
        for a in a_list:
            L = build_lift(p, a=a)
            target = K.from_int(a % p)
            sbars = [e for e in K.elements() if not e.is_zero() and e ** (p - 1) == target]
            assert sbars, f"no valid sbar for p={p}, a={a}"
            for sbar in sbars:
                out = reduce_lift(L, sbar)  # asserts out == z^p - c z exactly
                c = sbar ** (p - 1)
                assert out[1] == -c and out[p] == K.one()
                assert all(out[j].is_zero() for j in range(2, p))
    _report(2, "reduction to z^p - c z over F_p^4", t0)


def test_criterion_3_cyclotomic_identities():
    t0 = time.time()
    for p in (2, 3, 5, 7, 11, 13):
        rep = verify_cyclotomic_identities(p)
        assert rep["product_identity"] is True
        assert rep["lambda_val_p"] == p - 1
        assert rep["wilson_residue"] == (-1) % p
        assert rep["digit_residues"] == [i % p for i in range(1, p)]
    _report(3, "product, valuation, Wilson, digit residues for p <= 13", t0)


def test_criterion_4_divisibility_table():
    t0 = time.time()
    exceptions = []
    for p in (2, 3, 5, 7, 11, 13):
        for m in range(2, 9):
            crit = 2 * (p**m - 1) // (p - 1)
            assert crit == char0_obstruction(p, m).crit_count
            if crit % p ** (m - 1) == 0:
                exceptions.append((p, m))
    assert exceptions == [(2, 2)]
    _report(4, "p^(m-1) never divides 2(p^m-1)/(p-1) except (2,2)", t0)


def test_criterion_5_census():
    t0 = time.time()
    for q in (3, 9, 27):
        rep = census(3, 1, q)
        assert rep.class_count == q - 1
        assert rep.bound_ok
        assert all(size >= 1 for size in rep.fiber_histogram)
    rep = census(2, 2, 4)
    assert rep.total == 12
    assert rep.bound_ok
    _report(5, "class counts q-1 at m=1 and bounded fibers at (2,2,4)", t0)


def test_criterion_6_escape_and_locus():
    t0 = time.time()
    for a in (1, 2, 4):
        cert = orbit_search(build_lift(3, a=a), 12)
        assert cert.verdict == "escape"
        ti = cert.threshold_index
        assert ti is not None
        for i in range(ti + 1, len(cert.valuations)):
            assert cert.valuations[i] == 3 * cert.valuations[i - 1]
    _poly, rep = pcf_locus_poly(3, 1, 1)
    assert rep.degree == 9
    _report(6, "certified escape for a in {1,2,4}; locus degree 9", t0)


def test_criterion_7_scaling():
    t0 = time.time()
    for p in (2, 3, 5, 7, 11, 13):
        assert scaling_check(p)
    # multipliers at 0 for p = 3: equal under s -> gamma s, distinct otherwise
    lam = CyclotomicNumber.lam(3)
    unit = CyclotomicNumber.from_rational(3, 3) / lam**2
    pairs = 0
    avals = [1, 2, 4, 5, 7]
    for a in avals:
        L = build_lift(3, a=a)
        mult = multiplier_at_zero(L)
        # gamma = -1 is the nontrivial square root of 1: twisting s by it
        # leaves s^2 = a and the multiplier unchanged
        ring = L.ring
        twisted = ring.scalar(unit) * (-ring.s()) * (-ring.s())
        assert twisted == ring.scalar(mult)
        for a2 in avals:
            if a2 != a:
                assert multiplier_at_zero(build_lift(3, a=a2)) != mult
                pairs += 1
    assert pairs == 20
    _report(7, "scaling identity p <= 13; 20 multiplier separations at p=3", t0)


def test_criterion_8_odometer():
    t0 = time.time()
    QQ = RationalDomain()
    f = RationalMap(QQ, [Fraction(1), Fraction(0), Fraction(1)])  # z^2 + 1
    profiles = []
    g = f
    for n in range(1, 5):
        profiles.append(ram_profile(g, ProjPoint.infinity()))
        if n < 4:
            g = g.compose(f)
    assert profiles == [[2], [4], [8], [16]]
    assert odometer_check(f, 4)

    h = RationalMap(QQ, [Fraction(-1), Fraction(0), Fraction(0), Fraction(1)])  # z^3 - 1
    profiles = []
    g = h
    for n in range(1, 4):
        profiles.append(ram_profile(g, ProjPoint.infinity()))
        if n < 3:
            g = g.compose(h)
    assert profiles == [[3], [9], [27]]
    assert odometer_check(h, 3)
    _report(8, "odometer profiles [d^n] for z^2+1 and z^3-1", t0)


def test_criterion_9_mapping_schemes():
    t0 = time.time()
    rng = random.Random(SEED)
    for p, k in ((2, 4), (3, 3), (5, 2)):
        F = GF(p, k)
        dom = FiniteFieldDomain(F)
        seen = set()
        while len(seen) < 10:
            c = F.element_from_index(rng.randrange(1, F.order))
            if c in seen:
                continue
            seen.add(c)
            coeffs = [F.zero(), -c] + [F.zero()] * (p - 2) + [F.one()]
            f = RationalMap(dom, coeffs)
            scheme = post_critical_orbit(f, 32)
            assert len(scheme.vertices) == 1
            assert scheme.vertices[0].is_infinity
            assert scheme.edges == ((0, 0, p),)
            assert not scheme.was_truncated
    # the lift's two-component diagram for p=3, a=1
    L = build_lift(3, a=1)
    data = lift_critical_data(L)
    (pt_inf, e_inf), (crit, e_crit) = data.critical_points
    assert pt_inf is None and e_inf == 3 and e_crit == 3
    assert data.value_valuation == -3
    cert = orbit_search(L, 8)
    dot = lift_scheme_dot(L, cert)
    assert "inf -> inf" in dot and "c0 -> c1" in dot
    _report(9, "single wild loop for f_c; two-component lift diagram", t0)


def test_criterion_10_no_lift_pipeline():
    t0 = time.time()
    F2 = GF(2)
    cert = lift_obstruction(AdditivePoly(F2, [1, 1]))
    assert cert.ell == 1
    assert cert.n == 3
    assert cert.level_order == 8 and cert.level_points == 8
    assert cert.level_free and cert.level_transitive
    assert cert.report.p == 2 and cert.report.m == 3
    assert cert.report.crit_count == 14
    assert cert.report.crit_count % 4 != 0
    assert cert.report.obstructed
    _report(10, "free level at n=3 vs 4 does not divide 14", t0)
