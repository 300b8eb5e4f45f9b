import random
from fractions import Fraction

import pytest

from wildram.addpoly import AdditivePoly
from wildram.domains import RationalDomain
from wildram.dynsys import RationalMap
from wildram.errors import Inseparable, NotPolynomial, NotPrime
from wildram.ff import GF
from wildram.monodromy import (
    GroupAction,
    char0_obstruction,
    is_free,
    lift_obstruction,
    monodromy_level,
    odometer_check,
    stabilizer_orders,
    tower,
    wreath_log_order,
)

QQ = RationalDomain()


def test_monodromy_level_examples():
    F2 = GF(2)
    lvl = monodromy_level(AdditivePoly(F2, [1, 1]), 2)
    assert lvl.order == 4
    assert lvl.abelian_invariants() == (2, 2)

    F3 = GF(3)
    lvl = monodromy_level(AdditivePoly(F3, [-1, 1]), 1)
    assert lvl.order == 3
    assert lvl.action.is_free() and lvl.action.is_transitive()

    lvl = monodromy_level(AdditivePoly(F3, [1, 0, 1]), 1)  # z^9 + z
    assert lvl.order == 9
    assert lvl.abelian_invariants() == (3, 3)


def test_monodromy_level_inseparable():
    F3 = GF(3)
    with pytest.raises(Inseparable):
        monodromy_level(AdditivePoly(F3, [0, 1, 1]), 1)


def test_free_transitive_order_equality():
    rng = random.Random(3)
    for F, m in ((GF(2), 1), (GF(3), 1)):
        for n in (1, 2):
            coeffs = [F.element_from_index(rng.randrange(1, F.order)) for _ in range(m + 1)]
            f = AdditivePoly(F, coeffs)
            lvl = monodromy_level(f, n)
            assert len(lvl.action.elements) == len(lvl.action.points)


def test_group_action_helpers():
    s3 = GroupAction.symmetric(3)
    assert not is_free(s3)
    assert stabilizer_orders(s3) == [2, 2, 2]

    trivial = GroupAction([()], [0, 1], {(): {0: 0, 1: 1}})
    assert is_free(trivial)

    F2 = GF(2)
    lvl = monodromy_level(AdditivePoly(F2, [1, 1]), 2)
    assert is_free(lvl.action)


def test_tower_z2z():
    F2 = GF(2)
    f = AdditivePoly(F2, [1, 1])
    tw = tower(f, 2)
    assert tw.depth == 2
    proj = tw.projections[0]
    assert proj.source_level == 2 and proj.target_level == 1
    assert proj.kernel_size == 2
    # the projection is alpha -> alpha^2 + alpha on F_4
    K = tw.levels[1].space.field
    for alpha, img in proj.mapping.items():
        assert img == alpha * alpha + alpha


def test_tower_z3_minus_z():
    F3 = GF(3)
    f = AdditivePoly(F3, [-1, 1])
    tw = tower(f, 2)
    proj = tw.projections[0]
    assert proj.kernel_size == 3
    # kernel of the projection is Z_1 = {0, 1, -1} in the top field
    kernel = {a for a, img in proj.mapping.items() if img.is_zero()}
    K = tw.levels[1].space.field
    assert kernel == {K.zero(), K.one(), -K.one()}


def test_tower_depth_one():
    F3 = GF(3)
    tw = tower(AdditivePoly(F3, [1, 1]), 1)
    assert tw.depth == 1 and tw.projections == ()


def test_char0_obstruction_table():
    rep = char0_obstruction(2, 3)
    assert rep.crit_count == 14
    assert not rep.divides and rep.obstructed

    rep = char0_obstruction(2, 2)
    assert rep.crit_count == 6
    assert rep.divides and not rep.obstructed
    assert rep.iterate_hint == 2  # pass to f^n with n*m >= 3

    rep = char0_obstruction(3, 2)
    assert rep.crit_count == 8
    assert not rep.divides and rep.obstructed

    with pytest.raises(NotPrime):
        char0_obstruction(6, 2)


def test_lemma_divisibility_sweep():
    # p^(m-1) never divides 2(p^m-1)/(p-1) for primes p <= 13, 2 <= m <= 8,
    # except exactly (2, 2)
    exceptions = []
    for p in (2, 3, 5, 7, 11, 13):
        for m in range(2, 9):
            rep = char0_obstruction(p, m)
            if rep.divides:
                exceptions.append((p, m))
    assert exceptions == [(2, 2)]


def test_lift_obstruction_pipeline():
    F2 = GF(2)
    cert = lift_obstruction(AdditivePoly(F2, [1, 1]))
    assert cert.ell == 1 and cert.n == 3
    assert cert.level_order == 8 and cert.level_points == 8
    assert cert.level_free and cert.level_transitive
    assert cert.invariants == (2, 2, 2)
    assert cert.report.crit_count == 14 and cert.report.obstructed

    F9 = GF(3, 2)
    cert = lift_obstruction(AdditivePoly(F9, [F9.gen(), F9.zero(), F9.one()]))
    assert cert.ell == 2 and cert.n == 2
    assert cert.report.p == 3 and cert.report.m == 4


def test_wreath_log_order():
    assert wreath_log_order(3, 2) == 4
    assert wreath_log_order(2, 1) == 1
    assert wreath_log_order(5, 3) == 31
    # the monodromy-size gap at matching degree p^(m*n): the iterated wreath
    # tower strictly beats the flat additive tower once the depth exceeds 1
    for p in (2, 3, 5, 7):
        for m in (1, 2, 3):
            for n in range(1, 6):
                if m * n >= 2:
                    assert wreath_log_order(p, m * n) > m * n
    assert wreath_log_order(2, 1) == 1  # depth one: towers agree


def test_odometer_check():
    f = RationalMap(QQ, [Fraction(1), Fraction(0), Fraction(1)])  # z^2 + 1
    assert odometer_check(f, 3)

    g = RationalMap(QQ, [Fraction(0)] * 3 + [Fraction(1)])  # z^3
    assert odometer_check(g, 2)

    h = RationalMap(QQ, [Fraction(0), Fraction(-1), Fraction(1)])  # z^2 - z
    assert odometer_check(h, 2)

    rational = RationalMap(QQ, [Fraction(1)], [Fraction(0), Fraction(1)])  # 1/z
    with pytest.raises(NotPolynomial):
        odometer_check(rational, 2)
