import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaos_edge import (Quadratic, build_base, build_stunted,
                        is_power_of_two_spectrum, period_set, periodic_points,
                        sharkovskii_forces, sharkovskii_precedes)
from chaos_edge.periods import PeriodSet, is_power_of_two

from conftest import random_xi

F = Fraction


class TestPeriodicPoints:
    def test_fixed_plateau_orbits(self, T12):
        orbits = periodic_points(T12, 1)
        pts = sorted(o.points[0] for o in orbits)
        # the fixed plateau value, plus the left endpoint which the base
        # zigzag fixes
        assert pts == [F(-3, 2), F(1, 2)]
        tags = {o.points[0]: o.stability for o in orbits}
        assert tags[F(1, 2)] == "plateau-absorbed"
        assert tags[F(-3, 2)] == "repelling"

    def test_trapezoid_two_three_cycles(self, T32):
        orbits = periodic_points(T32, 3)
        assert len(orbits) == 2
        for o in orbits:
            assert o.period == 3
            x = o.points[0]
            y = x
            for _ in range(3):
                y = T32(y)
            assert y == x

    def test_quadratic_superstable_two_cycle(self):
        orbits = periodic_points(Quadratic(-1.0), 2)
        assert len(orbits) == 1
        pts = sorted(orbits[0].points)
        assert abs(pts[0] + 1) < 1e-9 and abs(pts[1]) < 1e-9
        assert orbits[0].stability == "attracting"

    def test_minimality_filter(self, T32):
        # period 4 solutions exclude fixed points and 2-cycles
        for o in periodic_points(T32, 4):
            assert o.period == 4
            x = o.points[0]
            y = x
            for k in range(1, 4):
                y = T32(y)
                assert y != x


class TestPeriodSet:
    def test_trapezoid_bound6(self, T32):
        ps = period_set(T32, 6)
        assert sorted(ps.periods) == [1, 2, 3, 4, 5, 6]
        assert ps.complete_upto == 6

    def test_fixed_plateau(self, T12):
        ps = period_set(T12, 64)
        assert sorted(ps.periods) == [1]
        assert ps.complete_upto == 64

    def test_quadratic_attracting_two_cycle(self):
        ps = period_set(Quadratic(-1.0), 8)
        assert sorted(ps.periods) == [1, 2]

    @given(data=st.data())
    @settings(max_examples=15, deadline=None)
    def test_sharkovskii_consistency(self, data):
        rnd = random.Random(data.draw(st.integers(0, 10**6)))
        b = build_base(1, 1)
        T = build_stunted(b, random_xi(rnd, b, 4))
        from chaos_edge import BudgetExhausted
        try:
            ps = period_set(T, 10)
        except BudgetExhausted:
            return
        for q in ps.periods:
            for r in range(1, ps.complete_upto + 1):
                if sharkovskii_precedes(q, r):
                    assert r in ps.periods, (T.xi, q, r, sorted(ps.periods))


class TestSpectrum:
    def test_yes(self):
        ps = PeriodSet(frozenset({1, 2, 4, 8}), 8, 8)
        assert is_power_of_two_spectrum(ps) == ("yes-up-to-bound", None)

    def test_no_three(self):
        ps = PeriodSet(frozenset({1, 2, 3}), 3, 3)
        assert is_power_of_two_spectrum(ps) == ("no", 3)

    def test_no_six(self):
        ps = PeriodSet(frozenset({1, 2, 6}), 6, 6)
        assert is_power_of_two_spectrum(ps) == ("no", 6)


class TestSharkovskii:
    def test_power_of_two_tail(self):
        assert sharkovskii_forces(4).materialize() == [4, 2, 1]

    def test_three_forces_everything(self):
        tail = sharkovskii_forces(3)
        assert not tail.is_finite
        assert all(q in tail for q in range(1, 200))
        from chaos_edge import PreconditionError
        with pytest.raises(PreconditionError):
            tail.materialize()

    def test_six(self):
        tail = sharkovskii_forces(6)
        assert 3 not in tail and 5 not in tail
        assert 10 in tail and 12 in tail and 20 in tail
        for k in range(7):
            assert 2**k in tail
        out = tail.materialize(20)
        assert out[0] == 6 and out[-1] == 1
        # descending Sharkovskii order: each entry forces the next
        for a, b in zip(out, out[1:]):
            assert sharkovskii_precedes(a, b)

    def test_order_classic_chain(self):
        # 3 > 5 > 7 > ... > 2*3 > 2*5 > ... > 8 > 4 > 2 > 1
        chain = [3, 5, 7, 9, 6, 10, 14, 12, 20, 24, 8, 4, 2, 1]
        for a, b in zip(chain, chain[1:]):
            assert sharkovskii_precedes(a, b)
            assert not sharkovskii_precedes(b, a)

    def test_is_power_of_two(self):
        assert [n for n in range(1, 20) if is_power_of_two(n)] == [1, 2, 4, 8, 16]
