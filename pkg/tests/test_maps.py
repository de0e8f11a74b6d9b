import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaos_edge import (DomainEscapeError, Quadratic, build_base, build_stunted,
                        build_type_b, critical_values, eval_s0, iterate,
                        parse_map, serialize_map)
from chaos_edge.piecewise import PiecewiseLinear

from conftest import random_xi

F = Fraction


class TestBase:
    def test_m1(self):
        b = build_base(1, 1)
        assert b.lam == 3
        assert b.e == F(3, 2)
        assert b.turning_points == (F(0),)

    def test_m2(self):
        b = build_base(2, 1)
        assert b.lam == 4
        assert b.e == F(8, 3)
        assert b.turning_points == (F(-1), F(1))

    def test_m3(self):
        b = build_base(3, 1)
        assert b.lam == 5
        assert b.e == F(15, 4)

    def test_m0_rejected(self):
        with pytest.raises(ValueError):
            build_base(0, 1)

    def test_eval_examples(self):
        b = build_base(1, 1)
        assert eval_s0(b, F(-3, 2)) == F(-3, 2)
        assert eval_s0(b, F(0)) == 3
        assert eval_s0(b, F(1, 2)) == F(3, 2)

    def test_eval_outside_domain(self):
        b = build_base(1, 1)
        with pytest.raises(DomainEscapeError):
            eval_s0(b, F(2))

    @given(m=st.integers(1, 4), eps=st.sampled_from([1, -1]))
    def test_endpoints_map_to_endpoints(self, m, eps):
        b = build_base(m, eps)
        assert eval_s0(b, -b.e) in (-b.e, b.e)
        assert eval_s0(b, b.e) in (-b.e, b.e)

    @given(m=st.integers(1, 4), eps=st.sampled_from([1, -1]),
           num=st.integers(-100, 100))
    def test_extremal_values(self, m, eps, num):
        b = build_base(m, eps)
        for i, c in enumerate(b.turning_points, start=1):
            assert abs(eval_s0(b, c)) == b.lam
        x = -b.e + (2 * b.e) * F(num + 100, 200)
        assert abs(eval_s0(b, x)) <= b.lam


class TestStunted:
    def test_full_trapezoid_plateau(self, base1):
        T = build_stunted(base1, [F(3, 2)])
        z = T.plateaus[0]
        assert (z.lo, z.hi) == (F(-1, 2), F(1, 2))
        assert T.plateau_values[0] == F(3, 2)

    def test_fixed_plateau(self, base1):
        T = build_stunted(base1, [F(1, 2)])
        z = T.plateaus[0]
        assert (z.lo, z.hi) == (F(-5, 6), F(5, 6))
        assert z.lo < F(1, 2) < z.hi  # the plateau contains its own value

    def test_touching_plateaus_degenerate(self, base2):
        T = build_stunted(base2, [F(0), F(0)])
        assert T.degenerate
        assert T.plateaus[0].hi == T.plateaus[1].lo

    def test_overlap_rejected(self, base2):
        with pytest.raises(ValueError):
            build_stunted(base2, [F(-1), F(0)])

    def test_out_of_range_rejected(self, base1):
        with pytest.raises(ValueError):
            build_stunted(base1, [F(2)])

    @given(data=st.data(), m=st.integers(1, 3), q=st.sampled_from([4, 8]))
    @settings(max_examples=60, deadline=None)
    def test_slopes_and_disjointness(self, data, m, q):
        import random
        rnd = random.Random(data.draw(st.integers(0, 10**6)))
        b = build_base(m, 1)
        T = build_stunted(b, random_xi(rnd, b, q))
        # plateau interiors pairwise disjoint
        for z1, z2 in zip(T.plateaus, T.plateaus[1:]):
            assert z1.hi <= z2.lo
        # every non-plateau segment has slope exactly +-lam
        xs, ys = T.pl.xs, T.pl.ys
        for i in range(len(xs) - 1):
            if ys[i] != ys[i + 1]:
                slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
                assert abs(slope) == b.lam

    @given(data=st.data(), m=st.integers(1, 3))
    @settings(max_examples=40, deadline=None)
    def test_monotone_deformation(self, data, m):
        # raising the signed heights raises max-plateau values and lowers
        # min-plateau values (the signs follow the base's orientation)
        import random
        rnd = random.Random(data.draw(st.integers(0, 10**6)))
        b = build_base(m, 1)
        xi = random_xi(rnd, b, 8)
        bump = tuple(F(rnd.randint(0, int((b.e - x) * 8)), 8) for x in xi)
        T1 = build_stunted(b, xi)
        T2 = build_stunted(b, tuple(x + d for x, d in zip(xi, bump)))
        for i in range(1, m + 1):
            v1, v2 = T1.plateau_values[i - 1], T2.plateau_values[i - 1]
            if b.is_max(i):
                assert v1 <= v2
            else:
                assert v1 >= v2


class TestIterate:
    def test_trapezoid_orbit(self, T32):
        assert iterate(T32, F(3, 2), 2) == F(-3, 2)

    def test_identity(self, T32):
        assert iterate(T32, F(1, 3), 0) == F(1, 3)

    def test_quadratic_superstable(self):
        f = Quadratic(-1.0)
        assert iterate(f, 0.0, 2) == 0.0

    def test_escape_reported(self, base1):
        # the raw zigzag is not a self-map; iterating it must fail loudly
        pl = PiecewiseLinear([-base1.e, F(0), base1.e], [-base1.e, F(3), -base1.e])
        with pytest.raises(DomainEscapeError):
            x = F(0)
            for _ in range(2):
                x = pl(x)


class TestTypeB:
    def test_single_stage_golden(self):
        p = build_type_b([(2, -1.0)])
        golden = (1 + math.sqrt(5)) / 2
        assert abs(p.bs[0] - golden) < 1e-12
        assert abs(p(1.0) + 1) < 1e-12 and abs(p(-1.0) + 1) < 1e-12
        assert abs(p(0.0) - 1 / golden) < 1e-12

    def test_full_quadratic_is_exact(self):
        p = build_type_b([(2, -2.0)])
        assert p.bs[0] == 2.0
        assert p(0.0) == 1.0

    def test_no_invariant_interval_rejected(self):
        with pytest.raises(ValueError):
            build_type_b([(2, 0.9)])

    def test_interior_stage_needs_positive_value(self):
        with pytest.raises(ValueError):
            build_type_b([(2, 0.2), (2, -1.0)])

    def test_odd_order_rejected(self):
        with pytest.raises(ValueError):
            build_type_b([(3, -1.0)])

    @given(ell=st.sampled_from([2, 4, 6]),
           a=st.floats(-1.1, -0.05, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_boundary_condition(self, ell, a):
        p = build_type_b([(ell, a)])
        assert abs(p(1.0) + 1) <= 1e-12
        assert abs(p(-1.0) + 1) <= 1e-12

    def test_two_stage_composition(self):
        p = build_type_b([(2, -1.9), (2, -1.8)])
        assert len(p.turning_points) == 3
        assert abs(p(1.0) + 1) < 1e-10
        # stage parameters are recoverable from the composed critical values
        # (the decomposition is unique): the middle turning point comes from
        # the outer stage through the inner critical value
        q0 = p.stage_eval(0, 0.0)
        v_mid = p.stage_eval(1, q0)
        assert abs(p(0.0) - v_mid) < 1e-12
        a1_rec = p.bs[0] * (-q0)
        assert abs(a1_rec - (-1.9)) < 1e-10


class TestCriticalValues:
    def test_single_plateau(self, T32):
        vals, ranks = critical_values(T32)
        assert vals == [F(3, 2)]
        assert ranks == [1]

    def test_seven_turning_points_three_values(self):
        # zigzag with value pattern (.9, .5, .9, .1, .9, .5, .9)
        xs = [F(k, 8) for k in range(9)]
        ys = [F(0), F(9, 10), F(1, 2), F(9, 10), F(1, 10),
              F(9, 10), F(1, 2), F(9, 10), F(0)]
        m = PiecewiseLinear(xs, ys)
        vals, ranks = critical_values(m)
        assert len(vals) == 3
        assert ranks == [3, 2, 3, 1, 3, 2, 3]

    def test_equal_plateau_values(self, base2):
        T = build_stunted(base2, [F(1), F(1)])
        # values are (1, -1): distinct
        vals, _ = critical_values(T)
        assert len(vals) == 2
        T2 = build_stunted(base2, [F(1), F(-1)])
        vals2, ranks2 = critical_values(T2)
        assert len(vals2) == 1 and ranks2 == [1, 1]


class TestDescriptors:
    def test_stunted_roundtrip(self, base2):
        T = build_stunted(base2, [F(5, 3), F(-1, 7)])
        d = serialize_map(T)
        T2 = parse_map(d)
        assert T2.xi == T.xi and T2.base == T.base

    def test_type_b_and_quadratic(self):
        p = parse_map({"kind": "type_b", "stages": [[2, -1.0]]})
        assert isinstance(p, build_type_b([(2, -1.0)]).__class__)
        f = parse_map({"kind": "quadratic", "c": -1.3})
        assert f.c == -1.3

    def test_bad_descriptor(self):
        from chaos_edge import DescriptorError
        with pytest.raises(DescriptorError):
            parse_map({"kind": "nope"})
        with pytest.raises(DescriptorError):
            parse_map({"kind": "stunted", "m": 1, "xi": ["2/0"]})
