import random
from fractions import Fraction

import pytest

from chaos_edge import (PreconditionError, build_stunted,
                        approximants, classify_quadratic,
                        classify_stunted, locate_boundary, quadratic_path,
                        shape, stunted_path, verify_witness,
                        verify_zero_certificate, zero_entropy_certificate)
from chaos_edge.boundary import POSITIVE, ZERO, plateau_orbit_analysis
from chaos_edge.periods import is_power_of_two

F = Fraction


class TestZeroCertificate:
    def test_fixed_plateau(self, T12):
        cert = zero_entropy_certificate(T12)
        assert cert is not None
        assert sorted(cert.periods_found) == [1]
        assert cert.plateau_orbits[0].period == 1
        assert verify_zero_certificate(T12, cert)

    def test_trapezoid_refuted(self, T32):
        assert zero_entropy_certificate(T32) is None

    def test_window_map(self, base1):
        T = build_stunted(base1, [F(159, 128)])
        cert = zero_entropy_certificate(T)
        assert cert is not None
        assert all(is_power_of_two(p) for p in cert.periods_found)
        assert cert.plateau_orbits[0].period == 4

    def test_budget_vs_refutation(self, base1):
        from chaos_edge import BudgetExhausted
        from chaos_edge.config import DEFAULT
        # the plateau orbit needs 8 steps to close; budget 5 is exhaustion,
        # not refutation, and must raise rather than return None
        T = build_stunted(base1, [F(637, 512)])
        with pytest.raises(BudgetExhausted):
            zero_entropy_certificate(T, config=DEFAULT.with_(orbit_budget=5))


class TestClassify:
    def test_window_sequence(self, base1):
        expected = {F(1, 2): ZERO, F(1): ZERO, F(49, 40): ZERO,
                    F(5, 4): POSITIVE, F(3, 2): POSITIVE}
        for t, kind in expected.items():
            r = classify_stunted(build_stunted(base1, [t]), 64)
            assert r.kind == kind, (t, r.kind, r.note)

    def test_no_parameter_gets_both(self, base1):
        # certificate disjointness: witnesses and zero certificates never
        # coexist at one parameter
        rnd = random.Random(9)
        for _ in range(40):
            t = F(rnd.randint(-12, 12), 8)
            T = build_stunted(base1, [t])
            r = classify_stunted(T, 64)
            if r.kind == POSITIVE:
                assert r.witness is not None and r.certificate is None
            elif r.kind == ZERO:
                assert r.certificate is not None and r.witness is None

    def test_quadratic_sides(self):
        assert classify_quadratic(-1.3, 32).kind == ZERO
        assert classify_quadratic(-1.5, 32).kind == POSITIVE


class TestLocate:
    def test_m1_path(self, base1):
        path = stunted_path(base1, [F(0)], [F(1)], F(1, 2), F(3, 2))
        res = locate_boundary(path, bound=64, resolution=F(1, 2**20))
        assert res.gap <= F(1, 2**20)
        assert res.orientation == "increasing"
        t_lo, cert = res.zero_side
        t_hi, wit = res.positive_side
        assert t_lo < res.t_star < t_hi
        assert all(is_power_of_two(p) for p in cert.periods_found)
        assert not is_power_of_two(wit.period)
        assert verify_witness(path.map_at(t_hi), wit)
        assert verify_zero_certificate(path.map_at(t_lo), cert)

    def test_bracket_validity(self, base1):
        # along the way, zero stays below and positive above
        path = stunted_path(base1, [F(0)], [F(1)], F(1, 2), F(3, 2))
        res = locate_boundary(path, bound=64, resolution=F(1, 2**14))
        t_star = res.t_star
        for t in (F(3, 4), F(1), F(9, 8)):
            assert classify_stunted(path.map_at(t), 64).kind == ZERO
            assert t < t_star
        for t in (F(3, 2), F(11, 8)):
            assert classify_stunted(path.map_at(t), 64).kind == POSITIVE
            assert t > t_star

    def test_equal_endpoints_rejected(self, base1):
        path = stunted_path(base1, [F(0)], [F(1)], F(1, 2), F(3, 4))
        with pytest.raises(PreconditionError):
            locate_boundary(path, bound=64, resolution=F(1, 1024))

    def test_quadratic_orientation(self):
        res = locate_boundary(quadratic_path(-1.5, -1.3), bound=32,
                              resolution=5e-5)
        assert res.orientation == "decreasing"
        t_zero, _ = res.zero_side
        t_pos, _ = res.positive_side
        assert t_pos < res.t_star < t_zero

    def test_type_b_coarse(self):
        # the one-stage family is affinely conjugate to x^2 + a, so the
        # bracket must straddle the quadratic accumulation parameter
        from chaos_edge import type_b_path
        path = type_b_path([(2, -1.0)], 0, -2.0, -1.0)
        res = locate_boundary(path, bound=32, resolution=0.05)
        lo, hi = sorted(res.bracket)
        assert lo < -1.4011551 < hi


class TestApproximants:
    def test_m1_boundary_pair(self, base1):
        path = stunted_path(base1, [F(0)], [F(1)], F(1, 2), F(3, 2))
        res = locate_boundary(path, bound=64, resolution=F(1, 2**24))
        Tg = path.map_at(res.t_star)
        plus, minus, w, cert, r = approximants(Tg, F(1, 1000))
        assert r <= F(1, 1000)
        assert shape(plus) == shape(minus) == shape(Tg)
        assert not is_power_of_two(w.period)
        assert all(is_power_of_two(p) for p in cert.periods_found)

    def test_sup_distance(self, base1):
        path = stunted_path(base1, [F(0)], [F(1)], F(1, 2), F(3, 2))
        res = locate_boundary(path, bound=64, resolution=F(1, 2**24))
        Tg = path.map_at(res.t_star)
        plus, minus, _, _, r = approximants(Tg, F(1, 1000))
        for k in range(21):
            x = -Tg.base.e + 2 * Tg.base.e * F(k, 20)
            assert abs(plus(x) - Tg(x)) <= r
            assert abs(minus(x) - Tg(x)) <= r

    def test_m2_diagonal(self, base2):
        path = stunted_path(base2, [F(0), F(0)], [F(1), F(1)], F(1, 2), F(8, 3))
        res = locate_boundary(path, bound=64, resolution=F(1, 2**18))
        Tg = path.map_at(res.t_star)
        plus, minus, w, cert, _ = approximants(Tg, F(1, 1000))
        assert shape(plus) == shape(minus) == shape(Tg)

    def test_fixed_plateau_region(self, base1):
        # far from the boundary only one side certifies
        T = build_stunted(base1, [F(5, 8)])
        with pytest.raises(PreconditionError):
            approximants(T, F(1, 100))


class TestPlateauAnalysis:
    def test_preperiodic_structure(self, base1):
        T = build_stunted(base1, [F(5, 4)])
        recs = plateau_orbit_analysis(T, 1000)
        assert recs[0] is not None
        assert recs[0].preperiod == 2 and recs[0].period == 1
