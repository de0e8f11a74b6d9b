"""Cross-validation of the transition-graph period analysis against the
piece-based exact solver, plus spectral radius sanity."""

import random
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from chaos_edge import BudgetExhausted, build_base, build_stunted, period_set
from chaos_edge.config import DEFAULT
from chaos_edge.entropy import spectral_radius
from chaos_edge.markov import build_markov, cycle_analysis
from chaos_edge.periods import is_power_of_two

from conftest import random_xi

F = Fraction


class TestCycleAnalysis:
    @given(data=st.data(), m=st.integers(1, 2))
    @settings(max_examples=40, deadline=None)
    def test_complete_enumeration_matches_piece_solver(self, data, m):
        rnd = random.Random(data.draw(st.integers(0, 10**6)))
        b = build_base(m, 1)
        T = build_stunted(b, random_xi(rnd, b, 4))
        try:
            system = build_markov(T.pl, 4096)
        except BudgetExhausted:
            return
        analysis = cycle_analysis(system)
        if not analysis.complete:
            return
        bound = 8
        try:
            ps = period_set(T, bound, DEFAULT.with_(piece_budget=200_000))
        except BudgetExhausted:
            return
        graph_side = {p for p in analysis.periods if p <= ps.complete_upto}
        assert graph_side == set(p for p in ps.periods if p <= ps.complete_upto)

    def test_branching_yields_nonpow2(self, T32):
        system = build_markov(T32.pl, 1024)
        analysis = cycle_analysis(system)
        assert not analysis.complete
        assert analysis.witness_period is not None
        assert not is_power_of_two(analysis.witness_period)
        x = analysis.witness_orbit[0]
        y = x
        for _ in range(analysis.witness_period):
            y = T32.pl(y)
        assert y == x

    def test_simple_cycles_for_window_map(self, base1):
        T = build_stunted(base1, [F(1)])
        analysis = cycle_analysis(build_markov(T.pl, 1024))
        assert analysis.complete
        assert analysis.periods == frozenset({1, 2})


class TestSpectralRadius:
    def test_full_shift(self):
        rows = [(0, 2), (0, 2)]
        assert abs(spectral_radius(rows, 2) - 2.0) < 1e-12

    def test_permutation(self):
        rows = [(1, 2), (0, 1)]
        assert abs(spectral_radius(rows, 2) - 1.0) < 1e-10

    def test_golden(self):
        rows = [(0, 2), (0, 1)]
        assert abs(spectral_radius(rows, 2) - (1 + 5 ** 0.5) / 2) < 1e-10

    def test_zero_rows(self):
        assert spectral_radius([(0, 0), (0, 0)], 2) == 0.0

    def test_large_reducible(self):
        # two golden blocks chained by transients; dense path not used
        n = 20
        rows = []
        for i in range(n):
            if i < n - 1:
                rows.append((i, i + 2 if i % 3 else i + 1))
            else:
                rows.append((i, i + 1))
        rho = spectral_radius(rows, n)
        dense = np.zeros((n, n))
        for i, (a, b) in enumerate(rows):
            dense[i, a:b] = 1
        assert abs(rho - np.max(np.abs(np.linalg.eigvals(dense)))) < 1e-8
