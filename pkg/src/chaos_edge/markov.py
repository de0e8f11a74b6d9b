"""Exact Markov structure of a piecewise-linear self-map.

When every breakpoint orbit closes up, the forward closure of the breakpoints
is a finite invariant partition on whose intervals the map is affine (or
constant), and the dynamics is fully described by a transition graph whose
rows are index ranges.

The graph decides periodicity questions without iterating pieces:

* orbits through partition points are walks in a functional graph;
* every other periodic orbit avoids plateaus and corresponds to a closed walk
  through expanding states, solved exactly as a fixed point of an affine
  composition;
* strongly connected components that are single cycles enumerate all such
  orbits; a component with a branching vertex certifies entropy at least
  log 2 / length and yields a non-power-of-two orbit by splicing two cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import MarkovBudgetError
from .periods import is_power_of_two
from .piecewise import PiecewiseLinear


@dataclass(frozen=True)
class MarkovSystem:
    pl: PiecewiseLinear
    points: tuple                 # sorted forward-invariant partition points
    rows: tuple                   # per state, successor index range [a, b)
    affine: tuple                 # per state, (slope, intercept) or None when constant
    next_point: tuple             # functional graph on partition points

    @property
    def size(self) -> int:
        return len(self.points) - 1


def build_markov(pl: PiecewiseLinear, budget: int) -> MarkovSystem:
    if not pl.is_self_map():
        raise MarkovBudgetError("not a self-map")
    points = set(pl.xs)
    frontier = list(points)
    while frontier:
        nxt = []
        for x in frontier:
            y = pl(x)
            if y not in points:
                points.add(y)
                nxt.append(y)
                if len(points) > budget:
                    raise MarkovBudgetError(
                        f"not Markov at budget: breakpoint orbits exceed {budget} points")
        frontier = nxt
    pts = sorted(points)
    index = {x: i for i, x in enumerate(pts)}
    rows = []
    affine = []
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        fa, fb = pl(a), pl(b)
        if fa == fb:
            rows.append((0, 0))
            affine.append(None)
        else:
            s = (fb - fa) / (b - a)
            affine.append((s, fa - s * a))
            lo, hi = (fa, fb) if fa < fb else (fb, fa)
            rows.append((index[lo], index[hi]))
    nxt = tuple(index[pl(x)] for x in pts)
    return MarkovSystem(pl, tuple(pts), tuple(rows), tuple(affine), nxt)


def _tarjan_sccs(rows, size):
    """Iterative Tarjan over range-successor rows; returns list of components."""
    indices = [-1] * size
    low = [0] * size
    on_stack = [False] * size
    stack = []
    sccs = []
    counter = [0]
    for root in range(size):
        if indices[root] != -1:
            continue
        work = [(root, iter(range(*rows[root])))]
        indices[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if indices[w] == -1:
                    indices[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(range(*rows[w]))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], indices[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == indices[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


@dataclass(frozen=True)
class CycleAnalysis:
    complete: bool                 # whole period structure enumerated
    periods: frozenset             # all minimal periods (complete=True only)
    witness_orbit: Optional[tuple]
    witness_period: Optional[int]


def _in_scc_successors(rows, scc_set, v):
    return [w for w in range(*rows[v]) if w in scc_set]


def _compose_cycle(system: MarkovSystem, states):
    s = Fraction(1)
    o = Fraction(0)
    for st in states:
        aff = system.affine[st]
        if aff is None:
            return None
        si, oi = aff
        s, o = si * s, si * o + oi
    return s, o


def _cycle_orbit(system: MarkovSystem, states):
    """Exact periodic point tracing the given closed state walk, or None."""
    comp = _compose_cycle(system, states)
    if comp is None:
        return None
    s, o = comp
    if s == 1:
        return None
    x = o / (1 - s)
    pts = system.points
    y = x
    orbit = []
    for st in states:
        if not pts[st] <= y <= pts[st + 1]:
            return None
        orbit.append(y)
        y = system.pl(y)
    if y != x:
        return None
    return tuple(orbit)


def _minimal_period_exact(pl, x, cap):
    y = x
    for k in range(1, cap + 1):
        y = pl(y)
        if y == x:
            return k
    return None


def _point_cycle_periods(system: MarkovSystem):
    """Minimal periods of all cycles in the functional graph on partition points."""
    nxt = system.next_point
    color = [0] * len(nxt)   # 0 unvisited, 1 in progress, 2 done
    periods = set()
    for start in range(len(nxt)):
        if color[start]:
            continue
        path = []
        pos = {}
        v = start
        while color[v] == 0:
            color[v] = 1
            pos[v] = len(path)
            path.append(v)
            v = nxt[v]
        if color[v] == 1:           # fresh cycle
            cycle = path[pos[v]:]
            periods.add(len(cycle))
        for w in path:
            color[w] = 2
    return periods


def cycle_analysis(system: MarkovSystem, pattern_tries: int = 4) -> CycleAnalysis:
    """Period structure from the transition graph.

    If every strongly connected component is a single cycle, the returned
    period set is the complete set of minimal periods of the map.  Otherwise
    a component branches, and splicing two of its cycles produces an exact
    periodic orbit whose minimal period is not a power of two.
    """
    size = system.size
    rows = system.rows
    periods = set(_point_cycle_periods(system))
    witness_orbit = None
    witness_period = None
    complete = True
    for scc in _tarjan_sccs(rows, size):
        scc_set = set(scc)
        if len(scc) == 1:
            v = scc[0]
            succ = _in_scc_successors(rows, scc_set, v)
            if not succ:
                continue
            cycles = [[v]]
        else:
            cycles = None
        branch_vertex = None
        if cycles is None:
            for v in scc:
                succ = _in_scc_successors(rows, scc_set, v)
                if len(succ) > 1:
                    branch_vertex = v
                    break
            if branch_vertex is None:
                # follow the unique in-component successor around the cycle
                v0 = scc[0]
                cyc = [v0]
                v = _in_scc_successors(rows, scc_set, v0)[0]
                while v != v0:
                    cyc.append(v)
                    v = _in_scc_successors(rows, scc_set, v)[0]
                cycles = [cyc]
        if cycles is not None and branch_vertex is None:
            for cyc in cycles:
                orbit = _cycle_orbit(system, cyc)
                if orbit is None:
                    continue
                mp = _minimal_period_exact(system.pl, orbit[0], len(cyc))
                if mp:
                    periods.add(mp)
            continue
        # branching component: two distinct cycles through branch_vertex
        complete = False
        if witness_orbit is not None:
            continue
        u1, u2 = _in_scc_successors(rows, scc_set, branch_vertex)[:2]
        w1 = _cycle_through(rows, scc_set, branch_vertex, u1)
        w2 = _cycle_through(rows, scc_set, branch_vertex, u2)
        if w1 is None or w2 is None:
            continue
        for a, b in ((1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3)):
            if a + b > pattern_tries + 2:
                break
            walk = w1 * a + w2 * b
            orbit = _cycle_orbit(system, walk)
            if orbit is None:
                continue
            mp = _minimal_period_exact(system.pl, orbit[0], len(walk))
            if mp and not is_power_of_two(mp):
                y = orbit[0]
                cyc_pts = [y]
                for _ in range(mp - 1):
                    y = system.pl(y)
                    cyc_pts.append(y)
                witness_orbit = tuple(cyc_pts)
                witness_period = mp
                break
    if witness_orbit is None:
        for p in sorted(periods):
            if not is_power_of_two(p):
                # realize the non-power-of-two period as an explicit orbit
                orbit = _orbit_with_period(system, p)
                if orbit is not None:
                    witness_orbit, witness_period = orbit, p
                    break
    return CycleAnalysis(complete, frozenset(periods), witness_orbit, witness_period)


def _cycle_through(rows, scc_set, v, first):
    """Closed walk [v, first, ..., u] with an edge u -> v, inside the component."""
    from collections import deque
    if first == v:
        return [v]
    parent = {first: None}
    dq = deque([first])
    while dq:
        w = dq.popleft()
        for nx in range(*rows[w]):
            if nx == v:
                path = []
                cur = w
                while cur is not None:
                    path.append(cur)
                    cur = parent[cur]
                path.reverse()
                return [v] + path
            if nx in scc_set and nx not in parent:
                parent[nx] = w
                dq.append(nx)
    return None


def _orbit_with_period(system: MarkovSystem, p: int):
    """An explicit orbit of minimal period p from the point-cycle graph."""
    nxt = system.next_point
    for start in range(len(nxt)):
        seen = {}
        v = start
        k = 0
        while v not in seen and k <= len(nxt):
            seen[v] = k
            v = nxt[v]
            k += 1
        if v in seen and k - seen[v] == p:
            x = system.points[v]
            mp = _minimal_period_exact(system.pl, x, p)
            if mp == p:
                orbit = [x]
                y = x
                for _ in range(p - 1):
                    y = system.pl(y)
                    orbit.append(y)
                return tuple(orbit)
    return None
