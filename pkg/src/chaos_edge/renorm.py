"""Restrictive intervals, affine renormalization, doubling cascades.

A restrictive interval of period n is a proper subinterval J whose first n
images have pairwise disjoint interiors, with f^n(J) ⊆ J, f^n(∂J) ⊆ ∂J, a
turning point somewhere in the orbit of J, and J maximal.  Candidate
boundaries are periodic points of period dividing n next to a turning point,
paired with their nearest f^n-preimage on the other side; every returned
interval re-verifies all four conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .config import DEFAULT, RunConfig
from .errors import BracketError, BudgetExhausted, PreconditionError
from .maps import (FloatUnimodal, Interval, Quadratic, as_pl, domain_of,
                   is_exact, turning_points_of)
from .periods import periodic_points, turning_points_of_iterate
from .piecewise import Affine, PiecewiseLinear, advance_pieces, solve_on_pieces


@dataclass(frozen=True)
class RestrictiveInterval:
    interval: Interval
    period: int
    turning_hits: tuple      # orbit steps at which a turning point is inside
    maximal: bool = True


@dataclass(frozen=True)
class CascadeLevel:
    interval: Interval       # in the coordinates of that level's map
    original: Interval       # pulled back to the original coordinates
    relative_period: int


@dataclass(frozen=True)
class CascadeTrace:
    levels: tuple
    reason: str              # no-restrictive-interval | depth | degenerate-width

    @property
    def depth(self) -> int:
        return len(self.levels)


def _turning_regions(m):
    """Turning structures as closed intervals (plateaus, or degenerate points)."""
    if hasattr(m, "plateaus"):
        return [(z.lo, z.hi) for z in m.plateaus]
    if isinstance(m, PiecewiseLinear):
        regions = []
        for a, b, _ in m.plateau_runs():
            regions.append((a, b))
        xs, ys = m.xs, m.ys
        for i in range(1, len(xs) - 1):
            if (ys[i] - ys[i - 1]) * (ys[i + 1] - ys[i]) < 0:
                regions.append((xs[i], xs[i]))
        return sorted(regions)
    return [(c, c) for c in turning_points_of(m)]


def _image_interval(m, a, b):
    if is_exact(m):
        return as_pl(m).image_interval(a, b)
    vals = [m(a), m(b)]
    for t in turning_points_of(m):
        if a < t < b:
            vals.append(m(t))
    return min(vals), max(vals)


def _orbit_intervals(m, a, b, n):
    out = [(a, b)]
    for _ in range(n - 1):
        a, b = _image_interval(m, a, b)
        out.append((a, b))
    return out


def _interiors_disjoint(intervals, tol) -> bool:
    ordered = sorted(intervals)
    for (a0, b0), (a1, b1) in zip(ordered, ordered[1:]):
        if b0 > a1 + tol:
            return False
    return True


def _solve_iterate_on_side(m, n, target, side_lo, side_hi, config):
    """Solutions of f^n(x) = target with x in [side_lo, side_hi]."""
    if not side_lo < side_hi:
        return []
    if is_exact(m):
        pl = as_pl(m)
        pieces = pl.restrict(side_lo, side_hi).pieces()
        for _ in range(n - 1):
            pieces = advance_pieces(pieces, pl, config.piece_budget)
        return solve_on_pieces(pieces, target)
    turns = turning_points_of_iterate(m, n, config) if n > 1 else list(turning_points_of(m))
    cuts = [side_lo] + [t for t in turns if side_lo < t < side_hi] + [side_hi]
    xtol = config.precision * max(1.0, abs(side_lo), abs(side_hi))

    def fn(x):
        y = x
        for _ in range(n):
            y = m(y)
        return y

    from .periods import newton_polish
    scale = max(1.0, abs(side_lo), abs(side_hi))
    out = []
    for a, b in zip(cuts, cuts[1:]):
        ga, gb = fn(a) - target, fn(b) - target
        if ga == 0:
            out.append(a)
        if ga * gb < 0:
            x0, x1, g0 = a, b, ga
            while x1 - x0 > xtol:
                mid = (x0 + x1) / 2
                gm = fn(mid) - target
                if gm == 0:
                    x0 = x1 = mid
                    break
                if gm * g0 <= 0:
                    x1 = mid
                else:
                    x0, g0 = mid, gm
            x = newton_polish(lambda z: fn(z) - target, (x0 + x1) / 2, scale)
            out.append(min(max(x, side_lo), side_hi))
    if cuts and abs(fn(cuts[-1]) - target) == 0:
        out.append(cuts[-1])
    return sorted(out)


def _verify_restrictive(m, a, b, n, config) -> Optional[RestrictiveInterval]:
    dom = domain_of(m)
    exact = is_exact(m)
    scale = max(1.0, abs(float(dom.lo)), abs(float(dom.hi)))
    # disjointness slack absorbs the root-solver error at repelling boundary
    # points; genuine failures overlap by a macroscopic amount
    tol = 0 if exact else max(1e-10, 100 * config.precision) * scale
    if not (a < b):
        return None
    if a <= dom.lo + tol and b >= dom.hi - tol:
        return None  # must be a proper subinterval
    if not exact and b - a < 1e-4 * float(dom.hi - dom.lo):
        # near-tangent root pairs at a superstable core produce candidate
        # intervals at the sqrt-of-residual scale; genuine ones are O(domain)
        return None
    orbit = _orbit_intervals(m, a, b, n)
    if not _interiors_disjoint(orbit, tol):
        return None
    fa, fb = _image_interval(m, *orbit[-1])
    slack = 0 if exact else 1e-8 * max(1.0, float(b - a))
    if fa < a - slack or fb > b + slack:
        return None
    regions = _turning_regions(m)
    hits = []
    for k, (u, v) in enumerate(orbit):
        for rl, rh in regions:
            if rl <= v and u <= rh:
                hits.append(k)
                break
    if not hits:
        return None
    return RestrictiveInterval(Interval(a, b), n, tuple(hits))


def find_restrictive(m, period: int, config: RunConfig = DEFAULT,
                     max_candidates: int = 8) -> Optional[RestrictiveInterval]:
    """Widest verified restrictive interval of the given period, if any."""
    if period < 2:
        raise PreconditionError("period must be >= 2")
    dom = domain_of(m)
    pts = set()
    for d in range(1, period + 1):
        if period % d != 0:
            continue
        try:
            for orb in periodic_points(m, d, config):
                pts.update(orb.points)
        except BudgetExhausted:
            break
    pts = sorted(pts)
    best = None
    for tlo, thi in _turning_regions(m):
        left = [p for p in pts if p < tlo][-max_candidates:]
        right = [p for p in pts if p > thi][:max_candidates]
        for p in reversed(left):
            mates = _solve_iterate_on_side(m, period, p, thi, dom.hi, config)
            for phat in mates[:max_candidates]:
                ri = _verify_restrictive(m, p, phat, period, config)
                if ri and (best is None or ri.interval.width > best.interval.width):
                    best = ri
        for p in right:
            mates = _solve_iterate_on_side(m, period, p, dom.lo, tlo, config)
            for phat in reversed(mates[-max_candidates:]):
                ri = _verify_restrictive(m, phat, p, period, config)
                if ri and (best is None or ri.interval.width > best.interval.width):
                    best = ri
    return best


def renormalize(m, ri: RestrictiveInterval, config: RunConfig = DEFAULT,
                return_phi: bool = False):
    """Affine rescaling of f^n restricted to the restrictive interval.

    The rescaled map acts on the same interval as the input map; orientation
    is chosen so the result increases at its left endpoint whenever possible.
    """
    n = ri.period
    J = ri.interval
    dom = domain_of(m)
    if is_exact(m):
        pl = as_pl(m)
        pieces = pl.restrict(J.lo, J.hi).pieces()
        for _ in range(n - 1):
            pieces = advance_pieces(pieces, pl, config.piece_budget)
        xs = [pieces[0][0]] + [p[1] for p in pieces]
        ys = [pieces[0][2]] + [p[3] for p in pieces]
        restricted = PiecewiseLinear(xs, ys)
        first = next((p for p in pieces if p[2] != p[3]), None)
        last = next((p for p in reversed(pieces) if p[2] != p[3]), None)
        increasing_left = first is not None and first[3] > first[2]
        increasing_right_flip = last is not None and last[3] > last[2]
        flip = (not increasing_left) and increasing_right_flip
        phi = _affine_onto(J.lo, J.hi, dom.lo, dom.hi, flip)
        out = restricted.conjugate(phi)
        return (out, phi) if return_phi else out
    # float route: the cascade keeps return maps unimodal
    width = float(J.width)
    if width < config.renorm_degenerate_width:
        raise PreconditionError(f"degenerate restrictive interval (width {width:.3e})")
    turns_inside = [c for c in turning_points_of(m) if J.lo < c < J.hi]
    if len(turns_inside) != 1:
        raise PreconditionError(
            f"expected one turning point inside the restrictive interval, found {len(turns_inside)}")
    c = turns_inside[0]

    def f_n(x):
        y = x
        for _ in range(n):
            y = m(y)
        return y

    probe = J.lo + width * 1e-6
    flip = f_n(probe) < f_n(J.lo)
    phi = _affine_onto(J.lo, J.hi, dom.lo, dom.hi, flip)
    phi_inv = phi.inverse()
    fn_local = f_n

    def g(x):
        return phi(fn_local(phi_inv(x)))

    out = FloatUnimodal(g, Interval(dom.lo, dom.hi), phi(c), kind="renormalized")
    return (out, phi) if return_phi else out


def _affine_onto(a, b, d0, d1, flip: bool) -> Affine:
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        a, b, d0, d1 = Fraction(a), Fraction(b), Fraction(d0), Fraction(d1)
    if flip:
        slope = (d0 - d1) / (b - a)
        return Affine(slope, d1 - slope * a)
    slope = (d1 - d0) / (b - a)
    return Affine(slope, d0 - slope * a)


def cascade_trace(m, max_depth: int, config: RunConfig = DEFAULT) -> CascadeTrace:
    """Repeatedly find a period-2 restrictive interval and rescale.

    Consecutive restrictive intervals of zero-entropy maps have relative
    period two, so the cascade is traced by doubling alone; it stops when no
    period-2 restrictive interval survives verification.
    """
    if max_depth < 1:
        raise PreconditionError("max_depth must be >= 1")
    current = m
    chain = []   # affine inverses, level coords -> original coords
    levels = []
    reason = "depth"
    for _ in range(max_depth):
        ri = find_restrictive(current, 2, config)
        if ri is None:
            reason = "no-restrictive-interval"
            break
        lo, hi = ri.interval.lo, ri.interval.hi
        for inv in reversed(chain):
            lo, hi = inv(lo), inv(hi)
        if lo > hi:
            lo, hi = hi, lo
        levels.append(CascadeLevel(ri.interval, Interval(lo, hi), 2))
        try:
            current, phi = renormalize(current, ri, config, return_phi=True)
        except PreconditionError:
            reason = "degenerate-width"
            levels.pop()
            break
        chain.append(phi.inverse())
    return CascadeTrace(tuple(levels), reason)


# ---------------------------------------------------------------------
# superstable parameters and the doubling ratio
# ---------------------------------------------------------------------


class QuadraticFamily:
    """The family x -> x^2 + c on its invariant interval, c in [-2, 1/4]."""

    kind = "quadratic"
    bracket0 = (-0.75, 0.2)
    bracket1 = (-1.5, -0.6)

    def crit_orbit_value(self, c: float, n: int) -> float:
        x = 0.0
        for _ in range(n):
            x = x * x + c
        return x

    def map_at(self, c: float) -> Quadratic:
        return Quadratic(c)


@dataclass(frozen=True)
class SuperstableSequence:
    params: tuple
    deltas: tuple
    precision_flag: bool

    @property
    def value(self) -> float:
        if not self.deltas:
            raise PreconditionError("need at least three parameters for a ratio")
        return self.deltas[-1]


def superstable_sequence(family, k_max: int, tol: float = 1e-13) -> list:
    """Parameters c_0..c_k_max with the critical point periodic of period 2^k."""
    cs = []
    for k in range(k_max + 1):
        if k == 0:
            lo, hi = family.bracket0
        elif k == 1:
            lo, hi = family.bracket1
        else:
            step = cs[k - 1] - cs[k - 2]
            lo = cs[k - 1] + step / 2
            hi = cs[k - 1] + step / 64

        def phi(c, _n=2 ** k):
            return family.crit_orbit_value(c, _n)

        flo, fhi = phi(lo), phi(hi)
        grow = 0
        while flo * fhi > 0 and grow < 24:
            lo += (lo - hi)
            flo = phi(lo)
            grow += 1
        if flo * fhi > 0:
            raise BracketError(
                f"no sign change for the period-2^{k} superstable equation "
                f"near [{lo:.6g}, {hi:.6g}] (phi = {flo:.3g}, {fhi:.3g})")
        while hi - lo > tol:
            mid = (lo + hi) / 2
            fm = phi(mid)
            if fm == 0:
                lo = hi = mid
                break
            if fm * flo <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
        cs.append((lo + hi) / 2)
    return cs


def superstable_parameter(family, k: int, tol: float = 1e-13) -> float:
    if k < 0:
        raise PreconditionError("k must be >= 0")
    return superstable_sequence(family, k, tol)[-1]


def feigenbaum_delta(family, k_max: int, tol: float = 1e-13) -> SuperstableSequence:
    """Doubling ratios delta_k = (c_{k-1}-c_{k-2})/(c_k-c_{k-1}) up to k_max."""
    if k_max < 5:
        raise PreconditionError("k_max must be >= 5 for a stable ratio")
    cs = superstable_sequence(family, k_max, tol)
    deltas = []
    flag = False
    eps = 2.2e-16
    for k in range(2, k_max + 1):
        d_prev = cs[k - 1] - cs[k - 2]
        d_cur = cs[k] - cs[k - 1]
        if abs(d_cur) < 1e3 * eps:
            flag = True
            break
        deltas.append(d_prev / d_cur)
    return SuperstableSequence(tuple(cs), tuple(deltas), flag)
