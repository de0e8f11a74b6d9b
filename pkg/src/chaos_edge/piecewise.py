"""Exact piecewise-linear interval maps over the rationals.

Everything here is exact: breakpoints and values are ``Fraction``s, so plateau
hits, periodicity and lap counts are decided, not estimated.  A map is stored
as breakpoints ``xs`` with values ``ys``; between breakpoints the map is
affine, and a run of equal consecutive values is a plateau.

The n-th iterate of a map is represented by its *pieces*: maximal intervals on
which the iterate is affine (or constant), each carried as
``(a, b, f(a), f(b))``.  Pieces are produced level by level by pulling the
outer map's breakpoints back through each affine piece, which keeps the
representation exact and the cost proportional to the lap count.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExhausted, DomainEscapeError

Piece = tuple  # (a, b, fa, fb); fa == fb marks a constant piece


@dataclass(frozen=True)
class Affine:
    """x -> a*x + b with exact coefficients."""

    a: Fraction
    b: Fraction

    def __call__(self, x):
        return self.a * x + self.b

    def inverse(self) -> "Affine":
        return Affine(1 / self.a, -self.b / self.a)

    def compose(self, other: "Affine") -> "Affine":
        # self after other
        return Affine(self.a * other.a, self.a * other.b + self.b)


class PiecewiseLinear:
    """Continuous piecewise-linear map given by breakpoints and values."""

    __slots__ = ("xs", "ys")

    def __init__(self, xs, ys):
        xs = tuple(xs)
        ys = tuple(ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("need matching breakpoints and values, at least two")
        for u, v in zip(xs, xs[1:]):
            if not u < v:
                raise ValueError("breakpoints must be strictly increasing")
        self.xs = xs
        self.ys = ys

    # -- basic queries ---------------------------------------------------

    @property
    def lo(self):
        return self.xs[0]

    @property
    def hi(self):
        return self.xs[-1]

    def __call__(self, x):
        xs, ys = self.xs, self.ys
        if x < xs[0] or x > xs[-1]:
            raise DomainEscapeError(f"{x} outside [{xs[0]}, {xs[-1]}]")
        i = bisect_right(xs, x) - 1
        if i >= len(xs) - 1:
            return ys[-1]
        x0, x1, y0, y1 = xs[i], xs[i + 1], ys[i], ys[i + 1]
        if y0 == y1:
            return y0
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0)

    def pieces(self):
        """Level-1 pieces (the map's own segments)."""
        xs, ys = self.xs, self.ys
        return [(xs[i], xs[i + 1], ys[i], ys[i + 1]) for i in range(len(xs) - 1)]

    def is_self_map(self) -> bool:
        lo, hi = self.lo, self.hi
        return all(lo <= y <= hi for y in self.ys)

    def plateau_runs(self):
        """Maximal intervals on which the map is constant, with their values."""
        runs = []
        xs, ys = self.xs, self.ys
        i = 0
        while i < len(xs) - 1:
            if ys[i] == ys[i + 1]:
                j = i
                while j < len(xs) - 1 and ys[j + 1] == ys[i]:
                    j += 1
                runs.append((xs[i], xs[j], ys[i]))
                i = j
            else:
                i += 1
        return runs

    def image_interval(self, a, b):
        """Exact image [min, max] of [a, b] ⊆ domain."""
        if a > b:
            a, b = b, a
        va, vb = self(a), self(b)
        lo = min(va, vb)
        hi = max(va, vb)
        i = bisect_right(self.xs, a)
        j = bisect_left(self.xs, b)
        for k in range(i, j):
            y = self.ys[k]
            if y < lo:
                lo = y
            elif y > hi:
                hi = y
        return lo, hi

    def restrict(self, a, b) -> "PiecewiseLinear":
        if not (self.lo <= a < b <= self.hi):
            raise ValueError("restriction outside domain")
        i = bisect_right(self.xs, a)
        j = bisect_left(self.xs, b)
        xs = (a,) + self.xs[i:j] + (b,)
        ys = (self(a),) + self.ys[i:j] + (self(b),)
        return PiecewiseLinear(xs, ys)

    def conjugate(self, phi: Affine) -> "PiecewiseLinear":
        """Return phi ∘ self ∘ phi⁻¹ (exact)."""
        inv = phi.inverse()
        pts = [(phi(x), phi(y)) for x, y in zip(self.xs, self.ys)]
        if phi.a < 0:
            pts.reverse()
        return PiecewiseLinear([p for p, _ in pts], [v for _, v in pts])

    def __eq__(self, other):
        return (isinstance(other, PiecewiseLinear)
                and self.xs == other.xs and self.ys == other.ys)

    def __hash__(self):
        return hash((self.xs, self.ys))

    def __repr__(self):
        return f"PiecewiseLinear({len(self.xs)} breakpoints on [{self.lo}, {self.hi}])"


def from_samples(fn, xs) -> PiecewiseLinear:
    return PiecewiseLinear(xs, [fn(x) for x in xs])


# -- iterated pieces -----------------------------------------------------


def advance_pieces(pieces, pl: PiecewiseLinear, budget: int):
    """Pieces of f∘g from the pieces of g (f = pl), exactly.

    Affine pieces are cut at preimages of the outer breakpoints;
    constant pieces stay constant.
    """
    xs = pl.xs
    lo_dom, hi_dom = pl.lo, pl.hi
    out = []
    for a, b, fa, fb in pieces:
        if fa == fb:
            out.append((a, b, pl(fa), pl(fa)))
            continue
        if fa < lo_dom or fa > hi_dom or fb < lo_dom or fb > hi_dom:
            raise DomainEscapeError("iterate leaves the domain; map is not a self-map")
        vlo, vhi = (fa, fb) if fa < fb else (fb, fa)
        i = bisect_right(xs, vlo)
        j = bisect_left(xs, vhi)
        cuts = xs[i:j]
        if fa > fb:
            cuts = cuts[::-1]
        vals = [fa, *cuts, fb]
        scale = (b - a) / (fb - fa)
        nodes = [a] + [a + (t - fa) * scale for t in cuts] + [b]
        w0 = pl(vals[0])
        for k in range(len(vals) - 1):
            w1 = pl(vals[k + 1])
            out.append((nodes[k], nodes[k + 1], w0, w1))
            w0 = w1
        if len(out) > budget:
            raise BudgetExhausted(f"piece budget ({budget}) exceeded")
    if len(out) > budget:
        raise BudgetExhausted(f"piece budget ({budget}) exceeded")
    return out


class PieceCursor:
    """Lazily extended pieces of f, f², f³, … for one exact map."""

    def __init__(self, pl: PiecewiseLinear, budget: int):
        self.pl = pl
        self.budget = budget
        self._levels = [pl.pieces()]

    def level(self, n: int):
        if n < 1:
            raise ValueError("iterate index must be >= 1")
        while len(self._levels) < n:
            self._levels.append(advance_pieces(self._levels[-1], self.pl, self.budget))
        return self._levels[n - 1]


def strict_lap_count(pieces) -> int:
    """Number of maximal intervals of strict monotonicity (plateaus excluded,
    but an everywhere-constant iterate still counts as one lap)."""
    count = 0
    prev_dir = 0
    for a, b, fa, fb in pieces:
        d = 1 if fb > fa else (-1 if fb < fa else 0)
        if d == 0:
            prev_dir = 0
            continue
        if d != prev_dir:
            count += 1
        prev_dir = d
    return max(count, 1)


def monotone_runs(pieces):
    """Maximal monotone runs as (a, b, direction, image_lo, image_hi)."""
    runs = []
    cur = None
    for a, b, fa, fb in pieces:
        d = 1 if fb > fa else (-1 if fb < fa else 0)
        if d == 0:
            if cur:
                runs.append(cur)
                cur = None
            continue
        if cur and cur[2] == d and cur[1] == a:
            lo = min(cur[3], fa, fb)
            hi = max(cur[4], fa, fb)
            cur = (cur[0], b, d, lo, hi)
        else:
            if cur:
                runs.append(cur)
            cur = (a, b, d, min(fa, fb), max(fa, fb))
    if cur:
        runs.append(cur)
    return runs


def fixed_points_of_pieces(pieces):
    """Exact solutions of F(x) = x, one per piece, as (x, slope).

    Constant pieces contribute their value when it lies inside the piece
    (slope 0, a plateau-absorbed solution).
    """
    sols = []
    for a, b, fa, fb in pieces:
        if fa == fb:
            if a <= fa <= b:
                sols.append((fa, Fraction(0)))
            continue
        s = (fb - fa) / (b - a)
        if s == 1:
            if fa == a:
                raise ValueError("segment of fixed points (slope-1 identity piece)")
            continue
        x = (fa - s * a) / (1 - s)
        if a <= x <= b:
            sols.append((x, s))
    sols.sort(key=lambda t: t[0])
    out = []
    for x, s in sols:
        if out and out[-1][0] == x:
            # keep the non-degenerate slope when a breakpoint repeats
            if out[-1][1] == 0 and s != 0:
                out[-1] = (x, s)
            continue
        out.append((x, s))
    return [(x, s) for x, s in out]


def solve_on_pieces(pieces, target):
    """Exact solutions of F(x) = target, ascending."""
    sols = []
    for a, b, fa, fb in pieces:
        if fa == fb:
            if fa == target:
                sols.append(a)  # whole piece maps there; report its left end
            continue
        lo, hi = (fa, fb) if fa < fb else (fb, fa)
        if lo <= target <= hi:
            x = a + (target - fa) * (b - a) / (fb - fa)
            sols.append(x)
    sols = sorted(set(sols))
    return sols


def two_full_branches(pl: PiecewiseLinear, max_runs: int = 64):
    """Find an interval J with two disjoint monotone branches mapping onto J.

    Returns (J_lo, J_hi, (q1_lo, q1_hi), (q2_lo, q2_hi)) or None.  This is the
    two-full-branch horseshoe test used to witness entropy >= log 2.
    """
    runs = monotone_runs(pl.pieces())
    if len(runs) > max_runs:
        runs = runs[:max_runs]
    n = len(runs)
    for i in range(n):
        for j in range(i + 1, n):
            lo = max(runs[i][3], runs[j][3])
            hi = min(runs[i][4], runs[j][4])
            if not lo < hi:
                continue
            qs = []
            ok = True
            for r in (runs[i], runs[j]):
                q = _monotone_preimage(pl, r, lo, hi)
                if q is None or q[0] < lo or q[1] > hi:
                    ok = False
                    break
                qs.append(q)
            if ok and qs[0][1] <= qs[1][0]:
                return (lo, hi, qs[0], qs[1])
            if ok and qs[1][1] <= qs[0][0]:
                return (lo, hi, qs[1], qs[0])
    return None


def _monotone_preimage(pl: PiecewiseLinear, run, vlo, vhi):
    """Preimage of [vlo, vhi] inside a monotone run of pl, as an interval."""
    a, b, d, _, _ = run
    seg = pl.restrict(a, b)
    lo_t, hi_t = (vlo, vhi) if d > 0 else (vhi, vlo)
    xs_lo = solve_on_pieces(seg.pieces(), lo_t)
    xs_hi = solve_on_pieces(seg.pieces(), hi_t)
    if not xs_lo or not xs_hi:
        return None
    left = xs_lo[0] if d > 0 else xs_hi[0]
    right = xs_hi[-1] if d > 0 else xs_lo[-1]
    if left >= right:
        return None
    return (left, right)
