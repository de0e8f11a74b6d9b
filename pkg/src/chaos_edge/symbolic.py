"""Itineraries, kneading data, shapes and the projection onto stunted maps.

Symbols are small integers: lap j (0-based, m+1 laps) is encoded as ``j`` and
the address of the j-th turning point / plateau (1-based) as ``-j``.  The
string form uses the lap digit or ``Cj``.

Two symbol conventions coexist deliberately:

* plain itineraries resolve exact hits of a turning point or any point of a
  closed plateau to the address symbol;
* kneading sequences are the itineraries of the turning/plateau *values* and
  resolve every exact hit of a turning point or plateau boundary to the right
  (one consistent one-sided convention, never left limits), so a kneading
  sequence over laps is directly comparable with right-limit itineraries of
  the base zigzag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError
from .maps import (SawtoothBase, StuntedSawtooth, build_stunted, domain_of,
                   eval_s0, is_exact, turning_points_of)


def sym_str(s: int) -> str:
    return str(s) if s >= 0 else f"C{-s}"


def syms_str(seq) -> str:
    return "".join(sym_str(s) for s in seq)


def parse_syms(text: str):
    # one digit per symbol (maps with more than nine turning points would
    # need a delimited format)
    out = []
    i = 0
    while i < len(text):
        if text[i] == "C":
            out.append(-int(text[i + 1]))
            i += 2
        else:
            out.append(int(text[i]))
            i += 1
    return tuple(out)


@dataclass(frozen=True)
class Itinerary:
    symbols: tuple

    @property
    def depth(self) -> int:
        return len(self.symbols)

    def __str__(self):
        return syms_str(self.symbols)


@dataclass(frozen=True)
class KneadingInvariant:
    nu: tuple           # one symbol tuple per turning point / plateau
    depth: int

    def as_strings(self):
        return [syms_str(s) for s in self.nu]


@dataclass(frozen=True)
class Shape:
    """Pairing of each turning point with the rank of its value among distinct values."""

    pairs: tuple        # ((i, rank), ...) with i 1-based
    value_count: int

    def __post_init__(self):
        ranks = {r for _, r in self.pairs}
        if ranks and (min(ranks) < 1 or max(ranks) > self.value_count):
            raise ValueError("ranks out of range")
        if ranks != set(range(1, self.value_count + 1)):
            raise ValueError("every rank must be attained")


# ---------------------------------------------------------------------
# symbol resolution
# ---------------------------------------------------------------------


def _symbol_closed_stunted(T: StuntedSawtooth, y) -> int:
    for i, z in enumerate(T.plateaus):
        if z.lo <= y <= z.hi:
            return -(i + 1)
    laps = sum(1 for z in T.plateaus if z.hi < y)
    return laps


def _symbol_right_stunted(T: StuntedSawtooth, y) -> int:
    """Symbol of y + 0⁺ (the right-limit convention used for kneading)."""
    if y == T.domain.hi:
        return _symbol_closed_stunted(T, y)
    for i, z in enumerate(T.plateaus):
        if z.lo <= y < z.hi:
            return -(i + 1)
    laps = sum(1 for z in T.plateaus if z.hi <= y)
    return laps


def _symbol_closed_smooth(m, y) -> int:
    c = turning_points_of(m)
    for i, ci in enumerate(c):
        if y == ci:
            return -(i + 1)
    return sum(1 for ci in c if ci < y)


def _symbol_right_smooth(m, y) -> int:
    c = turning_points_of(m)
    return sum(1 for ci in c if ci <= y)


def itinerary(m, x, depth: int) -> Itinerary:
    """Symbol per iterate; exact hits of a turning point or closed plateau
    produce the address symbol and the orbit continues through the image."""
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    dom = domain_of(m)
    if not dom.contains(x):
        raise PreconditionError(f"{x} outside the domain")
    stunted = isinstance(m, StuntedSawtooth)
    out = []
    y = x
    for _ in range(depth):
        if stunted:
            s = _symbol_closed_stunted(m, y)
            out.append(s)
            y = m.plateau_values[-s - 1] if s < 0 else m(y)
        else:
            s = _symbol_closed_smooth(m, y)
            out.append(s)
            y = m(turning_points_of(m)[-s - 1]) if s < 0 else m(y)
    return Itinerary(tuple(out))


def kneading(m, depth: int) -> KneadingInvariant:
    """Kneading invariant: per turning point, the itinerary of its value.

    Exact hits of a plateau boundary or a turning point are resolved to the
    right; landing strictly inside a plateau yields that plateau's address
    and continues through the plateau value.
    """
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    stunted = isinstance(m, StuntedSawtooth)
    nu = []
    if stunted:
        starts = list(m.plateau_values)
    else:
        starts = [m(c) for c in turning_points_of(m)]
    for v in starts:
        seq = []
        y = v
        for _ in range(depth):
            if stunted:
                s = _symbol_right_stunted(m, y)
                seq.append(s)
                y = m.plateau_values[-s - 1] if s < 0 else m(y)
            else:
                seq.append(_symbol_right_smooth(m, y))
                y = m(y)
        nu.append(tuple(seq))
    return KneadingInvariant(tuple(nu), depth)


def shape(m) -> Shape:
    """Order pattern of turning points versus ranked distinct critical values."""
    from .maps import critical_values
    distinct, ranks = critical_values(m)
    pairs = tuple((i + 1, r) for i, r in enumerate(ranks))
    return Shape(pairs, len(distinct))


def signed_compare(a, b, epsilon: int = 1) -> int:
    """Order two itineraries as the points carrying them would be ordered.

    Returns -1, 0 or +1.  The comparison sign flips after every symbol whose
    lap is orientation reversing (lap j has slope sign epsilon·(-1)^j); equal
    prefixes (or a shared address symbol) compare equal at this depth.
    """
    sa = a.symbols if isinstance(a, Itinerary) else tuple(a)
    sb = b.symbols if isinstance(b, Itinerary) else tuple(b)
    sign = 1

    def key(s):
        return 2 * s if s >= 0 else -2 * s - 1

    for x, y in zip(sa, sb):
        if x != y:
            return sign if key(x) > key(y) else -sign
        if x < 0:
            return 0
        if epsilon * (-1) ** x < 0:
            sign = -sign
    return 0


# ---------------------------------------------------------------------
# projection onto stunted maps
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class PsiResult:
    stunted: StuntedSawtooth
    s: tuple            # plateau right endpoints, one per turning point
    widths: tuple       # residual candidate-interval widths at this depth


def _pullback_right_limit(base: SawtoothBase, target):
    """Candidate interval (lo, hi) for points whose right-limit base-itinerary
    starts with ``target``, via exact backward pullback through the affine laps."""
    lo, hi = -base.e, base.e
    for sym in reversed(target):
        if sym < 0:
            raise ValueError("address symbol in target; pullback needs lap symbols only")
        lap = base.lap_interval(sym)
        slope = base.lap_slope(sym)
        anchor = lap.lo if sym > 0 else lap.hi  # turning point adjacent to the lap
        v_anchor = eval_s0(base, anchor)
        # solve slope*(x - anchor) + v_anchor in [lo, hi] within the lap
        t0 = anchor + (lo - v_anchor) / Fraction(slope)
        t1 = anchor + (hi - v_anchor) / Fraction(slope)
        if t0 > t1:
            t0, t1 = t1, t0
        t0 = max(t0, lap.lo)
        t1 = min(t1, lap.hi)
        if t0 > t1:
            raise ValueError("target itinerary is not realizable in the base zigzag")
        lo, hi = t0, t1
    return lo, hi


def _lap_affine(base: SawtoothBase, j: int):
    """Slope and intercept of the base zigzag on lap j."""
    lap = base.lap_interval(j)
    anchor = lap.lo if j > 0 else lap.hi
    v = eval_s0(base, anchor)
    s = Fraction(base.lap_slope(j))
    return s, v - s * anchor


def _signed_itinerary_s0(base: SawtoothBase, y, depth: int):
    """Right-limit itinerary of y under the base zigzag (no plateaus); the
    side flips with the orientation of each lap traversed."""
    c = base.turning_points
    d = 1
    out = []
    for _ in range(depth):
        if y < -base.e or y > base.e:
            return None
        j = 0
        for ck in c:
            if y > ck or (y == ck and d > 0):
                j += 1
        out.append(j)
        s, o = _lap_affine(base, j)
        y = s * y + o
        d = d if s > 0 else -d
    return out


def _periodic_tail_point(base: SawtoothBase, target):
    """Exact point whose right-limit base-itinerary starts with ``target``,
    when the target has an eventually periodic tail; None otherwise.

    The periodic tail pins an exact periodic point (fixed point of the affine
    composition along its laps); pulling it back through the preperiod laps
    gives the point exactly.  The result is verified symbolically.
    """
    L = len(target)
    for p in range(1, max(2, (L - 4) // 2) + 1):
        q = L - 2 * p - 2
        while q > 0 and target[q - 1] == target[q - 1 + p]:
            q -= 1
        if q < 0 or L - q < 2 * p + 2:
            continue
        if any(target[i] != target[i + p] for i in range(q, L - p)):
            continue
        s, o = Fraction(1), Fraction(0)
        for j in target[q:q + p]:
            sj, oj = _lap_affine(base, j)
            s, o = sj * s, sj * o + oj
        if s == 1:
            continue
        x = o / (1 - s)
        ok = True
        for j in reversed(target[:q]):
            sj, oj = _lap_affine(base, j)
            x = (x - oj) / sj
            lap = base.lap_interval(j)
            if not lap.lo <= x <= lap.hi:
                ok = False
                break
        if not ok:
            continue
        if _signed_itinerary_s0(base, x, L) == list(target):
            return x
    return None


def psi(m, base: SawtoothBase, depth: int = 64,
        width_tol: Optional[Fraction] = None) -> PsiResult:
    """Project a multimodal map onto the stunted family with the same kneading.

    For each turning point, finds the point s_i in the (i+1)-th lap of the
    base zigzag whose right-limit base-itinerary matches the map's kneading
    sequence to the given depth, then truncates the base at height S0(s_i).
    Eventually periodic kneading tails are solved exactly (reported width 0);
    otherwise s_i is the left end of the exact candidate interval, whose
    residual width is reported.  The kneading must consist of lap symbols
    only.
    """
    c = turning_points_of(m)
    if len(c) != base.m:
        raise PreconditionError(
            f"map has {len(c)} turning points but the base has {base.m}")
    dom = domain_of(m)
    probe = dom.lo + (dom.hi - dom.lo) / (10**6 if is_exact(m) else 1e6)
    eps_m = 1 if m(probe) > m(dom.lo) else -1
    if eps_m != base.epsilon:
        raise PreconditionError("orientation mismatch between map and base")
    nu = kneading(m, depth)
    ss = []
    widths = []
    for k in range(base.m):
        seq = nu.nu[k]
        if any(s < 0 for s in seq):
            raise ValueError(
                f"kneading sequence {k + 1} enters a plateau; "
                "the projection needs lap symbols only")
        target = (k + 1,) + tuple(seq)
        c_lo, c_hi = _pullback_right_limit(base, target)
        exact_s = _periodic_tail_point(base, target)
        if exact_s is not None and c_lo <= exact_s <= c_hi:
            ss.append(exact_s)
            widths.append(Fraction(0))
        else:
            ss.append(c_lo)
            widths.append(c_hi - c_lo)
    if width_tol is not None:
        bad = [w for w in widths if w > width_tol]
        if bad:
            raise PreconditionError(
                f"depth {depth} leaves candidate width {max(bad)} > {width_tol}")
    xi = []
    for i, s_k in enumerate(ss, start=1):
        v = eval_s0(base, s_k)
        xi.append(v if base.is_max(i) else -v)
    return PsiResult(build_stunted(base, xi), tuple(ss), tuple(widths))
