"""Map families: sawtooth bases, stunted sawtooth maps, unicritical compositions.

Stunted sawtooth maps are kept exact (rational breakpoints and plateau
heights), so their dynamics is decidable.  Polynomial families are floating
point with configurable root-finding precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import DescriptorError, DomainEscapeError, PreconditionError
from .piecewise import PiecewiseLinear

Rational = Fraction


def rat(x) -> Fraction:
    """Coerce ints, strings like '3/2', and Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**15)
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def interior_contains(self, x) -> bool:
        return self.lo < x < self.hi


# =====================================================================
# Sawtooth base S0 and stunted maps
# =====================================================================


@dataclass(frozen=True)
class SawtoothBase:
    """Base zigzag with m turning points, slopes ±(m+2) and extremal values ±(m+2).

    The map fixes {-e, e} setwise, where e = m·lam/(lam-1); it is not a
    self-map of [-e, e] (its extrema stick out), which is exactly what the
    plateau truncation repairs.
    """

    m: int
    epsilon: int
    lam: int = field(init=False)
    e: Fraction = field(init=False)
    turning_points: tuple = field(init=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one turning point (m >= 1)")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        lam = self.m + 2
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "e", Fraction(self.m * lam, lam - 1))
        object.__setattr__(
            self, "turning_points",
            tuple(Fraction(-self.m - 1 + 2 * i) for i in range(1, self.m + 1)))

    @property
    def domain(self) -> Interval:
        return Interval(-self.e, self.e)

    def turning_value(self, i: int) -> Fraction:
        """Extremal value at the i-th turning point (1-based): ±lam."""
        return Fraction(self.epsilon * self.lam * (-1) ** (i + 1))

    def is_max(self, i: int) -> bool:
        return self.turning_value(i) > 0

    def lap_slope(self, j: int) -> int:
        """Slope on the j-th lap (0-based, m+1 laps)."""
        return self.epsilon * self.lam * (-1) ** j

    def lap_interval(self, j: int) -> Interval:
        c = self.turning_points
        lo = -self.e if j == 0 else c[j - 1]
        hi = self.e if j == self.m else c[j]
        return Interval(lo, hi)

    def __call__(self, x):
        return eval_s0(self, x)


def build_base(m: int, epsilon: int = 1) -> SawtoothBase:
    return SawtoothBase(m, epsilon)


def eval_s0(base: SawtoothBase, x):
    """Evaluate the base zigzag at x ∈ [-e, e] (exact for rational x)."""
    if x < -base.e or x > base.e:
        raise DomainEscapeError(f"{x} outside [{-base.e}, {base.e}]")
    c = base.turning_points
    # anchor at the nearest turning point on the left (or c_1 for the first lap)
    j = 0
    for k, ck in enumerate(c):
        if x >= ck:
            j = k + 1
        else:
            break
    anchor_i = max(j, 1)
    return base.turning_value(anchor_i) + base.lap_slope(j) * (x - c[anchor_i - 1])


@dataclass(frozen=True)
class StuntedSawtooth:
    """Base zigzag truncated to constant plateaus of signed heights xi.

    ``xi[i]`` is the plateau value when the i-th turning point is a maximum
    of the base and minus the plateau value when it is a minimum; admissible
    parameters satisfy xi[i] >= -xi[i+1] (disjoint plateau interiors, touching
    allowed and flagged degenerate).
    """

    base: SawtoothBase
    xi: tuple
    plateaus: tuple = field(init=False)
    plateau_values: tuple = field(init=False)
    degenerate: bool = field(init=False)
    pl: PiecewiseLinear = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        b = self.base
        xi = tuple(rat(v) for v in self.xi)
        object.__setattr__(self, "xi", xi)
        if len(xi) != b.m:
            raise ValueError(f"need {b.m} plateau parameters, got {len(xi)}")
        for i, v in enumerate(xi):
            if abs(v) > b.e:
                raise ValueError(f"xi[{i}]={v} outside [-e, e] = [-{b.e}, {b.e}]")
        degenerate = False
        for i in range(b.m - 1):
            if xi[i] < -xi[i + 1]:
                raise ValueError(
                    f"plateau interiors overlap: xi[{i}]={xi[i]} < -xi[{i+1}]={-xi[i+1]}")
            if xi[i] == -xi[i + 1]:
                degenerate = True
        plateaus = []
        values = []
        for i, v in enumerate(xi, start=1):
            half = Fraction(b.lam - v, b.lam)
            c = b.turning_points[i - 1]
            plateaus.append(Interval(c - half, c + half))
            values.append(v if b.is_max(i) else -v)
        object.__setattr__(self, "plateaus", tuple(plateaus))
        object.__setattr__(self, "plateau_values", tuple(values))
        object.__setattr__(self, "degenerate", degenerate)
        object.__setattr__(self, "pl", _lower_stunted(b, plateaus))

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def domain(self) -> Interval:
        return self.base.domain

    @property
    def turning_points(self) -> tuple:
        return self.base.turning_points

    kind = "stunted"

    def __call__(self, x):
        return self.pl(x)

    def plateau_index(self, x) -> Optional[int]:
        """0-based index of the closed plateau containing x, else None."""
        for i, z in enumerate(self.plateaus):
            if z.lo <= x <= z.hi:
                return i
        return None

    def shifted(self, delta: Sequence) -> "StuntedSawtooth":
        new = tuple(v + rat(d) for v, d in zip(self.xi, delta))
        return StuntedSawtooth(self.base, new)


def _lower_stunted(base: SawtoothBase, plateaus) -> PiecewiseLinear:
    pts = [-base.e, base.e]
    for z in plateaus:
        pts.append(z.lo)
        pts.append(z.hi)
    xs = sorted(set(pts))
    return PiecewiseLinear(xs, [eval_s0(base, x) for x in xs])


def build_stunted(base: SawtoothBase, xi) -> StuntedSawtooth:
    return StuntedSawtooth(base, tuple(xi))


def full_stunted(base: SawtoothBase) -> StuntedSawtooth:
    """The widest admissible truncation (all signed heights equal to e)."""
    return StuntedSawtooth(base, (base.e,) * base.m)


# =====================================================================
# Floating-point families
# =====================================================================


@dataclass(frozen=True)
class Quadratic:
    """x^2 + c on its invariant interval [-beta, beta], c in [-2, 1/4]."""

    c: float
    beta: float = field(init=False)

    def __post_init__(self):
        disc = 1 - 4 * self.c
        if disc < 0 or self.c < -2:
            raise ValueError(f"no invariant interval for c={self.c}")
        object.__setattr__(self, "beta", (1 + math.sqrt(disc)) / 2)

    kind = "quadratic"

    @property
    def domain(self) -> Interval:
        return Interval(-self.beta, self.beta)

    @property
    def turning_points(self) -> tuple:
        return (0.0,)

    def __call__(self, x):
        return x * x + self.c

    def preimages(self, w):
        r = w - self.c
        if r < 0:
            return []
        s = math.sqrt(r)
        out = [x for x in (-s, s) if -self.beta <= x <= self.beta]
        return sorted(set(out))

    def derivative(self, x):
        return 2 * x


def _stage_b(ell: int, a: float, tol: float = 1e-14) -> float:
    """Positive root of b^ell + a = b beyond the minimum of g(b) = b^ell + a - b.

    g decreases up to b* = (1/ell)^(1/(ell-1)) and increases after, so a root
    exists iff g(b*) <= 0 and then bisection on [b*, hi] brackets it; a Newton
    polish lands on the machine root (exact for integer roots like b=2).
    """
    g = lambda b: b ** ell + a - b
    bstar = (1.0 / ell) ** (1.0 / (ell - 1))
    if g(bstar) > 0:
        raise ValueError(
            f"stage (ell={ell}, a={a}) has no invariant interval: "
            f"min of b^{ell}+a-b is {g(bstar):.6g} > 0")
    hi = max(2 * bstar, 1.5)
    for _ in range(200):
        if g(hi) > 0:
            break
        hi *= 2
    else:
        raise ValueError("could not bracket the fixed-point equation")
    lo = bstar
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if g(mid) > 0:
            hi = mid
        else:
            lo = mid
    b = (lo + hi) / 2
    for _ in range(5):
        d = ell * b ** (ell - 1) - 1
        if d == 0:
            break
        step = g(b) / d
        b -= step
        if step == 0:
            break
    return b


@dataclass(frozen=True)
class PolynomialTypeB:
    """Composition q_k ∘ … ∘ q_1 of rescaled unicritical stages on [-1, 1].

    Each stage comes from p(z) = z^ell + a with invariant interval [-b, b]
    (b > 0, b^ell + a = b, a >= -b), rescaled by A(z) = -b z so that
    q(-1) = q(1) = -1.  Interior stages must satisfy q(0) > 0 (a < 0).
    """

    stages: tuple
    bs: tuple = field(init=False)
    turning_points: tuple = field(init=False)

    def __post_init__(self):
        stages = tuple((int(ell), float(a)) for ell, a in self.stages)
        object.__setattr__(self, "stages", stages)
        if not stages:
            raise ValueError("need at least one stage")
        bs = []
        for idx, (ell, a) in enumerate(stages):
            if ell < 2 or ell % 2 != 0:
                raise ValueError(f"stage order must be even and >= 2, got {ell}")
            b = _stage_b(ell, a)
            if a < -b:
                raise ValueError(
                    f"stage (ell={ell}, a={a}) not invariant: a < -b = {-b:.6g}")
            if idx < len(stages) - 1 and a >= 0:
                raise ValueError(
                    f"interior stage {idx + 1} needs value q(0) = {-a/b:.6g} > 0 (a < 0)")
            bs.append(b)
        object.__setattr__(self, "bs", tuple(bs))
        object.__setattr__(self, "turning_points", tuple(self._turning_points()))

    kind = "type_b"

    @property
    def domain(self) -> Interval:
        return Interval(-1.0, 1.0)

    def stage_eval(self, i: int, x: float) -> float:
        ell, a = self.stages[i]
        b = self.bs[i]
        return -(b ** ell * x ** ell + a) / b

    def stage_preimages(self, i: int, w: float):
        ell, a = self.stages[i]
        b = self.bs[i]
        r = (-w * b - a) / b ** ell
        if r < 0:
            return []
        s = r ** (1.0 / ell)
        return sorted({x for x in (-s, s) if -1.0 <= x <= 1.0})

    def __call__(self, x):
        for i in range(len(self.stages)):
            x = self.stage_eval(i, x)
        return x

    def preimages(self, w):
        targets = [w]
        for i in range(len(self.stages) - 1, -1, -1):
            nxt = []
            for t in targets:
                nxt.extend(self.stage_preimages(i, t))
            targets = sorted(set(nxt))
        return targets

    def _turning_points(self):
        # turning points of q_k∘…∘q_1 = turnings so far ∪ preimages of 0 under the prefix
        turns = {0.0}
        for i in range(1, len(self.stages)):
            prefix_pre = [0.0]
            for j in range(i - 1, -1, -1):
                nxt = []
                for t in prefix_pre:
                    nxt.extend(self.stage_preimages(j, t))
                prefix_pre = nxt
            turns.update(prefix_pre)
        return sorted(turns)


def build_type_b(stages) -> PolynomialTypeB:
    return PolynomialTypeB(tuple(stages))


@dataclass(frozen=True)
class FloatUnimodal:
    """Unimodal float map given by a callable; used for renormalized return maps."""

    fn: Callable
    domain: Interval
    turning: float
    kind: str = "float-unimodal"

    @property
    def turning_points(self) -> tuple:
        return (self.turning,)

    def __call__(self, x):
        return self.fn(x)


# =====================================================================
# Generic operations
# =====================================================================


def is_exact(m) -> bool:
    return isinstance(m, (StuntedSawtooth, PiecewiseLinear))


def as_pl(m) -> PiecewiseLinear:
    if isinstance(m, StuntedSawtooth):
        return m.pl
    if isinstance(m, PiecewiseLinear):
        return m
    raise TypeError(f"{m!r} is not an exact piecewise-linear map")


def domain_of(m) -> Interval:
    if isinstance(m, PiecewiseLinear):
        return Interval(m.lo, m.hi)
    return m.domain


def turning_points_of(m) -> tuple:
    if isinstance(m, PiecewiseLinear):
        # centers of plateau runs and isolated direction flips
        pts = []
        runs = m.plateau_runs()
        for a, b, _ in runs:
            pts.append((a + b) / 2)
        xs, ys = m.xs, m.ys
        for i in range(1, len(xs) - 1):
            d0 = ys[i] - ys[i - 1]
            d1 = ys[i + 1] - ys[i]
            if d0 * d1 < 0:
                pts.append(xs[i])
        return tuple(sorted(pts))
    return tuple(m.turning_points)


def iterate(m, x, n: int):
    """n-th image of x (exact for rational piecewise-linear maps)."""
    if n < 0:
        raise ValueError("iterate count must be >= 0")
    f = m.pl if isinstance(m, StuntedSawtooth) else m
    for _ in range(n):
        x = f(x)
    return x


def critical_values(m):
    """Sorted distinct turning/plateau values with the rank of each turning point.

    Returns (values, ranks) where ranks[i] is the 1-based rank of the i-th
    turning point's value among the distinct values.
    """
    if isinstance(m, StuntedSawtooth):
        vals = list(m.plateau_values)
    elif isinstance(m, PiecewiseLinear):
        vals = [m(c) for c in turning_points_of(m)]
    else:
        vals = [m(c) for c in m.turning_points]
    if not vals:
        raise PreconditionError("map has no turning points or plateaus")
    if all(isinstance(v, (Fraction, int)) for v in vals):
        distinct = sorted(set(vals))
        ranks = [distinct.index(v) + 1 for v in vals]
        return distinct, ranks
    # float values: group within tolerance
    tol = 1e-9 * max(1.0, max(abs(float(v)) for v in vals))
    distinct = []
    for v in sorted(float(v) for v in vals):
        if not distinct or v - distinct[-1] > tol:
            distinct.append(v)
    ranks = []
    for v in vals:
        k = min(range(len(distinct)), key=lambda i: abs(distinct[i] - float(v)))
        ranks.append(k + 1)
    return distinct, ranks


# =====================================================================
# JSON descriptors
# =====================================================================


def parse_map(desc: dict):
    """Build a map from a JSON-style descriptor (rationals as 'p/q' strings)."""
    if not isinstance(desc, dict) or "kind" not in desc:
        raise DescriptorError("descriptor must be an object with a 'kind' field")
    kind = desc["kind"]
    try:
        if kind == "stunted":
            base = build_base(int(desc["m"]), int(desc.get("epsilon", 1)))
            xi = [rat(v) for v in desc["xi"]]
            return build_stunted(base, xi)
        if kind == "type_b":
            return build_type_b([(int(e), float(a)) for e, a in desc["stages"]])
        if kind == "quadratic":
            return Quadratic(float(desc["c"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DescriptorError(f"bad {kind!r} descriptor: {exc}") from exc
    raise DescriptorError(f"unknown map kind {kind!r}")


def serialize_map(m) -> dict:
    if isinstance(m, StuntedSawtooth):
        return {"kind": "stunted", "m": m.base.m, "epsilon": m.base.epsilon,
                "xi": [str(v) for v in m.xi]}
    if isinstance(m, PolynomialTypeB):
        return {"kind": "type_b", "stages": [[e, a] for e, a in m.stages]}
    if isinstance(m, Quadratic):
        return {"kind": "quadratic", "c": m.c}
    raise DescriptorError(f"cannot serialize {type(m).__name__}")
