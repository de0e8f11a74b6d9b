"""Locating the boundary of chaos with two-sided certificates.

A parameter is classified *positive* when a non-power-of-two periodic orbit
(or a two-full-branch horseshoe of an iterate) is found and re-verified, and
*zero* when every plateau orbit closes up into a cycle of period 2^k (k
bounded) and every period found up to the bound is a power of two.  Both
certificates are exact for stunted maps.  Bisection keeps a certified
bracket; probes that certify neither way are flagged and the bracket is
refined around them.

The quadratic family gets a floating-point analogue built on the doubling
tower: a parameter is zero-certified when the critical orbit settles on an
attracting 2^k-cycle *and* the k-level tower of period-2 return maps
validates; it is positive-certified by a non-power-of-two orbit found either
directly or through a return map of the tower.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .config import DEFAULT, RunConfig
from .entropy import Witness, positive_entropy_witness, verify_witness
from .errors import BudgetExhausted, PreconditionError
from .maps import (Quadratic, StuntedSawtooth, SawtoothBase, build_stunted,
                   build_type_b, is_exact, rat)
from .periods import is_power_of_two, periodic_points
from .symbolic import shape

POSITIVE = "positive"
ZERO = "zero"
UNDECIDED = "undecided"


# ---------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class PlateauOrbitRecord:
    plateau: int
    preperiod: int
    period: int

    @property
    def doubling_level(self) -> int:
        return self.period.bit_length() - 1


@dataclass(frozen=True)
class ZeroEntropyCertificate:
    plateau_orbits: tuple          # PlateauOrbitRecord per plateau
    periods_found: frozenset      # all minimal periods <= bound (powers of two)
    levels_bound: int              # admitted k in 2^k
    bound: int

    def as_dict(self):
        return {"plateau_orbits": [{"plateau": r.plateau, "preperiod": r.preperiod,
                                    "period": r.period} for r in self.plateau_orbits],
                "periods_found": sorted(self.periods_found),
                "levels_bound": self.levels_bound, "bound": self.bound}


@dataclass(frozen=True)
class FloatZeroCertificate:
    levels: int                    # validated doubling-tower depth
    period: int                    # 2^levels
    point: float                   # one point of the attracting cycle
    multiplier: float

    def as_dict(self):
        return {"levels": self.levels, "period": self.period,
                "point": self.point, "multiplier": self.multiplier}


@dataclass(frozen=True)
class ProbeResult:
    kind: str
    witness: Optional[Witness] = None
    certificate: object = None
    note: str = ""

    def as_dict(self):
        d = {"kind": self.kind, "note": self.note}
        if self.witness is not None:
            d["witness"] = self.witness.as_dict()
        if self.certificate is not None:
            d["certificate"] = self.certificate.as_dict()
        return d


def plateau_orbit_analysis(T: StuntedSawtooth, budget: int):
    """Exact eventual period of each plateau value's orbit, or None at budget."""
    out = []
    for i, v in enumerate(T.plateau_values):
        seen = {}
        y = v
        k = 0
        rec = None
        while k <= budget:
            if y in seen:
                rec = PlateauOrbitRecord(i, seen[y], k - seen[y])
                break
            seen[y] = k
            y = T(y)
            k += 1
        out.append(rec)
    return out


def zero_entropy_certificate(T: StuntedSawtooth, levels_bound: Optional[int] = None,
                             bound: Optional[int] = None,
                             config: RunConfig = DEFAULT
                             ) -> Optional[ZeroEntropyCertificate]:
    """Exact evidence that every plateau orbit is eventually 2^k-periodic and
    every period found up to the bound is a power of two; None on refutation.

    Budget exhaustion raises instead of returning None, so an absent
    certificate always means an actual refutation at these bounds.  The
    period check walks the exact transition graph, whose cycle structure
    enumerates the complete period set when no component branches.
    """
    from .markov import build_markov, cycle_analysis
    if not is_exact(T):
        raise PreconditionError("zero-entropy certificates need an exact map")
    if levels_bound is None:
        levels_bound = config.zero_cert_levels
    if bound is None:
        bound = config.period_bound_exact
    recs = plateau_orbit_analysis(T, config.orbit_budget)
    if any(r is None for r in recs):
        raise BudgetExhausted("plateau orbit did not close up within the budget")
    for r in recs:
        if not is_power_of_two(r.period) or r.doubling_level > levels_bound:
            return None
    system = build_markov(T.pl, min(config.orbit_budget, config.markov_max_states))
    analysis = cycle_analysis(system)
    if not analysis.complete:
        return None   # a branching transition component refutes zero entropy
    if any(not is_power_of_two(p) for p in analysis.periods):
        return None
    found = frozenset(p for p in analysis.periods if p <= bound)
    return ZeroEntropyCertificate(tuple(recs), found, levels_bound, bound)


def verify_zero_certificate(T: StuntedSawtooth, cert: ZeroEntropyCertificate,
                            config: RunConfig = DEFAULT) -> bool:
    """Independently recompute the certificate's claims."""
    try:
        again = zero_entropy_certificate(T, cert.levels_bound, cert.bound, config)
    except BudgetExhausted:
        return False
    return again == cert


# ---------------------------------------------------------------------
# exact probe classification
# ---------------------------------------------------------------------


def classify_stunted(T: StuntedSawtooth, bound: int,
                     config: RunConfig = DEFAULT) -> ProbeResult:
    from .markov import MarkovBudgetError, build_markov, cycle_analysis
    recs = plateau_orbit_analysis(T, config.orbit_budget)
    if all(r is not None for r in recs):
        bad = [r for r in recs if not is_power_of_two(r.period)]
        if bad:
            # the plateau cycle itself is a non-power-of-two periodic orbit
            r = bad[0]
            y = T.plateau_values[r.plateau]
            for _ in range(r.preperiod):
                y = T(y)
            orbit = [y]
            for _ in range(r.period - 1):
                orbit.append(T(orbit[-1]))
            w = Witness("periodic-orbit", r.period, tuple(orbit))
            if verify_witness(T, w):
                return ProbeResult(POSITIVE, witness=w)
        try:
            system = build_markov(T.pl, min(config.orbit_budget,
                                            config.markov_max_states))
        except MarkovBudgetError:
            system = None
        if system is not None:
            analysis = cycle_analysis(system)
            if analysis.witness_orbit is not None:
                w = Witness("periodic-orbit", analysis.witness_period,
                            analysis.witness_orbit)
                if verify_witness(T, w):
                    return ProbeResult(POSITIVE, witness=w)
            if analysis.complete and all(is_power_of_two(p) for p in analysis.periods):
                if all(r.doubling_level <= config.zero_cert_levels for r in recs):
                    cert = ZeroEntropyCertificate(
                        tuple(recs),
                        frozenset(p for p in analysis.periods if p <= bound),
                        config.zero_cert_levels, bound)
                    return ProbeResult(ZERO, certificate=cert)

    w = positive_entropy_witness(T, bound, config)
    if w is not None:
        return ProbeResult(POSITIVE, witness=w)
    return ProbeResult(UNDECIDED, note="no certificate at budget")


# ---------------------------------------------------------------------
# quadratic probe classification (doubling tower)
# ---------------------------------------------------------------------


def _attractor_period(c: float, transient: int, window: int, tol: float):
    """Minimal period of the attracting cycle reached by the critical orbit."""
    x = 0.0
    for _ in range(transient):
        x = x * x + c
    tail = np.empty(window)
    for i in range(window):
        x = x * x + c
        tail[i] = x
    scale = max(1.0, float(np.max(np.abs(tail))))
    for p in range(1, window // 2):
        if abs(tail[-1] - tail[-1 - p]) < tol * scale:
            k = min(window - p, 256)
            if np.max(np.abs(tail[-k:] - tail[-k - p:-p])) < 10 * tol * scale:
                return p, float(tail[-1])
    return None, None


def _tower_descend(c: float, config: RunConfig):
    """Validated period-2 return-map tower for x^2 + c.

    Returns (widths, reason): widths[j] is the half-width a_j of the
    symmetric interval on which R_j = f^(2^j) acts (the iterates of an even
    map stay even, so the restrictive intervals are symmetric).  Each level
    needs an orientation-reversing repelling fixed point alpha of R_j with
    |R_j(0)| >= |alpha| and |R_j^2(0)| <= |alpha|; descent stops when no
    candidate passes.
    """
    beta = (1 + math.sqrt(1 - 4 * c)) / 2
    widths = [beta]
    for j in range(config.cascade_depth):
        n = 2 ** j
        a = widths[-1]

        def R(x, _n=n):
            if np.ndim(x):
                y = np.array(x, dtype=float)
                for _ in range(_n):
                    y = y * y + c
                return y
            y = x
            for _ in range(_n):
                y = y * y + c
            return y

        candidates = []
        for half in (np.linspace(-a, -a * 1e-9, 384), np.linspace(a * 1e-9, a, 384)):
            vals = R(half) - half
            sign = np.sign(vals)
            flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
            for idx in flips:
                lo, hi = half[idx], half[idx + 1]
                glo = vals[idx]
                for _ in range(200):
                    mid = (lo + hi) / 2
                    gm = R(mid) - mid
                    if gm * glo <= 0:
                        hi = mid
                    else:
                        lo, glo = mid, gm
                    if hi - lo < 1e-14 * max(1.0, a):
                        break
                cand = (lo + hi) / 2
                h = max(1e-9 * a, 1e-13)
                slope = (R(cand + h) - R(cand - h)) / (2 * h)
                if slope < -1 + 1e-9:
                    candidates.append(cand)
        candidates.sort(key=abs)
        alpha = None
        for cand in candidates:
            if abs(cand) < config.float_width_floor:
                continue
            v1 = R(0.0)
            if abs(v1) < abs(cand):
                continue
            v2 = R(v1)
            if abs(v2) > abs(cand):
                continue
            alpha = cand
            break
        if alpha is None:
            return widths, "no-alpha"
        widths.append(abs(alpha))
    return widths, "depth"


def _grid_period_scan(c: float, level: int, half_width: float, ps,
                      config: RunConfig) -> Optional[Witness]:
    """Vectorized search for a non-power-of-two period of R = f^(2^level)."""
    n = 2 ** level
    xs = np.linspace(-half_width, half_width, config.grid_cells)
    for p in ps:
        ys = xs.copy()
        for _ in range(p * n):
            ys = ys * ys + c
        g = ys - xs
        sign = np.sign(g)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        for idx in flips:
            lo, hi = xs[idx], xs[idx + 1]
            glo = g[idx]

            def gp(x):
                y = x
                for _ in range(p * n):
                    y = y * y + c
                return y - x

            for _ in range(200):
                mid = (lo + hi) / 2
                gm = gp(mid)
                if gm * glo <= 0:
                    hi = mid
                else:
                    lo, glo = mid, gm
                if hi - lo < 1e-14 * max(1.0, half_width):
                    break
            x0 = (lo + hi) / 2
            w = _float_orbit_witness(c, x0, p * n)
            if w is not None:
                return w
    return None


def _float_orbit_witness(c: float, x0: float, period_hint: int) -> Optional[Witness]:
    """Package a float periodic point as a witness if its minimal period is
    not a power of two (first-return with a relative tolerance)."""
    scale = max(1.0, abs(x0))
    tol = 1e-7 * scale
    y = x0
    minimal = None
    for k in range(1, period_hint + 1):
        y = y * y + c
        if abs(y - x0) < tol:
            minimal = k
            break
    if minimal is None or is_power_of_two(minimal):
        return None
    orbit = [x0]
    for _ in range(minimal - 1):
        orbit.append(orbit[-1] ** 2 + c)
    return Witness("periodic-orbit", minimal, tuple(orbit))


def classify_quadratic(c: float, bound: int, config: RunConfig = DEFAULT) -> ProbeResult:
    if not (-2.0 <= c <= 0.25):
        raise PreconditionError(f"c={c} outside [-2, 1/4]")
    p_att, pt = _attractor_period(c, 60_000, 4096, config.attracting_tol)
    if p_att is not None and not is_power_of_two(p_att):
        w = _float_orbit_witness(c, pt, p_att)
        if w is not None:
            return ProbeResult(POSITIVE, witness=w)
    widths, reason = _tower_descend(c, config)
    depth = len(widths) - 1
    if p_att is None and depth >= 6:
        # deep cascades converge slowly; retry the attractor with a long tail
        p_att, pt = _attractor_period(c, 600_000, 8192, config.attracting_tol)
        if p_att is not None and not is_power_of_two(p_att):
            w = _float_orbit_witness(c, pt, p_att)
            if w is not None:
                return ProbeResult(POSITIVE, witness=w)
    if p_att is not None and is_power_of_two(p_att):
        k = p_att.bit_length() - 1
        if depth >= k:
            mult = 1.0
            y = pt
            for _ in range(p_att):
                mult *= 2 * y
                y = y * y + c
            if abs(mult) < 1.0:
                cert = FloatZeroCertificate(k, p_att, pt, mult)
                return ProbeResult(ZERO, certificate=cert)
    # positive side: scan the deepest validated return map for short periods
    scan_levels = [depth, max(depth - 1, 0)]
    for lvl in dict.fromkeys(scan_levels):
        w = _grid_period_scan(c, lvl, widths[lvl], (3, 5, 6, 7, 9, 10, 11, 12), config)
        if w is not None:
            return ProbeResult(POSITIVE, witness=w)
    return ProbeResult(UNDECIDED,
                       note=f"tower depth {depth} ({reason}), attractor {p_att}")


def float_positive_witness(m, bound: int, config: RunConfig = DEFAULT) -> Optional[Witness]:
    """Positive-entropy witness for float maps."""
    if isinstance(m, Quadratic):
        r = classify_quadratic(m.c, bound, config)
        return r.witness if r.kind == POSITIVE else None
    for p in range(3, min(bound, 16) + 1):
        if is_power_of_two(p):
            continue
        orbits = periodic_points(m, p, config)
        if orbits:
            return Witness("periodic-orbit", p, orbits[0].points)
    return None


def _critical_attractors(m, transient: int, window: int, tol: float):
    """Minimal attracting-cycle period reached by each critical orbit, or None."""
    from .maps import turning_points_of
    out = []
    for c in turning_points_of(m):
        x = m(c)
        for _ in range(transient):
            x = m(x)
        tail = np.empty(window)
        for i in range(window):
            x = m(x)
            tail[i] = x
        scale = max(1.0, float(np.max(np.abs(tail))))
        found = None
        for p in range(1, window // 2):
            if abs(tail[-1] - tail[-1 - p]) < tol * scale:
                k = min(window - p, 128)
                if np.max(np.abs(tail[-k:] - tail[-k - p:-p])) < 10 * tol * scale:
                    found = (p, float(tail[-1]))
                    break
        if found is None:
            return None
        out.append(found)
    return out


def classify_float_generic(m, bound: int, config: RunConfig = DEFAULT) -> ProbeResult:
    """Attractor-based classification for float multimodal maps.

    Positive when a non-power-of-two orbit is found; zero when every critical
    orbit settles on an attracting cycle of power-of-two period.  Unlike the
    quadratic route there is no return-map tower to validate the doubling
    combinatorics, so this is the weaker certificate of the two.
    """
    w = float_positive_witness(m, bound, config)
    if w is not None:
        return ProbeResult(POSITIVE, witness=w)
    att = _critical_attractors(m, 40_000, 2048, config.attracting_tol)
    if att is not None:
        bad = [p for p, _ in att if not is_power_of_two(p)]
        if bad:
            return ProbeResult(UNDECIDED,
                               note=f"attracting period {bad[0]} but no verified orbit")
        p_max, pt = max(att)
        h = 1e-6 * max(1.0, abs(pt))
        y = pt
        mult = 1.0
        for _ in range(p_max):
            mult *= (m(y + h) - m(y - h)) / (2 * h)
            y = m(y)
        if abs(mult) < 1.0:
            cert = FloatZeroCertificate(p_max.bit_length() - 1, p_max, pt, mult)
            return ProbeResult(ZERO, certificate=cert)
    return ProbeResult(UNDECIDED, note="no attractor within budget")


# ---------------------------------------------------------------------
# parameter paths and bisection
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class ParameterPath:
    kind: str
    t_lo: object
    t_hi: object
    base: Optional[SawtoothBase] = None
    xi0: Optional[tuple] = None
    direction: Optional[tuple] = None
    stages: Optional[tuple] = None
    stage_index: int = -1

    def __post_init__(self):
        if not self.t_lo < self.t_hi:
            raise PreconditionError("need t_lo < t_hi")
        if self.kind == "stunted":
            if any(d < 0 for d in self.direction):
                raise PreconditionError("stunted path directions must be >= 0")
        elif self.kind not in ("quadratic", "type_b"):
            raise PreconditionError(f"unknown path kind {self.kind!r}")

    @property
    def exact(self) -> bool:
        return self.kind == "stunted"

    def map_at(self, t):
        if self.kind == "stunted":
            xi = tuple(x + t * d for x, d in zip(self.xi0, self.direction))
            return build_stunted(self.base, xi)
        if self.kind == "quadratic":
            return Quadratic(float(t))
        stages = list(self.stages)
        ell, _ = stages[self.stage_index]
        stages[self.stage_index] = (ell, float(t))
        return build_type_b(stages)


def stunted_path(base: SawtoothBase, xi0, direction, t_lo, t_hi) -> ParameterPath:
    return ParameterPath("stunted", rat(t_lo), rat(t_hi), base=base,
                         xi0=tuple(rat(x) for x in xi0),
                         direction=tuple(rat(d) for d in direction))


def quadratic_path(c_lo: float, c_hi: float) -> ParameterPath:
    return ParameterPath("quadratic", float(c_lo), float(c_hi))


def type_b_path(stages, stage_index: int, a_lo: float, a_hi: float) -> ParameterPath:
    return ParameterPath("type_b", float(a_lo), float(a_hi),
                         stages=tuple(stages), stage_index=stage_index)


def classify_probe(path: ParameterPath, t, bound: int,
                   config: RunConfig = DEFAULT) -> ProbeResult:
    if path.kind == "stunted":
        return classify_stunted(path.map_at(t), bound, config)
    if path.kind == "quadratic":
        return classify_quadratic(float(t), bound, config)
    try:
        m = path.map_at(t)
    except ValueError:
        return ProbeResult(UNDECIDED, note="parameter leaves the family")
    return classify_float_generic(m, bound, config)


@dataclass(frozen=True)
class BoundaryResult:
    t_star: object
    bracket: tuple                  # (t at zero side, t at positive side)
    zero_side: tuple                # (t, ZeroEntropyCertificate-like)
    positive_side: tuple            # (t, Witness)
    gap: object
    probes: int
    undecided: int
    orientation: str                # entropy increasing | decreasing in t

    def as_dict(self):
        t0, cert = self.zero_side
        t1, wit = self.positive_side
        return {"t_star": str(self.t_star),
                "t_star_bracket": [str(self.bracket[0]), str(self.bracket[1])],
                "gap": str(self.gap),
                "below": {"parameter": str(t0), "certificate": cert.as_dict()},
                "above": {"parameter": str(t1), "witness": wit.as_dict()},
                "probes": self.probes, "undecided_count": self.undecided,
                "orientation": self.orientation}


def locate_boundary(path: ParameterPath, bound: Optional[int] = None,
                    resolution=None, config: RunConfig = DEFAULT,
                    max_probes: int = 400) -> BoundaryResult:
    """Bisect the path between a zero-certified and a positively-witnessed
    parameter until the certified bracket is narrower than the resolution.

    Probes that certify neither way are counted and the bracket is refined
    around them at quarter points; if every refinement probe is undecided the
    search stops with the budget error.
    """
    if bound is None:
        bound = config.period_bound_exact if path.exact else config.period_bound_float
    if resolution is None:
        resolution = config.resolution_exact if path.exact else config.resolution_float
    cache = {}

    def probe(t):
        if t not in cache:
            cache[t] = classify_probe(path, t, bound, config)
        return cache[t]

    probes = [0]
    undecided = [0]

    def classified(t):
        probes[0] += 1
        return probe(t)

    r_lo = classified(path.t_lo)
    r_hi = classified(path.t_hi)
    kinds = {r_lo.kind, r_hi.kind}
    if kinds != {ZERO, POSITIVE}:
        raise PreconditionError(
            f"path endpoints must certify differently, got {r_lo.kind}/{r_hi.kind}")
    if r_lo.kind == ZERO:
        t_zero, t_pos = path.t_lo, path.t_hi
        orientation = "increasing"
    else:
        t_zero, t_pos = path.t_hi, path.t_lo
        orientation = "decreasing"

    def width():
        return abs(t_pos - t_zero)

    while width() > resolution and probes[0] < max_probes:
        mid = (t_zero + t_pos) / 2
        r = classified(mid)
        if r.kind == ZERO:
            t_zero = mid
        elif r.kind == POSITIVE:
            t_pos = mid
        else:
            undecided[0] += 1
            qz = (t_zero + mid) / 2
            qp = (t_pos + mid) / 2
            moved = False
            for t in (qz, qp):
                rr = classified(t)
                if rr.kind == ZERO:
                    t_zero = t
                    moved = True
                elif rr.kind == POSITIVE:
                    t_pos = t
                    moved = True
                else:
                    undecided[0] += 1
            if not moved:
                raise BudgetExhausted(
                    f"undecided probes block refinement below width {width()}")
    if width() > resolution:
        raise BudgetExhausted(f"probe budget exhausted at width {width()}")
    t_star = (t_zero + t_pos) / 2
    return BoundaryResult(t_star, (t_zero, t_pos),
                          (t_zero, probe(t_zero).certificate),
                          (t_pos, probe(t_pos).witness),
                          width(), probes[0], undecided[0], orientation)


# ---------------------------------------------------------------------
# two-sided approximants
# ---------------------------------------------------------------------


def approximants(T_gamma: StuntedSawtooth, radius, direction=None,
                 bound: Optional[int] = None, config: RunConfig = DEFAULT):
    """Two stunted maps within sup-distance radius of T_gamma and with its
    shape: one with a positive-entropy witness, one zero-certified.

    The perturbation moves along a coordinatewise-nonnegative direction
    (default all-ones), which changes the map by at most the step size in
    sup-norm; shapes are re-checked exactly.
    """
    radius = rat(radius)
    if radius <= 0:
        raise PreconditionError("radius must be positive")
    if bound is None:
        bound = config.period_bound_exact
    m = T_gamma.m
    if direction is None:
        direction = (Fraction(1),) * m
    direction = tuple(rat(d) for d in direction)
    if any(d < 0 for d in direction) or all(d == 0 for d in direction):
        raise PreconditionError("direction must be nonnegative and nonzero")
    scale = max(direction)
    direction = tuple(d / scale for d in direction)
    tau = shape(T_gamma)
    e = T_gamma.base.e
    tried = []
    for r in (radius, radius / 2, radius / 4):
        try:
            plus = T_gamma.shifted(tuple(r * d for d in direction))
            minus = T_gamma.shifted(tuple(-r * d for d in direction))
        except ValueError:
            tried.append((r, "inadmissible"))
            continue
        if any(abs(x) > e for x in plus.xi) or any(abs(x) > e for x in minus.xi):
            tried.append((r, "outside parameter cube"))
            continue
        if shape(plus) != tau or shape(minus) != tau:
            tried.append((r, "shape broke"))
            continue
        w = positive_entropy_witness(plus, bound, config)
        if w is None:
            tried.append((r, "no positive witness"))
            continue
        try:
            cert = zero_entropy_certificate(minus, config.zero_cert_levels, bound, config)
        except BudgetExhausted:
            cert = None
        if cert is None:
            tried.append((r, "no zero certificate"))
            continue
        return plus, minus, w, cert, r
    raise PreconditionError(
        f"could not certify both sides within radius {radius}; attempts: {tried}")
