"""Command-line surface.

One subcommand per operation family; descriptors are JSON files (or ``-``
for stdin), rationals travel as ``p/q`` strings, and JSON output has sorted
keys so equal configurations give byte-identical reports.

Exit codes: 0 success, 2 input error, 3 precondition error, 4 budget
exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import boundary as bd
from . import entropy as en
from . import periods as pd
from . import renorm as rn
from . import symbolic as sy
from .config import DEFAULT, RunConfig, thread_cap
from .errors import (BudgetExhausted, DescriptorError, DomainEscapeError,
                     PreconditionError)
from .maps import build_base, is_exact, parse_map, rat, serialize_map, turning_points_of


def _read_descriptor(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise DescriptorError(f"cannot read descriptor: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"descriptor is not valid JSON: line {exc.lineno}, "
                              f"column {exc.colno}: {exc.msg}") from exc


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _emit_csv(rows, header) -> None:
    w = csv.writer(sys.stdout)
    w.writerow(header)
    w.writerows(rows)


def _config_from(args) -> RunConfig:
    kw = {}
    if args.precision is not None:
        kw["precision"] = args.precision
    if args.n_max is not None:
        kw["n_max"] = args.n_max
    if args.depth is not None:
        kw["depth"] = args.depth
    if args.budget is not None:
        kw["piece_budget"] = args.budget
        kw["orbit_budget"] = args.budget
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.format is not None:
        kw["output_format"] = args.format
    return DEFAULT.with_(**kw) if kw else DEFAULT


def _path_from(desc: dict) -> bd.ParameterPath:
    if "family" not in desc:
        raise DescriptorError("path descriptor needs a 'family' field")
    fam = desc["family"]
    try:
        if fam == "stunted":
            base = build_base(int(desc["m"]), int(desc.get("epsilon", 1)))
            xi0 = [rat(v) for v in desc["xi0"]]
            direction = [rat(v) for v in desc.get("direction", ["1"] * base.m)]
            return bd.stunted_path(base, xi0, direction, rat(desc["t_lo"]), rat(desc["t_hi"]))
        if fam == "quadratic":
            return bd.quadratic_path(float(desc["t_lo"]), float(desc["t_hi"]))
        if fam == "type_b":
            stages = [(int(e), float(a)) for e, a in desc["stages"]]
            return bd.type_b_path(stages, int(desc.get("stage_index", len(stages) - 1)),
                                  float(desc["t_lo"]), float(desc["t_hi"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DescriptorError(f"bad {fam!r} path descriptor: {exc}") from exc
    raise DescriptorError(f"unknown family {fam!r}")


# -- subcommands -------------------------------------------------------


def cmd_entropy(args) -> None:
    cfg = _config_from(args)
    m = parse_map(_read_descriptor(args.descriptor))
    if cfg.output_format == "csv":
        counts, _ = en.lap_series(m, args.n_max or cfg.n_max, cfg)
        _emit_csv(list(enumerate(counts, start=1)), ["n", "laps"])
        return
    lap = en.entropy_lap(m, args.n_max or cfg.n_max, cfg)
    out = {"lap": lap.as_dict(), "markov": None}
    if is_exact(m):
        try:
            out["markov"] = en.entropy_markov(m, cfg).as_dict()
        except BudgetExhausted as exc:
            out["markov"] = {"error": str(exc)}
    _emit_json(out)


def cmd_periods(args) -> None:
    cfg = _config_from(args)
    m = parse_map(_read_descriptor(args.descriptor))
    bound = args.bound or (cfg.period_bound_exact if is_exact(m)
                           else cfg.period_bound_float)
    ps = pd.period_set(m, bound, cfg)
    if cfg.output_format == "csv":
        rows = []
        for p in sorted(ps.periods):
            for oi, orb in enumerate(pd.periodic_points(m, p, cfg)):
                for pi, x in enumerate(orb.points):
                    rows.append([p, oi, pi, str(x), orb.stability])
        _emit_csv(rows, ["period", "orbit", "index", "point", "stability"])
        return
    verdict, witness = pd.is_power_of_two_spectrum(ps)
    out = ps.as_dict()
    out["spectrum"] = verdict
    if witness is not None:
        out["spectrum_witness"] = witness
    _emit_json(out)


def cmd_kneading(args) -> None:
    cfg = _config_from(args)
    m = parse_map(_read_descriptor(args.descriptor))
    nu = sy.kneading(m, args.depth or cfg.depth)
    _emit_json({"depth": nu.depth, "nu": nu.as_strings()})


def cmd_shape(args) -> None:
    m = parse_map(_read_descriptor(args.descriptor))
    tau = sy.shape(m)
    _emit_json({"pairs": [list(p) for p in tau.pairs], "value_count": tau.value_count})


def cmd_psi(args) -> None:
    cfg = _config_from(args)
    m = parse_map(_read_descriptor(args.descriptor))
    mturn = len(turning_points_of(m))
    base = build_base(mturn, 1)
    res = sy.psi(m, base, args.depth or cfg.depth)
    _emit_json({"m": mturn,
                "s": [str(s) for s in res.s],
                "widths": [str(w) for w in res.widths],
                "stunted": serialize_map(res.stunted)})


def cmd_renorm(args) -> None:
    cfg = _config_from(args)
    m = parse_map(_read_descriptor(args.descriptor))
    if args.cascade:
        trace = rn.cascade_trace(m, args.cascade, cfg)
        _emit_json({"depth": trace.depth, "reason": trace.reason,
                    "levels": [{"interval": [str(l.original.lo), str(l.original.hi)],
                                "relative_period": l.relative_period}
                               for l in trace.levels]})
        return
    ri = rn.find_restrictive(m, args.period, cfg)
    if ri is None:
        _emit_json({"restrictive": None, "period": args.period})
        return
    _emit_json({"restrictive": {"lo": str(ri.interval.lo), "hi": str(ri.interval.hi),
                                "turning_hits": list(ri.turning_hits)},
                "period": ri.period})


def cmd_feigenbaum(args) -> None:
    cfg = _config_from(args)
    fam = rn.QuadraticFamily()
    est = rn.feigenbaum_delta(fam, args.k_max, tol=min(cfg.precision, 1e-13))
    if cfg.output_format == "csv":
        rows = []
        for k, c in enumerate(est.params):
            d = est.deltas[k - 2] if 2 <= k < 2 + len(est.deltas) else ""
            rows.append([k, repr(c), d])
        _emit_csv(rows, ["k", "c_k", "delta_k"])
        return
    _emit_json({"params": [repr(c) for c in est.params],
                "deltas": list(est.deltas),
                "value": est.value,
                "precision_flag": est.precision_flag})


def cmd_boundary(args) -> None:
    cfg = _config_from(args)
    path = _path_from(_read_descriptor(args.descriptor))
    resolution = None
    if args.resolution is not None:
        resolution = (Fraction(args.resolution) if path.exact
                      else float(Fraction(args.resolution)))
    res = bd.locate_boundary(path, bound=args.bound, resolution=resolution, config=cfg)
    report = res.as_dict()
    if path.kind == "quadratic":
        # diagnostic only: the doubling-ratio extrapolation of the
        # accumulation point, for cross-validation against the bracket
        est = rn.feigenbaum_delta(rn.QuadraticFamily(), 8)
        cs = est.params
        report["superstable_extrapolation"] = cs[-1] + (cs[-1] - cs[-2]) / (est.value - 1)
    _emit_json(report)


def cmd_sweep(args) -> None:
    cfg = _config_from(args)
    desc = _read_descriptor(args.descriptor)
    path = _path_from(desc)
    n = args.grid
    if n < 2:
        raise PreconditionError("grid size must be >= 2")
    if path.exact:
        ts = [path.t_lo + (path.t_hi - path.t_lo) * Fraction(k, n - 1) for k in range(n)]
    else:
        ts = [path.t_lo + (path.t_hi - path.t_lo) * k / (n - 1) for k in range(n)]

    def row(t):
        try:
            m = path.map_at(t)
        except (ValueError, DescriptorError) as exc:
            return [str(t), "", "", f"error: {exc}"]
        samples = _orbit_samples(m, cfg)
        h = ""
        if is_exact(m):
            try:
                h = en.entropy_markov(m, cfg).value
            except BudgetExhausted:
                h = ""
        elif args.with_entropy:
            try:
                h = en.entropy_lap(m, cfg.n_max, cfg).value
            except BudgetExhausted:
                h = ""
        return [str(t), h, _attracting_summary(m, cfg), ";".join(samples)]

    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        rows = list(pool.map(row, ts))
    _emit_csv(rows, ["t", "entropy", "attracting_period", "orbit_samples"])


def _orbit_samples(m, cfg, count: int = 16):
    dom = m.domain if not isinstance(m, tuple) else None
    x = (dom.lo + dom.hi) / 2 if not turning_points_of(m) else turning_points_of(m)[0]
    try:
        for _ in range(512):
            x = m(x)
        out = []
        for _ in range(count):
            x = m(x)
            out.append(str(x) if is_exact(m) else repr(float(x)))
        return out
    except DomainEscapeError:
        return []


def _attracting_summary(m, cfg) -> str:
    if is_exact(m):
        recs = bd.plateau_orbit_analysis(m, cfg.orbit_budget) if hasattr(m, "plateau_values") else []
        periods = sorted({r.period for r in recs if r is not None})
        return "/".join(str(p) for p in periods)
    if hasattr(m, "c"):
        p, _ = bd._attractor_period(m.c, 20_000, 2048, cfg.attracting_tol)
        return "" if p is None else str(p)
    return ""


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chaos-edge",
                                 description="One-dimensional dynamics at the boundary of chaos")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, descriptor=True):
        if descriptor:
            p.add_argument("descriptor", help="JSON descriptor file, or - for stdin")
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--bound", type=int, default=None)
        p.add_argument("--n-max", dest="n_max", type=int, default=None)
        p.add_argument("--precision", type=float, default=None)
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)

    common(sub.add_parser("entropy", help="lap and Markov entropy of a map"))
    common(sub.add_parser("periods", help="period set of a map"))
    common(sub.add_parser("kneading", help="kneading invariant of a map"))
    common(sub.add_parser("shape", help="shape (order pattern of critical values)"))
    common(sub.add_parser("psi", help="project a map onto the stunted family"))
    p = sub.add_parser("renorm", help="restrictive intervals and cascades")
    common(p)
    p.add_argument("--period", type=int, default=2)
    p.add_argument("--cascade", type=int, default=0,
                   help="trace a doubling cascade to this depth instead")
    p = sub.add_parser("feigenbaum", help="superstable parameters and doubling ratio")
    common(p, descriptor=False)
    p.add_argument("--k-max", dest="k_max", type=int, default=10)
    p = sub.add_parser("boundary", help="two-sided boundary certificates on a path")
    common(p)
    p.add_argument("--resolution", type=str, default=None,
                   help="bracket width target, e.g. 1/1073741824 or 1e-6")
    p = sub.add_parser("sweep", help="per-parameter summaries over a grid")
    common(p)
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--with-entropy", action="store_true",
                   help="include the lap estimate for float families (slow)")
    return ap


COMMANDS = {
    "entropy": cmd_entropy,
    "periods": cmd_periods,
    "kneading": cmd_kneading,
    "shape": cmd_shape,
    "psi": cmd_psi,
    "renorm": cmd_renorm,
    "feigenbaum": cmd_feigenbaum,
    "boundary": cmd_boundary,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except DescriptorError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (PreconditionError, DomainEscapeError) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return 3
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
