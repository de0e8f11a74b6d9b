"""Run configuration shared by the library and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction


@dataclass(frozen=True)
class RunConfig:
    """Budgets, tolerances and output options.

    All budgets are positive.  ``precision`` governs float root-finding,
    ``depth`` is the default symbol depth for itineraries and kneading data,
    and the two ``period_bound_*`` values are the default periodic-orbit
    search ceilings for exact (rational) and floating-point maps.
    """

    precision: float = 1e-12
    depth: int = 64
    period_bound_exact: int = 64
    period_bound_float: int = 32
    n_max: int = 14                    # lap-growth estimator horizon
    lap_cap: int = 10**9               # reported counts above this saturate
    piece_budget: int = 400_000        # total monotone/constant pieces per scan
    orbit_budget: int = 20_000         # exact orbit steps before giving up
    cascade_depth: int = 16            # renormalization levels to attempt
    witness_cascade_depth: int = 14    # levels for positive-entropy search
    power_iter_tol: float = 1e-10
    power_iter_max: int = 100_000
    markov_max_states: int = 20_000
    zero_cert_levels: int = 24         # largest k admitted in 2^k plateau periods
    resolution_exact: Fraction = Fraction(1, 2**40)
    resolution_float: float = 1e-9
    float_width_floor: float = 1e-9    # restrictive intervals thinner than this are noise
    renorm_degenerate_width: float = 1e-12
    attracting_tol: float = 1e-8
    grid_cells: int = 4096             # float periodic-point grid (2**12)
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        for name in ("depth", "period_bound_exact", "period_bound_float", "n_max",
                     "lap_cap", "piece_budget", "orbit_budget", "cascade_depth",
                     "power_iter_max", "markov_max_states", "zero_cert_levels",
                     "grid_cells"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)


DEFAULT = RunConfig()


def thread_cap() -> int:
    """Parallelism cap for sweeps, from CHAOS_EDGE_THREADS (default: cpu count, max 8)."""
    raw = os.environ.get("CHAOS_EDGE_THREADS")
    if raw:
        try:
            n = int(raw)
            if n >= 1:
                return n
        except ValueError:
            pass
    return min(os.cpu_count() or 1, 8)
