"""Finite-scale dimension estimators.

The upper/lower estimates realize the entropy-rate characterizations at
finite scale: exponents ``u_n = log2(cumulative_n)/n`` are maximized
(resp. minimized) over a tail window.  Per-block exponents
``e_n = log2(max(block_n, 1))/n`` are reported as diagnostics; lower
estimates never consult block counts, whose liminf form fails in general.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import RangeError
from .sets import (DEFAULT_BUDGET, CountProfile, DimensionEstimate,
                   IntegerSet)

DEFAULT_WINDOW = 8

#: Per-doubling growth factor separating divergent from convergent
#: truncated zeta sums.  2^0.05 classifies growth exponents above 0.05.
DEFAULT_DIVERGENCE_FACTOR = 2 ** 0.05


def _exponents(profile: CountProfile) -> Tuple[list, list]:
    per_scale = []
    cumulative = []
    for n in range(1, profile.n_max + 1):
        per_scale.append((n, math.log2(max(profile.blocks[n], 1)) / n))
        cumulative.append((n, math.log2(max(profile.cumulative[n], 1)) / n))
    return per_scale, cumulative


def _estimate(profile: CountProfile, window: int, method: str) -> DimensionEstimate:
    if window < 1:
        raise RangeError("window must be >= 1")
    if profile.n_max < window:
        raise RangeError(
            f"profile n_max={profile.n_max} shorter than window={window}")
    per_scale, cumulative = _exponents(profile)
    if profile.is_empty():
        return DimensionEstimate(
            upper=0.0, lower=0.0,
            per_scale_exponents=tuple(per_scale),
            cumulative_exponents=tuple(cumulative),
            window=(profile.n_max - window + 1, profile.n_max),
            method=method, slope=0.0, empty=True)
    lo = profile.n_max - window + 1
    tail = [u for n, u in cumulative if n >= lo]
    # diagnostic growth slope, fit over the same tail window: restricting
    # to the window discards the small-scale constant-factor transient
    ns = np.array([n for n, _ in cumulative if n >= lo], dtype=float)
    logs = np.array([math.log2(max(profile.cumulative[int(n)], 1)) for n in ns])
    slope = float(np.polyfit(ns, logs, 1)[0]) if len(ns) >= 2 else float("nan")
    return DimensionEstimate(
        upper=max(tail), lower=min(tail),
        per_scale_exponents=tuple(per_scale),
        cumulative_exponents=tuple(cumulative),
        window=(lo, profile.n_max),
        method=method, slope=slope)


def upper_dim_estimate(profile: CountProfile,
                       window: int = DEFAULT_WINDOW) -> DimensionEstimate:
    """Tail-window maximum of the cumulative entropy-rate exponents."""
    return _estimate(profile, window, method="upper/tail-max")


def lower_dim_estimate(profile: CountProfile,
                       window: int = DEFAULT_WINDOW) -> DimensionEstimate:
    """Tail-window minimum of the cumulative entropy-rate exponents."""
    return _estimate(profile, window, method="lower/tail-min")


@dataclass(frozen=True)
class AbscissaResult:
    """Outcome of the heuristic convergence-abscissa probe."""

    estimate: Optional[float]
    status: str  # bracketed | converged-everywhere | divergent-everywhere | indeterminate
    classifications: tuple  # (s, "divergent"/"convergent") per grid point
    heuristic: bool = True

    @property
    def value(self) -> float:
        if self.estimate is None:
            raise RangeError(f"probe was {self.status}; no estimate available")
        return self.estimate


def abscissa_probe(A: IntegerSet, s_grid: Sequence[float],
                   N_schedule: Sequence[int],
                   divergence_factor: float = DEFAULT_DIVERGENCE_FACTOR,
                   budget: int = DEFAULT_BUDGET) -> AbscissaResult:
    """Classify each s by growth of truncated zeta sums over the schedule
    and return the midpoint of the divergent/convergent boundary.

    A grid point is divergent when the geometric-mean growth of its
    partial sums over the trailing half of the schedule exceeds
    ``divergence_factor`` per doubling of the cutoff.
    """
    s_grid = sorted(s_grid)
    N_schedule = sorted(N_schedule)
    if not s_grid or not N_schedule:
        raise RangeError("grids must be nonempty")

    # one enumeration, reused for every s
    elems: List[int] = []
    for n in A.elements(bound=N_schedule[-1], budget=budget):
        elems.append(n)
    arr = np.array(elems, dtype=np.float64)
    cut = np.searchsorted(arr, np.array(N_schedule, dtype=np.float64), side="right")

    statuses = []
    for s in s_grid:
        if arr.size == 0:
            statuses.append((s, "convergent"))
            continue
        powers = np.float_power(arr, -s)
        csum = np.cumsum(powers)
        partials = [float(csum[c - 1]) if c > 0 else 0.0 for c in cut]
        factors = []
        for i in range(1, len(partials)):
            if partials[i - 1] <= 0 or N_schedule[i - 1] < 1:
                continue
            doublings = math.log2(N_schedule[i] / N_schedule[i - 1])
            if doublings <= 0:
                continue
            factors.append((partials[i] / partials[i - 1]) ** (1.0 / doublings))
        if not factors:
            statuses.append((s, "convergent"))
            continue
        tail = factors[len(factors) // 2:]
        gmean = math.exp(sum(math.log(f) for f in tail) / len(tail))
        statuses.append((s, "divergent" if gmean >= divergence_factor
                         else "convergent"))

    labels = [lab for _, lab in statuses]
    if all(lab == "convergent" for lab in labels):
        return AbscissaResult(s_grid[0], "converged-everywhere", tuple(statuses))
    if all(lab == "divergent" for lab in labels):
        return AbscissaResult(s_grid[-1], "divergent-everywhere", tuple(statuses))
    # require a clean divergent-prefix / convergent-suffix split
    first_conv = labels.index("convergent")
    if any(lab == "divergent" for lab in labels[first_conv:]):
        return AbscissaResult(None, "indeterminate", tuple(statuses))
    mid = 0.5 * (s_grid[first_conv - 1] + s_grid[first_conv])
    return AbscissaResult(mid, "bracketed", tuple(statuses))
