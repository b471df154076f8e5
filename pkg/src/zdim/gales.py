"""Betting-function (gale) machinery: validation, the explicit supergale
construction from per-bit-length counts, success testing, and the
Kraft-type cardinality bound.

Tables are stored in the log2 domain, one array per string length; the
entry for a string w of length j sits at index int(w, 2), so the standard
representation of n lives at index n of level ``n.bit_length()``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import ConstructionError, DepthError, RangeError
from .estimators import DEFAULT_WINDOW, upper_dim_estimate
from .sets import DEFAULT_BUDGET, IntegerSet, block_profile

#: slack for >= comparisons on log2 values, absorbing float rounding
LOG2_GUARD = 1e-12


@dataclass(frozen=True)
class Gale:
    """An s-parameterized betting function on binary strings to finite depth.

    ``levels[j]`` holds log2 d(w) for all 2^j strings w of length j;
    value 0 is stored as -inf.
    """

    s: float
    depth: int
    levels: tuple  # tuple of np.ndarray, levels[j].shape == (2**j,)

    def log2_value(self, w: str) -> float:
        if w and set(w) - {"0", "1"}:
            raise RangeError(f"not a binary string: {w!r}")
        j = len(w)
        if j > self.depth:
            raise DepthError(f"string length {j} exceeds depth {self.depth}")
        idx = int(w, 2) if w else 0
        return float(self.levels[j][idx])

    def value(self, w: str) -> float:
        lv = self.log2_value(w)
        return 0.0 if lv == -math.inf else 2.0 ** lv


def constant_gale(value: float, s: float, depth: int) -> Gale:
    if value < 0:
        raise RangeError("gale values are nonnegative")
    lv = math.log2(value) if value > 0 else -math.inf
    levels = tuple(np.full(2 ** j, lv) for j in range(depth + 1))
    return Gale(s=s, depth=depth, levels=levels)


def gale_deficiency(g: Gale, mode: str = "gale",
                    max_level: Optional[int] = None) -> float:
    """Largest violation of the betting identity over internal nodes.

    gale mode:      max |d(w) - 2^-s (d(w0) + d(w1))|
    supergale mode: max(0, max 2^-s (d(w0) + d(w1)) - d(w))
    """
    if mode not in ("gale", "supergale"):
        raise RangeError(f"unknown mode {mode!r}")
    if g.depth < 1:
        raise RangeError("deficiency needs depth >= 1")
    top = g.depth if max_level is None else min(max_level, g.depth)
    worst = 0.0
    factor = 2.0 ** (-g.s)
    for j in range(top):
        parents = np.exp2(g.levels[j])
        children = np.exp2(g.levels[j + 1])
        combined = factor * (children[0::2] + children[1::2])
        if mode == "gale":
            worst = max(worst, float(np.max(np.abs(parents - combined))))
        else:
            worst = max(worst, float(np.max(combined - parents)), 0.0)
    return worst


def level_martingale(members: List[int], k: int, depth: int) -> List[np.ndarray]:
    """The single-level martingale concentrated on the length-k strings of
    ``members``: value 2^k/|members| there, averaged upward to the root and
    held constant below level k.  Returns value-domain arrays per level."""
    if not members:
        return [np.zeros(2 ** j) for j in range(depth + 1)]
    base = np.zeros(2 ** k)
    weight = (2.0 ** k) / len(members)
    for n in members:
        if n.bit_length() != k:
            raise RangeError(f"{n} does not have bit length {k}")
        base[n] = weight
    levels: List[np.ndarray] = [None] * (depth + 1)
    levels[k] = base
    for j in range(k - 1, -1, -1):
        levels[j] = 0.5 * (levels[j + 1][0::2] + levels[j + 1][1::2])
    for j in range(k + 1, depth + 1):
        levels[j] = np.repeat(levels[j - 1], 2)
    return levels


def _c1_constant(eps: float) -> float:
    """max over positive integers n of n^2 / 2^(eps n)."""
    n_star = max(1, int(round(2.0 / (eps * math.log(2.0)))))
    best = 0.0
    for n in range(max(1, n_star - 3), n_star + 4):
        best = max(best, n * n / 2.0 ** (eps * n))
    return best


def build_supergale(A: IntegerSet, s: float, depth: int,
                    window: int = DEFAULT_WINDOW,
                    budget: int = DEFAULT_BUDGET) -> Gale:
    """Combine per-bit-length martingales into an exact s-gale that
    reaches value >= 1 on every element of A up to the depth.

    Each nonempty length k contributes k^-2 times the level martingale;
    the combined table is scaled by C0 C1 2^((s-1)|w|) with the constants
    computed from the tabulated counts.  Requires s to exceed the
    finite-scale upper dimension estimate of A.
    """
    if depth < 1:
        raise RangeError("depth must be >= 1")
    profile = block_profile(A, "binary-length", depth, budget=budget)
    est = upper_dim_estimate(profile, window=min(window, depth))
    if s <= est.upper:
        raise ConstructionError(
            f"need s > estimated dimension {est.upper:.4f}, got s={s}")
    eps = 0.5 * (s - est.upper)

    counts = profile.blocks
    # n0: least level beyond which counts stay below 2^((s-eps)k)
    n0 = 0
    for k in range(1, depth + 1):
        if counts[k] >= 2.0 ** ((s - eps) * k):
            n0 = k
    c0 = 1.0
    for k in range(1, n0 + 1):
        c0 = max(c0, counts[k] / 2.0 ** ((s - eps) * k))
    c1 = _c1_constant(eps)

    acc = [np.zeros(2 ** j) for j in range(depth + 1)]
    members_by_len: List[List[int]] = [[] for _ in range(depth + 1)]
    for n in A.elements(bound=2 ** depth - 1, budget=budget):
        members_by_len[n.bit_length()].append(n)
    for k in range(1, depth + 1):
        if not members_by_len[k]:
            continue  # empty levels contribute nothing
        lv = level_martingale(members_by_len[k], k, depth)
        w = 1.0 / (k * k)
        for j in range(depth + 1):
            acc[j] += w * lv[j]

    log_c = math.log2(c0) + math.log2(c1)
    levels = []
    with np.errstate(divide="ignore"):
        for j in range(depth + 1):
            levels.append(log_c + (s - 1.0) * j + np.log2(acc[j]))
    return Gale(s=s, depth=depth, levels=tuple(levels))


def succeeds(g: Gale, n: int) -> bool:
    """True iff the betting function reaches 1 on n's standard binary
    representation."""
    if n < 1:
        raise RangeError("n must be a positive integer")
    length = n.bit_length()
    if length > g.depth:
        raise DepthError(f"bit length {length} exceeds depth {g.depth}")
    return float(g.levels[length][n]) >= -LOG2_GUARD


def kraft_check(g: Gale, k: int) -> Tuple[int, float, bool]:
    """Exhaustive count of length-k strings with value >= 1, against the
    bound 2^(s k) d(lambda).  Returns (count, bound, ok)."""
    if k > g.depth:
        raise DepthError(f"k={k} exceeds depth {g.depth}")
    count = int(np.count_nonzero(g.levels[k] >= -LOG2_GUARD))
    log_lambda = float(g.levels[0][0])
    bound = math.inf if log_lambda == math.inf else 2.0 ** (g.s * k + log_lambda)
    ok = count <= bound * (1.0 + 1e-12)
    return count, bound, ok


def dump_csv(g: Gale, fh, max_level: int) -> None:
    """Diagnostic export: ``w,log2_value`` for all strings up to a level."""
    import csv
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["w", "log2_value"])
    for j in range(min(max_level, g.depth) + 1):
        for idx in range(2 ** j):
            label = format(idx, f"0{j}b") if j else ""
            w.writerow([label, f"{float(g.levels[j][idx]):.6f}"])
