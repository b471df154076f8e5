"""Exact dimension formulas: prefix-code root solving, digit sets,
substitution fractals, and integer sublattice rank."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import CodeSpecError, ParameterError, RangeError
from .generators import InstantaneousCodeSpec, SubstitutionRule

ROOT_TOLERANCE = 1e-12


def validate_code(spec: InstantaneousCodeSpec) -> List[str]:
    """Return the list of violations; empty means the spec is valid."""
    violations = []
    if spec.k < 2:
        violations.append("base k must be >= 2")
    digits = set(range(spec.k))
    if not spec.delta:
        violations.append("delta must be nonempty")
    if 0 in spec.delta:
        violations.append("delta must not contain 0")
    if not set(spec.delta) <= digits - {0}:
        violations.append(f"delta must be a subset of 1..{spec.k - 1}")
    if not spec.words:
        violations.append("code must be nonempty")
    for w in spec.words:
        if len(w) == 0:
            violations.append("code must not contain the empty string")
        if not set(w) <= digits:
            violations.append(f"word {w} uses digits outside 0..{spec.k - 1}")
    # prefix-freeness by sorted scan: a prefix sorts immediately before
    # any of its extensions
    words = sorted(spec.words)
    for w1, w2 in zip(words, words[1:]):
        if len(w1) < len(w2) and w2[:len(w1)] == w1:
            violations.append(f"word {w1} is a prefix of {w2}")
    return violations


def code_beta(spec: InstantaneousCodeSpec, s: float) -> float:
    """beta(s) = sum over code words of k^(-s * |word|)."""
    return sum(spec.k ** (-s * len(w)) for w in spec.words)


@dataclass(frozen=True)
class CodeDimensionResult:
    s_star: float
    beta_at_s_star: float
    iterations: int
    bracket: Tuple[float, float]


def code_dimension(spec: InstantaneousCodeSpec) -> CodeDimensionResult:
    """Solve beta(s) = 1 by bisection; beta is strictly decreasing in s."""
    violations = validate_code(spec)
    if violations:
        raise CodeSpecError(violations)
    if len(spec.words) == 1:
        return CodeDimensionResult(0.0, 1.0, 0, (0.0, 0.0))
    lo, hi = 0.0, 1.0 + math.log(len(spec.words), spec.k)
    iterations = 0
    while True:
        mid = 0.5 * (lo + hi)
        beta = code_beta(spec, mid)
        iterations += 1
        if abs(beta - 1.0) <= ROOT_TOLERANCE or iterations >= 200:
            return CodeDimensionResult(mid, beta, iterations, (lo, hi))
        if beta > 1.0:
            lo = mid
        else:
            hi = mid


def digit_dimension(k: int, gamma: Sequence[int]) -> float:
    """ln|gamma| / ln k for a digit-restricted set."""
    gamma = sorted(set(int(d) for d in gamma))
    if k < 2:
        raise ParameterError("base must be >= 2")
    if any(d < 0 or d >= k for d in gamma):
        raise ParameterError(f"digits must lie in 0..{k - 1}")
    if not set(gamma) - {0}:
        raise ParameterError("digit set must contain a nonzero digit")
    return math.log(len(gamma)) / math.log(k)


def substitution_dimension(rule: SubstitutionRule) -> float:
    """log Y / log c, Y the number of surviving cells in the rule."""
    errs = rule.validate()
    if errs:
        from .errors import RuleError
        raise RuleError("; ".join(errs))
    return math.log(rule.survivor_count) / math.log(rule.c)


def lattice_subspace_dimension(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals of an integer vector list, computed by
    exact fraction-free (Bareiss) elimination."""
    rows = [list(int(x) for x in v) for v in vectors]
    if not rows:
        raise RangeError("vector list must be nonempty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise RangeError("vectors must share one dimension")
    rank = 0
    prev_pivot = 1
    col = 0
    while rank < len(rows) and col < width:
        pivot_row = next((i for i in range(rank, len(rows)) if rows[i][col] != 0),
                         None)
        if pivot_row is None:
            col += 1
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            for j in range(col + 1, width):
                rows[i][j] = (rows[i][j] * pivot - rows[i][col] * rows[rank][j]) \
                    // prev_pivot
            rows[i][col] = 0
        prev_pivot = pivot
        rank += 1
        col += 1
    return rank
