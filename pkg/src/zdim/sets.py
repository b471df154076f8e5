"""Core set abstractions: integer sets, lattice point sets, dyadic count
profiles and truncated zeta partial sums.

Conventions used throughout:

* dyadic blocks are half-open, ``block(n) = [2^n, 2^(n+1))`` under the
  chosen norm, so the blocks partition the positive reals;
* cumulative counts are closed, ``cumulative[n] = |A ∩ [1, 2^n]|``, which
  is the form the entropy-rate exponents are computed from;
* the zero vector never contributes to lattice norm counts.
"""

from __future__ import annotations

import csv
import io
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import BudgetExceededError, ParseError, RangeError, UsageError

#: Elements any single streaming call may enumerate before erroring out.
DEFAULT_BUDGET = 10**8

NORM_KINDS = ("value", "euclidean", "l1", "binary-length")


# ---------------------------------------------------------------------------
# integer sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerSet:
    """An ascending stream of positive integers.

    ``stream`` produces a fresh strictly increasing iterator on each call.
    ``membership`` and ``exact_count`` are optional accelerators; when
    present they must agree with the stream.
    """

    stream: Callable[[], Iterator[int]]
    membership: Optional[Callable[[int], bool]] = None
    exact_count: Optional[Callable[[int, int], int]] = None
    name: str = "set"

    def elements(self, bound: Optional[int] = None,
                 budget: int = DEFAULT_BUDGET) -> Iterator[int]:
        """Yield elements in ascending order, stopping after ``bound``.

        Raises BudgetExceededError once ``budget`` elements have been
        yielded; the partial count rides on the exception.
        """
        produced = 0
        for n in self.stream():
            if bound is not None and n > bound:
                return
            if produced >= budget:
                raise BudgetExceededError(
                    f"{self.name}: enumeration budget {budget} exceeded",
                    partial=produced)
            produced += 1
            yield n

    def contains(self, n: int, bound_hint: Optional[int] = None) -> bool:
        if self.membership is not None:
            return self.membership(n)
        for m in self.elements(bound=n):
            if m == n:
                return True
        return False

    @staticmethod
    def binary_length(n: int) -> int:
        """Length of the standard (no leading zero) binary expansion."""
        if n < 1:
            raise RangeError("binary_length defined for positive integers")
        return n.bit_length()


def finite_integer_set(values: Iterable[int], name: str = "finite") -> IntegerSet:
    """Explicit finite set with bisect-backed exact counting."""
    vals = sorted(set(int(v) for v in values))
    if vals and vals[0] < 1:
        raise RangeError("finite sets must contain positive integers only")
    vset = set(vals)

    def count(a: int, b: int) -> int:
        return bisect_right(vals, b) - bisect_left(vals, a)

    return IntegerSet(stream=lambda: iter(vals),
                      membership=lambda n: n in vset,
                      exact_count=count,
                      name=name)


def count_range(A: IntegerSet, a: int, b: int,
                budget: int = DEFAULT_BUDGET) -> int:
    """|A ∩ [a, b]|, via exact_count when available, else streaming."""
    if not (isinstance(a, int) and isinstance(b, int)):
        raise RangeError("range endpoints must be integers")
    if a < 1 or a > b:
        raise RangeError(f"need 1 <= a <= b, got a={a}, b={b}")
    if A.exact_count is not None:
        return A.exact_count(a, b)
    count = 0
    try:
        for n in A.elements(bound=b, budget=budget):
            if n >= a:
                count += 1
    except BudgetExceededError as exc:
        raise BudgetExceededError(str(exc), partial=count) from None
    return count


# ---------------------------------------------------------------------------
# lattice point sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticePointSet:
    """A finite or generator-backed set of integer points in Z^d.

    ``chunks`` yields (m, d) integer arrays covering every point exactly
    once (order unspecified).  ``l1_count_le`` / ``norm_sq_count_le`` are
    optional exact counting hooks:

    * ``l1_count_le(t)``   -> number of nonzero points with ‖p‖₁ <= t
    * ``norm_sq_count_le(q)`` -> number of nonzero points with ‖p‖² <= q
    """

    d: int
    chunks: Callable[[], Iterator[np.ndarray]]
    l1_count_le: Optional[Callable[[int], int]] = None
    norm_sq_count_le: Optional[Callable[[int], int]] = None
    name: str = "lattice-set"

    def iter_chunks(self, budget: int = DEFAULT_BUDGET) -> Iterator[np.ndarray]:
        produced = 0
        for chunk in self.chunks():
            arr = np.asarray(chunk)
            if arr.ndim != 2 or arr.shape[1] != self.d:
                raise UsageError(
                    f"{self.name}: chunk shape {arr.shape} incompatible with d={self.d}")
            produced += len(arr)
            if produced > budget:
                raise BudgetExceededError(
                    f"{self.name}: enumeration budget {budget} exceeded",
                    partial=produced - len(arr))
            yield arr

    def num_points(self, budget: int = DEFAULT_BUDGET) -> int:
        return sum(len(c) for c in self.iter_chunks(budget=budget))


def lattice_from_points(points: Sequence[Sequence[int]], d: int,
                        name: str = "lattice-set") -> LatticePointSet:
    arr = np.asarray(sorted(set(tuple(int(x) for x in p) for p in points)),
                     dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, d)
    if arr.shape[1:] != (d,):
        raise UsageError(f"points have arity {arr.shape[1:]} but d={d}")
    return LatticePointSet(d=d, chunks=lambda: iter([arr]), name=name)


# ---------------------------------------------------------------------------
# count profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountProfile:
    """Per-dyadic-block element counts under a chosen norm.

    ``blocks[n]`` counts norms in [2^n, 2^(n+1)); under "binary-length"
    ``blocks[k]`` counts elements whose binary representation has length k.
    ``cumulative[n]`` counts norms in [1, 2^n] (running length sums for
    "binary-length").
    """

    norm_kind: str
    blocks: tuple
    cumulative: tuple
    name: str = "profile"

    @property
    def n_max(self) -> int:
        return len(self.blocks) - 1

    @property
    def total(self) -> int:
        return sum(self.blocks)

    def is_empty(self) -> bool:
        return self.total == 0

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "block_count", "cumulative_count"])
        for n, (b, c) in enumerate(zip(self.blocks, self.cumulative)):
            w.writerow([n, b, c])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _integer_value_profile(A: IntegerSet, n_max: int, budget: int) -> CountProfile:
    top = 2 ** (n_max + 1) - 1
    if A.exact_count is not None:
        blocks = [A.exact_count(2 ** n, 2 ** (n + 1) - 1) for n in range(n_max + 1)]
        cum = [A.exact_count(1, 2 ** n) for n in range(n_max + 1)]
    else:
        blocks = [0] * (n_max + 1)
        cum = [0] * (n_max + 1)
        boundary = [0] * (n_max + 1)
        for v in A.elements(bound=top, budget=budget):
            blocks[v.bit_length() - 1] += 1
            if v & (v - 1) == 0:  # power of two: closed-interval boundary
                boundary[v.bit_length() - 1] = 1
        # elements <= 2^n: all blocks below n plus 2^n itself when present
        running = 0
        for n in range(n_max + 1):
            if n > 0:
                running += blocks[n - 1]
            cum[n] = running + boundary[n]
    return CountProfile("value", tuple(blocks), tuple(cum), name=A.name)


def _binary_length_profile(A: IntegerSet, n_max: int, budget: int) -> CountProfile:
    if A.exact_count is not None:
        blocks = [0] + [A.exact_count(2 ** (k - 1), 2 ** k - 1)
                        for k in range(1, n_max + 1)]
    else:
        blocks = [0] * (n_max + 1)
        for v in A.elements(bound=2 ** n_max - 1, budget=budget):
            blocks[v.bit_length()] += 1
    cum = list(np.cumsum(blocks))
    return CountProfile("binary-length", tuple(blocks), tuple(int(c) for c in cum),
                        name=A.name)


def _lattice_profile(S: LatticePointSet, norm_kind: str, n_max: int,
                     budget: int) -> CountProfile:
    if norm_kind == "l1" and S.l1_count_le is not None:
        le = S.l1_count_le
        blocks = [le(2 ** (n + 1) - 1) - le(2 ** n - 1) for n in range(n_max + 1)]
        cum = [le(2 ** n) for n in range(n_max + 1)]
        return CountProfile("l1", tuple(blocks), tuple(cum), name=S.name)
    if norm_kind == "euclidean" and S.norm_sq_count_le is not None:
        le = S.norm_sq_count_le
        blocks = [le(4 ** (n + 1) - 1) - le(4 ** n - 1) for n in range(n_max + 1)]
        cum = [le(4 ** n) for n in range(n_max + 1)]
        return CountProfile("euclidean", tuple(blocks), tuple(cum), name=S.name)

    # streaming path: histogram squared/linear norms into dyadic bins
    if norm_kind == "euclidean":
        boundaries = np.array([4 ** n for n in range(n_max + 2)], dtype=np.int64)
    else:
        boundaries = np.array([2 ** n for n in range(n_max + 2)], dtype=np.int64)
    blocks = np.zeros(n_max + 1, dtype=object)
    on_boundary = np.zeros(n_max + 1, dtype=object)
    for chunk in S.iter_chunks(budget=budget):
        pts = chunk.astype(np.int64)
        if norm_kind == "euclidean":
            norms = np.einsum("ij,ij->i", pts, pts)
        else:
            norms = np.abs(pts).sum(axis=1)
        norms = norms[norms > 0]  # zero vector excluded
        idx = np.searchsorted(boundaries, norms, side="right") - 1
        keep = idx <= n_max
        counts = np.bincount(idx[keep], minlength=n_max + 1)
        blocks += counts[:n_max + 1]
        hits = np.searchsorted(np.sort(norms), boundaries[:-1], side="right") \
            - np.searchsorted(np.sort(norms), boundaries[:-1], side="left")
        on_boundary += hits
    cum = []
    running = 0
    for n in range(n_max + 1):
        if n > 0:
            running += int(blocks[n - 1])
        cum.append(running + int(on_boundary[n]))
    return CountProfile(norm_kind, tuple(int(b) for b in blocks), tuple(cum),
                        name=S.name)


def block_profile(S, norm_kind: str, n_max: int,
                  budget: int = DEFAULT_BUDGET) -> CountProfile:
    """Count elements per dyadic block of the chosen norm, up to n_max."""
    if n_max < 0:
        raise RangeError("n_max must be >= 0")
    if norm_kind not in NORM_KINDS:
        raise UsageError(f"unknown norm kind {norm_kind!r}")
    if isinstance(S, IntegerSet):
        if norm_kind == "value":
            return _integer_value_profile(S, n_max, budget)
        if norm_kind == "binary-length":
            return _binary_length_profile(S, n_max, budget)
        raise UsageError(f"norm kind {norm_kind!r} requires a lattice set")
    if isinstance(S, LatticePointSet):
        if norm_kind in ("euclidean", "l1"):
            return _lattice_profile(S, norm_kind, n_max, budget)
        raise UsageError(f"norm kind {norm_kind!r} requires an integer set")
    raise UsageError(f"cannot profile object of type {type(S).__name__}")


# ---------------------------------------------------------------------------
# dimension estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionEstimate:
    """Finite-scale upper/lower dimension estimates from a count profile."""

    upper: float
    lower: float
    per_scale_exponents: tuple       # (n, log2(max(block_n,1)) / n)
    cumulative_exponents: tuple      # (n, log2(cumulative_n) / n)
    window: tuple                    # (n_min, n_max) of the tail window used
    method: str
    slope: float = float("nan")      # least-squares slope of log2 cum vs n
    empty: bool = False

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "block_exponent", "cumulative_exponent"])
        cum = dict(self.cumulative_exponents)
        for n, e in self.per_scale_exponents:
            u = cum.get(n, float("nan"))
            w.writerow([n, f"{e:.6f}", f"{u:.6f}"])
        w.writerow(["summary", f"upper={self.upper:.6f}",
                    f"lower={self.lower:.6f}"])


# ---------------------------------------------------------------------------
# zeta partial sums
# ---------------------------------------------------------------------------

class PartialSum(float):
    """A float carrying a completeness flag for truncated sums."""

    complete: bool

    def __new__(cls, value: float, complete: bool = True):
        obj = super().__new__(cls, value)
        obj.complete = complete
        return obj


_CHUNK = 1 << 16


def zeta_partial(S, s: float, N: int, norm_kind: str = "value",
                 budget: int = DEFAULT_BUDGET) -> PartialSum:
    """Truncated zeta sum: sum of norm^-s over elements with norm <= N.

    Summation is deterministic, in ascending norm order.  If the budget is
    hit, the partial sum is returned with ``complete=False``.
    """
    if s < 0:
        raise RangeError("s must be nonnegative")
    if N < 1:
        raise RangeError("N must be >= 1")
    if norm_kind not in NORM_KINDS or norm_kind == "binary-length":
        raise UsageError(f"zeta_partial does not support norm kind {norm_kind!r}")

    complete = True
    if isinstance(S, IntegerSet):
        if norm_kind != "value":
            raise UsageError("integer sets use norm_kind='value'")
        total = 0.0
        chunk = []
        try:
            for n in S.elements(bound=N, budget=budget):
                chunk.append(n)
                if len(chunk) >= _CHUNK:
                    total += float(np.float_power(np.array(chunk, dtype=np.float64), -s).sum())
                    chunk = []
        except BudgetExceededError:
            complete = False
        if chunk:
            total += float(np.float_power(np.array(chunk, dtype=np.float64), -s).sum())
        return PartialSum(total, complete)

    if isinstance(S, LatticePointSet):
        if norm_kind not in ("euclidean", "l1"):
            raise UsageError("lattice sets use norm_kind 'euclidean' or 'l1'")
        norms_sq = []
        try:
            for chunk in S.iter_chunks(budget=budget):
                pts = chunk.astype(np.int64)
                if norm_kind == "euclidean":
                    q = np.einsum("ij,ij->i", pts, pts)
                    q = q[(q > 0) & (q <= N * N)]
                else:
                    q = np.abs(pts).sum(axis=1)
                    q = q[(q > 0) & (q <= N)]
                norms_sq.append(q)
        except BudgetExceededError:
            complete = False
        if norms_sq:
            q = np.sort(np.concatenate(norms_sq)).astype(np.float64)
            exponent = -s / 2 if norm_kind == "euclidean" else -s
            total = float(np.float_power(q, exponent).sum())
        else:
            total = 0.0
        return PartialSum(total, complete)

    raise UsageError(f"cannot sum over object of type {type(S).__name__}")


# ---------------------------------------------------------------------------
# set file parsing
# ---------------------------------------------------------------------------

def parse_set_stream(stream):
    """Parse the text set format.

    Positive-integer files: one strictly increasing decimal per line.
    Lattice files: first line ``d=<k>`` then one point per line, ``k``
    space-separated integers.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    first = stream.readline()
    if first == "":
        return finite_integer_set([], name="parsed")
    if first.strip().startswith("d="):
        try:
            d = int(first.strip()[2:])
        except ValueError:
            raise ParseError("malformed dimension header", 1) from None
        if d < 1:
            raise ParseError("dimension must be positive", 1)
        points = []
        for lineno, line in enumerate(stream, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != d:
                raise ParseError(
                    f"expected {d} coordinates, found {len(parts)}", lineno)
            try:
                points.append(tuple(int(p) for p in parts))
            except ValueError:
                raise ParseError("non-integer coordinate", lineno) from None
        return lattice_from_points(points, d, name="parsed")

    values = []
    prev = 0
    for lineno, line in enumerate([first] + stream.readlines(), start=1):
        text = line.strip()
        if not text:
            continue
        if not text.lstrip("-").isdigit():
            raise ParseError(f"not an integer: {text!r}", lineno)
        if len(text) > 1 and text[0] == "0":
            raise ParseError("leading zeros are not allowed", lineno)
        v = int(text)
        if v < 1:
            raise ParseError(f"non-positive entry {v}", lineno)
        if v <= prev:
            raise ParseError(f"non-monotone entry {v} (previous {prev})", lineno)
        values.append(v)
        prev = v
    return finite_integer_set(values, name="parsed")


def write_integer_set(A: IntegerSet, fh, bound: int,
                      budget: int = DEFAULT_BUDGET) -> int:
    """Write A ∩ [1, bound] in the set file format; returns element count."""
    n = 0
    for v in A.elements(bound=bound, budget=budget):
        fh.write(f"{v}\n")
        n += 1
    return n


def write_lattice_set(S: LatticePointSet, fh,
                      budget: int = DEFAULT_BUDGET) -> int:
    fh.write(f"d={S.d}\n")
    n = 0
    for chunk in S.iter_chunks(budget=budget):
        for row in chunk:
            fh.write(" ".join(str(int(x)) for x in row) + "\n")
            n += 1
    return n
