"""Pointwise and Cartesian set operations, affine maps, and bounded-range
connectivity analysis."""

from __future__ import annotations

import csv
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .errors import BudgetExceededError, RangeError, UsageError
from .sets import (DEFAULT_BUDGET, IntegerSet, LatticePointSet,
                   finite_integer_set, lattice_from_points)


# ---------------------------------------------------------------------------
# pointwise sum / product
# ---------------------------------------------------------------------------

def pointwise(A: IntegerSet, B: IntegerSet, op: str, N: int,
              budget: int = DEFAULT_BUDGET) -> IntegerSet:
    """Sorted, deduplicated {a op b <= N}."""
    if op not in ("sum", "product"):
        raise UsageError(f"unknown pointwise op {op!r}")
    if N < 1:
        raise RangeError("bound must be >= 1")
    b_first = next(B.elements(bound=N), None)
    if b_first is None:
        return finite_integer_set([], name=f"{A.name}{op}{B.name}")
    if op == "sum":
        a_hi = N - b_first
    else:
        a_hi = N // b_first
    out = set()
    if a_hi >= 1:
        for a in A.elements(bound=a_hi, budget=budget):
            for b in B.elements(bound=N, budget=budget):
                v = a + b if op == "sum" else a * b
                if v > N:
                    break
                out.add(v)
    symbol = "+" if op == "sum" else "*"
    return finite_integer_set(out, name=f"({A.name}{symbol}{B.name})")


# ---------------------------------------------------------------------------
# Cartesian products
# ---------------------------------------------------------------------------

def cartesian(A: IntegerSet, B: IntegerSet, radius: int,
              budget: int = DEFAULT_BUDGET) -> LatticePointSet:
    """All pairs (a, b) with a in A, b in B and Euclidean norm <= radius."""
    if radius < 1:
        raise RangeError("radius must be >= 1")
    rr = radius * radius
    points = []
    for a in A.elements(bound=radius, budget=budget):
        b_hi = math.isqrt(rr - a * a)
        if b_hi < 1:
            continue
        for b in B.elements(bound=b_hi, budget=budget):
            points.append((a, b))
    base = lattice_from_points(points, 2, name=f"({A.name}x{B.name})")

    norm_sq_hook = None
    if A.exact_count is not None and B.exact_count is not None:
        def norm_sq_hook(q: int) -> int:
            # iterate the sparser axis, count the other in closed form
            limit = math.isqrt(max(q - 1, 0))
            if limit < 1:
                return 0
            if B.exact_count(1, limit) <= A.exact_count(1, limit):
                outer, inner = B, A
            else:
                outer, inner = A, B
            total = 0
            for v in outer.elements(bound=limit, budget=budget):
                other = math.isqrt(q - v * v)
                if other >= 1:
                    total += inner.exact_count(1, other)
            return total

    return LatticePointSet(d=2, chunks=base.chunks,
                           norm_sq_count_le=norm_sq_hook, name=base.name)


def analytic_cartesian(A: IntegerSet, B: IntegerSet,
                       budget: int = DEFAULT_BUDGET) -> LatticePointSet:
    """Count-only product set for scales where materialization is
    impossible; both factors must carry exact counts."""
    if A.exact_count is None or B.exact_count is None:
        raise UsageError("analytic products need exact counts on both factors")

    def norm_sq_hook(q: int) -> int:
        limit = math.isqrt(max(q - 1, 0))
        if limit < 1:
            return 0
        if B.exact_count(1, limit) <= A.exact_count(1, limit):
            outer, inner = B, A
            swap = True
        else:
            outer, inner = A, B
            swap = False
        total = 0
        for v in outer.elements(bound=limit, budget=budget):
            other = math.isqrt(q - v * v)
            if other >= 1:
                total += inner.exact_count(1, other)
        return total

    def chunks():
        raise BudgetExceededError(
            "analytic product sets are count-only; no enumeration available")
        yield  # pragma: no cover

    return LatticePointSet(d=2, chunks=chunks, norm_sq_count_le=norm_sq_hook,
                           name=f"({A.name}x{B.name})")


# ---------------------------------------------------------------------------
# affine maps
# ---------------------------------------------------------------------------

def affine(A: IntegerSet, k: int, mode: str) -> IntegerSet:
    """k + A or k * A with exact counting transported through the map."""
    if k < 1:
        raise RangeError("k must be >= 1")
    if mode == "translate":
        def stream():
            for n in A.stream():
                yield n + k

        def count(a: int, b: int) -> Optional[int]:
            lo, hi = max(a - k, 1), b - k
            return A.exact_count(lo, hi) if hi >= lo else 0

        return IntegerSet(
            stream,
            membership=(lambda n: n > k and A.membership(n - k))
            if A.membership else None,
            exact_count=count if A.exact_count else None,
            name=f"({k}+{A.name})")
    if mode == "dilate":
        def stream():
            for n in A.stream():
                yield n * k

        def count(a: int, b: int) -> int:
            lo, hi = (a + k - 1) // k, b // k
            return A.exact_count(lo, hi) if hi >= lo else 0

        return IntegerSet(
            stream,
            membership=(lambda n: n % k == 0 and n >= k and A.membership(n // k))
            if A.membership else None,
            exact_count=count if A.exact_count else None,
            name=f"({k}{A.name})")
    raise UsageError(f"unknown affine mode {mode!r}")


# ---------------------------------------------------------------------------
# bounded connectivity
# ---------------------------------------------------------------------------

class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:  # path compression
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return
        if self.size[ri] < self.size[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        self.size[ri] += self.size[rj]


@dataclass(frozen=True)
class Component:
    component_id: int
    points: tuple

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def min_element(self):
        return self.points[0]

    @property
    def max_element(self):
        return self.points[-1]


def bounded_components(P, r: int, budget: int = DEFAULT_BUDGET
                       ) -> List[Component]:
    """Partition a finite point collection into maximal components whose
    points are chained by Euclidean steps of length <= r.

    Neighbor search uses grid buckets of side r, so only points in
    adjacent buckets are ever compared.
    """
    if r < 1:
        raise RangeError("r must be >= 1")
    if isinstance(P, IntegerSet):
        pts = [(n,) for n in P.elements(budget=budget)]
    elif isinstance(P, LatticePointSet):
        pts = sorted({tuple(int(x) for x in row)
                      for chunk in P.iter_chunks(budget=budget)
                      for row in chunk})
    else:
        pts = sorted({tuple(int(x) for x in p) for p in P})
    if not pts:
        return []
    d = len(pts[0])
    rr = r * r

    buckets: Dict[tuple, List[int]] = defaultdict(list)
    for i, p in enumerate(pts):
        buckets[tuple(c // r for c in p)].append(i)

    uf = _UnionFind(len(pts))
    offsets = list(itertools.product((-1, 0, 1), repeat=d))
    for cell, idxs in buckets.items():
        for off in offsets:
            other = tuple(c + o for c, o in zip(cell, off))
            if other < cell:
                continue  # each unordered cell pair handled once
            js = buckets.get(other)
            if not js:
                continue
            for i in idxs:
                pi = pts[i]
                for j in js:
                    if other == cell and j <= i:
                        continue
                    pj = pts[j]
                    if sum((a - b) ** 2 for a, b in zip(pi, pj)) <= rr:
                        uf.union(i, j)

    groups: Dict[int, List[tuple]] = defaultdict(list)
    for i, p in enumerate(pts):
        groups[uf.find(i)].append(p)
    comps = [tuple(sorted(g)) for g in groups.values()]
    comps.sort()
    out = []
    for cid, comp in enumerate(comps):
        if d == 1:
            comp = tuple(p[0] for p in comp)
        out.append(Component(component_id=cid, points=comp))
    return out


def components_csv(components: Sequence[Component], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["component_id", "size", "min_element", "max_element"])
    for c in components:
        fmt = (lambda p: str(p)) if not isinstance(c.min_element, tuple) \
            else (lambda p: " ".join(map(str, p)))
        w.writerow([c.component_id, c.size, fmt(c.min_element), fmt(c.max_element)])
