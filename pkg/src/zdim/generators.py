"""Constructors for the named set families: basic integer families,
digit-restricted sets, prefix-code sets, Pascal-parity lattice points,
substitution fractals, and the tower-spaced sum-construction pair."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import mpmath
import numpy as np

from .errors import (BudgetExceededError, ParameterError, RangeError,
                     RuleError, UsageError)
from .sets import (DEFAULT_BUDGET, IntegerSet, LatticePointSet,
                   finite_integer_set)

_CHUNK = 1 << 15


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------

class _PrimeCache:
    """Grow-on-demand odd-index sieve with a sorted prime array."""

    def __init__(self):
        self.limit = 0
        self.primes = np.empty(0, dtype=np.int64)

    def extend(self, limit: int) -> None:
        if limit <= self.limit:
            return
        limit = max(limit, 1 << 16, 2 * self.limit)
        sieve = np.ones(limit // 2 + 1, dtype=bool)  # index i -> 2i+1
        sieve[0] = False
        for p in range(3, math.isqrt(limit) + 1, 2):
            if sieve[p // 2]:
                sieve[p * p // 2::p] = False
        odd = 2 * np.nonzero(sieve)[0] + 1
        self.primes = np.concatenate(([2], odd[odd <= limit])).astype(np.int64)
        self.limit = limit

    def count_le(self, x: int) -> int:
        if x < 2:
            return 0
        self.extend(x)
        return int(np.searchsorted(self.primes, x, side="right"))

    def is_prime(self, n: int) -> bool:
        if n < 2:
            return False
        self.extend(n)
        i = int(np.searchsorted(self.primes, n))
        return i < len(self.primes) and int(self.primes[i]) == n


_PRIMES = _PrimeCache()


def primes() -> IntegerSet:
    def stream():
        lo = 0
        while True:
            _PRIMES.extend(max(1 << 16, 2 * lo))
            arr = _PRIMES.primes
            for p in arr[np.searchsorted(arr, lo, side="right"):]:
                yield int(p)
            lo = int(arr[-1])

    return IntegerSet(stream=stream,
                      membership=_PRIMES.is_prime,
                      exact_count=lambda a, b: _PRIMES.count_le(b) - _PRIMES.count_le(a - 1),
                      name="primes")


# ---------------------------------------------------------------------------
# powers, perfect powers, trivial families
# ---------------------------------------------------------------------------

def integer_root(x: int, m: int) -> int:
    """floor(x^(1/m)) computed exactly on integers."""
    if x < 0 or m < 1:
        raise RangeError("integer_root needs x >= 0, m >= 1")
    if x == 0:
        return 0
    if m == 1:
        return x
    if m == 2:
        return math.isqrt(x)
    r = int(round(x ** (1.0 / m)))
    while r > 0 and r ** m > x:
        r -= 1
    while (r + 1) ** m <= x:
        r += 1
    return r


def powers_of(b: int) -> IntegerSet:
    if b < 2:
        raise ParameterError("powers base must be >= 2")

    def stream():
        v = 1
        while True:
            yield v
            v *= b

    def count(a: int, b_hi: int) -> int:
        n = 0
        v = 1
        while v <= b_hi:
            if v >= a:
                n += 1
            v *= b
        return n

    def member(n: int) -> bool:
        if n < 1:
            return False
        while n % b == 0:
            n //= b
        return n == 1

    return IntegerSet(stream, member, count, name=f"powers({b})")


def perfect_powers(m: int) -> IntegerSet:
    if m < 2:
        raise ParameterError("perfect-power exponent must be >= 2")

    def stream():
        a = 1
        while True:
            yield a ** m
            a += 1

    return IntegerSet(
        stream,
        membership=lambda n: n >= 1 and integer_root(n, m) ** m == n,
        exact_count=lambda a, b: integer_root(b, m) - integer_root(a - 1, m),
        name=f"perfect_powers({m})")


def all_integers() -> IntegerSet:
    return IntegerSet(stream=lambda: itertools.count(1),
                      membership=lambda n: n >= 1,
                      exact_count=lambda a, b: b - a + 1,
                      name="all")


def gen_basic(kind: str, param=None) -> IntegerSet:
    """Dispatcher over the basic families used by the CLI grammar."""
    if kind == "powers":
        return powers_of(int(param))
    if kind == "perfect_powers":
        return perfect_powers(int(param))
    if kind == "primes":
        return primes()
    if kind == "finite":
        return finite_integer_set(param)
    if kind == "all":
        return all_integers()
    raise UsageError(f"unknown basic family {kind!r}")


# ---------------------------------------------------------------------------
# digit-restricted sets
# ---------------------------------------------------------------------------

def digits_of(n: int, k: int) -> List[int]:
    """Base-k expansion of n, most significant digit first."""
    if n < 1:
        raise RangeError("expansions defined for positive integers")
    out = []
    while n:
        out.append(n % k)
        n //= k
    out.reverse()
    return out


def digits_to_int(digs: Sequence[int], k: int) -> int:
    v = 0
    for d in digs:
        v = v * k + d
    return v


def _digit_count_le(x: int, k: int, allowed: Sequence[int]) -> int:
    """Numbers in [1, x] whose base-k expansion uses only allowed digits."""
    if x <= 0:
        return 0
    digs = digits_of(x, k)
    L = len(digs)
    lead = [d for d in allowed if d != 0]
    g, gl = len(allowed), len(lead)
    total = sum(gl * g ** (m - 1) for m in range(1, L))
    for i, d in enumerate(digs):
        opts = lead if i == 0 else allowed
        total += sum(1 for a in opts if a < d) * g ** (L - 1 - i)
        if d not in opts:
            break
    else:
        total += 1
    return total


def gen_digit_set(k: int, gamma: Sequence[int]) -> IntegerSet:
    """All n whose base-k expansion uses only digits in gamma."""
    if k < 2:
        raise ParameterError("base must be >= 2")
    gamma = sorted(set(int(d) for d in gamma))
    if any(d < 0 or d >= k for d in gamma):
        raise ParameterError(f"digits must lie in 0..{k - 1}")
    if not set(gamma) - {0}:
        raise ParameterError("digit set must contain a nonzero digit")
    gset = set(gamma)
    lead = [d for d in gamma if d != 0]

    def stream():
        for length in itertools.count(1):
            for first in lead:
                for rest in itertools.product(gamma, repeat=length - 1):
                    yield digits_to_int((first,) + rest, k)

    return IntegerSet(
        stream,
        membership=lambda n: n >= 1 and all(d in gset for d in digits_of(n, k)),
        exact_count=lambda a, b: _digit_count_le(b, k, gamma) - _digit_count_le(a - 1, k, gamma),
        name=f"digits(k={k},allow={''.join(map(str, gamma))})")


# ---------------------------------------------------------------------------
# instantaneous-code sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InstantaneousCodeSpec:
    """Base k, leading-digit set delta, and a finite prefix code of words
    over 0..k-1 (each word a tuple of digits)."""

    k: int
    delta: frozenset
    words: tuple

    @staticmethod
    def make(k: int, delta: Sequence[int], words: Sequence[Sequence[int]]
             ) -> "InstantaneousCodeSpec":
        return InstantaneousCodeSpec(
            k=int(k),
            delta=frozenset(int(d) for d in delta),
            words=tuple(sorted(tuple(int(d) for d in w) for w in set(map(tuple, words)))))


class _CodeDfa:
    """Deterministic automaton for the language delta . words*.

    States: -1 dead, 0 initial, 1 root (= between code words), 2.. trie
    interior.  Accepting state is the root.
    """

    def __init__(self, spec: InstantaneousCodeSpec):
        self.k = spec.k
        self.delta = sorted(spec.delta)
        # trie over code words; node 1 is the root
        trans: List[Dict[int, int]] = [dict(), dict()]  # 0 initial, 1 root
        for w in spec.words:
            node = 1
            for i, d in enumerate(w):
                if i == len(w) - 1:
                    trans[node][d] = 1  # word complete, back to root
                    break
                nxt = trans[node].get(d)
                if nxt is None:
                    trans.append(dict())
                    nxt = len(trans) - 1
                    trans[node][d] = nxt
                node = nxt
        for d in self.delta:
            trans[0][d] = 1
        self.trans = trans
        self.accept = 1
        self._reach: Dict[int, np.ndarray] = {}

    def step(self, state: int, digit: int) -> int:
        if state < 0:
            return -1
        return self.trans[state].get(digit, -1)

    def accepts(self, digs: Sequence[int]) -> bool:
        state = 0
        for d in digs:
            state = self.step(state, d)
            if state < 0:
                return False
        return state == self.accept

    def reach_table(self, length: int) -> np.ndarray:
        """reach[l, q] = True iff accept reachable from state q in exactly l steps."""
        tbl = self._reach.get(length)
        if tbl is not None:
            return tbl
        nstates = len(self.trans)
        tbl = np.zeros((length + 1, nstates), dtype=bool)
        tbl[0, self.accept] = True
        for l in range(1, length + 1):
            for q in range(nstates):
                tbl[l, q] = any(tbl[l - 1, nxt] for nxt in self.trans[q].values())
        self._reach[length] = tbl
        return tbl

    def count_exact_length(self, length: int) -> int:
        """Number of accepted strings of the given length."""
        counts = {self.accept: 1}
        for _ in range(length):
            prev: Dict[int, int] = {}
            for q, tr in enumerate(self.trans):
                c = sum(counts.get(nxt, 0) for nxt in tr.values())
                if c:
                    prev[q] = c
            counts = prev
        return counts.get(0, 0)

    def count_le(self, x: int) -> int:
        """Accepted strings whose numeric value is in [1, x]."""
        if x < 1:
            return 0
        digs = digits_of(x, self.k)
        L = len(digs)
        total = sum(self.count_exact_length(l) for l in range(1, L))
        # tight scan over length-L strings
        # free[q][r] = number of strings of length r accepted from state q
        free: List[Dict[int, int]] = [dict() for _ in range(L + 1)]
        free[0] = {self.accept: 1}
        for r in range(1, L + 1):
            for q, tr in enumerate(self.trans):
                c = sum(free[r - 1].get(nxt, 0) for nxt in tr.values())
                if c:
                    free[r][q] = c
        state = 0
        for i, d in enumerate(digs):
            rem = L - 1 - i
            for smaller in range(0, d):
                nxt = self.step(state, smaller)
                if i == 0 and smaller == 0:
                    continue  # expansions have no leading zero; delta excludes 0
                if nxt >= 0:
                    total += free[rem].get(nxt, 0)
            state = self.step(state, d)
            if state < 0:
                return total
        if state == self.accept:
            total += 1
        return total


def gen_code_set(spec: InstantaneousCodeSpec) -> IntegerSet:
    """All n whose base-k expansion is a delta digit followed by a
    concatenation of code words."""
    from .closed_form import validate_code  # deferred: avoids import cycle
    violations = validate_code(spec)
    if violations:
        from .errors import CodeSpecError
        raise CodeSpecError(violations)

    dfa = _CodeDfa(spec)
    k = spec.k

    def _accepted_of_length(length: int) -> Iterator[List[int]]:
        # digit-ascending DFS = numeric order within a fixed length
        reach = dfa.reach_table(length)
        digs: List[int] = []

        def rec(state: int, remaining: int):
            if remaining == 0:
                if state == dfa.accept:
                    yield list(digs)
                return
            for d in sorted(dfa.trans[state]):
                nxt = dfa.trans[state][d]
                if reach[remaining - 1, nxt]:
                    digs.append(d)
                    yield from rec(nxt, remaining - 1)
                    digs.pop()

        yield from rec(0, length)

    def stream():
        for length in itertools.count(1):
            for digs in _accepted_of_length(length):
                yield digits_to_int(digs, k)

    def member(n: int) -> bool:
        return n >= 1 and dfa.accepts(digits_of(n, k))

    return IntegerSet(
        stream,
        membership=member,
        exact_count=lambda a, b: dfa.count_le(b) - dfa.count_le(a - 1),
        name=f"code(k={k})")


# ---------------------------------------------------------------------------
# Pascal's triangle modulo 2
# ---------------------------------------------------------------------------

def _subset_sum_pow2_below(m: int) -> int:
    """sum over 0 <= s < m of 2^popcount(s), exactly."""
    total = 0
    ones_above = 0
    for i in range(m.bit_length() - 1, -1, -1):
        if (m >> i) & 1:
            total += (1 << ones_above) * 3 ** i
            ones_above += 1
    return total


def gen_pascal_mod2(depth: int) -> LatticePointSet:
    """Lattice points (m, n) with binomial(m+n, m) odd and m+n <= 2^depth.

    Uses the carry-free criterion m AND n == 0; the test suite validates
    the criterion independently against Pascal-row parity.
    """
    if depth < 0 or depth > 20:
        raise ParameterError("depth must lie in 0..20")
    top = 1 << depth

    def chunks():
        buf = []
        for s in range(top + 1):
            sub = s
            while True:  # all bit-subsets of s, descending
                buf.append((sub, s - sub))
                if sub == 0:
                    break
                sub = (sub - 1) & s
            if len(buf) >= _CHUNK:
                yield np.array(buf, dtype=np.int64)
                buf = []
        if buf:
            yield np.array(buf, dtype=np.int64)

    def l1_le(t: int) -> int:
        # nonzero points with m+n <= t: sum_{s=1..t} 2^popcount(s)
        t = min(t, top)
        if t < 1:
            return 0
        return _subset_sum_pow2_below(t + 1) - 1

    return LatticePointSet(d=2, chunks=chunks, l1_count_le=l1_le,
                           name=f"pascal_mod2({depth})")


def pascal_parity_member(m: int, n: int) -> bool:
    return m >= 0 and n >= 0 and (m & n) == 0


# ---------------------------------------------------------------------------
# substitution fractals
# ---------------------------------------------------------------------------

ROTATIONS = ("R0", "R1", "R2", "R3")


@dataclass(frozen=True)
class SubstitutionRule:
    """Contraction base c, lattice dimension d, and cell mapping.

    ``cells`` maps each index tuple in {1..c}^d to "no" or one of R0..R3.
    Quarter-turn rotations are planar, so R1..R3 require d == 2.
    """

    c: int
    d: int
    cells: tuple  # ((index_tuple, action), ...) sorted

    @staticmethod
    def make(c: int, d: int, mapping: Dict[Tuple[int, ...], str]) -> "SubstitutionRule":
        return SubstitutionRule(c=int(c), d=int(d),
                                cells=tuple(sorted(mapping.items())))

    def mapping(self) -> Dict[Tuple[int, ...], str]:
        return dict(self.cells)

    def validate(self) -> List[str]:
        errs = []
        if self.c < 2:
            errs.append("contraction base c must be >= 2")
        if self.d < 1:
            errs.append("dimension d must be >= 1")
        mapping = self.mapping()
        expected = set(itertools.product(range(1, self.c + 1), repeat=self.d))
        if set(mapping) != expected:
            errs.append("cell mapping must cover {1..c}^d exactly")
        home = tuple([1] * self.d)
        if mapping.get(home) != "R0":
            errs.append("cell (1,...,1) must map to R0")
        for idx, act in mapping.items():
            if act not in ROTATIONS and act != "no":
                errs.append(f"unknown action {act!r} at {idx}")
            elif act in ("R1", "R2", "R3") and self.d != 2:
                errs.append("quarter-turn rotations require d = 2")
        return errs

    @property
    def survivor_count(self) -> int:
        return sum(1 for _, act in self.cells if act != "no")


def substitution_grid(rule: SubstitutionRule, depth: int) -> np.ndarray:
    """Boolean occupancy grid of the depth-k stage; index [x-1, ..., z-1]
    corresponds to the lattice point (x, ..., z) in [1, c^k]^d."""
    errs = rule.validate()
    if errs:
        raise RuleError("; ".join(errs))
    if depth < 0:
        raise RangeError("depth must be >= 0")
    c, d = rule.c, rule.d
    if c ** (d * depth) > DEFAULT_BUDGET:
        raise BudgetExceededError(f"grid of {c ** (d * depth)} cells exceeds budget")
    grid = np.ones((1,) * d, dtype=bool)
    mapping = rule.mapping()
    for k in range(depth):
        side = c ** k
        new = np.zeros((side * c,) * d, dtype=bool)
        for idx, act in mapping.items():
            if act == "no":
                continue
            block = grid if act == "R0" else np.rot90(grid, k=int(act[1]))
            slices = tuple(slice((i - 1) * side, i * side) for i in idx)
            new[slices] = block
        grid = new
    return grid


def gen_substitution(rule: SubstitutionRule, depth: int) -> LatticePointSet:
    grid = substitution_grid(rule, depth)

    def chunks():
        # extract occupied cells in bands along the first axis to bound
        # peak memory on dense high-depth grids
        band = max(1, (1 << 22) // max(1, grid[0].size))
        for x0 in range(0, grid.shape[0], band):
            coords = np.argwhere(grid[x0:x0 + band]).astype(np.int64)
            if coords.size:
                coords[:, 0] += x0
                yield coords + 1

    return LatticePointSet(d=rule.d, chunks=chunks,
                           name=f"subst(c={rule.c},d={rule.d})")


def sierpinski_rule() -> SubstitutionRule:
    return SubstitutionRule.make(2, 2, {(1, 1): "R0", (1, 2): "R0",
                                        (2, 1): "R0", (2, 2): "no"})


# ---------------------------------------------------------------------------
# tower-spaced sum construction
# ---------------------------------------------------------------------------

def tower_values(limit: int) -> List[int]:
    """Tower function values T(1)=1, T(n+1)=2^T(n), up to ``limit``."""
    vals = [1]
    while True:
        nxt = 2 ** vals[-1]
        if nxt > limit:
            return vals
        vals.append(nxt)


@dataclass(frozen=True)
class TowerPairSpec:
    alpha: float
    beta: float
    gamma: float

    def validate(self) -> List[str]:
        a, b, g = self.alpha, self.beta, self.gamma
        errs = []
        if not (0 <= a <= 1 and 0 <= b <= 1 and 0 <= g <= 1):
            errs.append("alpha, beta, gamma must lie in [0, 1]")
        if not a < b:
            errs.append("need alpha < beta")
        if not b <= g:
            errs.append("need beta <= gamma")
        if not g <= min(1.0, a + b):
            errs.append("need gamma <= min(1, alpha + beta)")
        return errs


def _pow2_int(x: float, op: str) -> int:
    """ceil/floor of 2^x as an exact integer, for arbitrary positive x."""
    if x <= 0:
        return 1 if op == "ceil" else (1 if x == 0 else 0)
    with mpmath.workprec(int(x) + 64):
        v = mpmath.power(2, mpmath.mpf(x))
        return int(mpmath.ceil(v)) if op == "ceil" else int(mpmath.floor(v))


@dataclass(frozen=True)
class TowerAnalytics:
    """Exact per-bit-length counts for the constructed pair and their sum."""

    spec: TowerPairSpec

    def a_count(self, t: int) -> int:
        """|A| at bit length t (t must be a tower value)."""
        return min(_pow2_int(self.spec.alpha * t, "ceil"), 2 ** (t - 1))

    def b1_count(self, t: int) -> int:
        return min(_pow2_int(self.spec.beta * t, "ceil"), 2 ** (t - 1))

    def _b2_params(self, t: int) -> Tuple[int, int]:
        step = _pow2_int(self.spec.alpha * t, "floor")
        n_raw = _pow2_int((self.spec.gamma - self.spec.alpha) * t, "ceil")
        k_cap = (2 ** (t - 1) - 1) // step + 1
        return step, min(n_raw, k_cap)

    def b_count(self, t: int) -> int:
        nb1 = self.b1_count(t)
        step, nb2 = self._b2_params(t)
        overlap = min(nb2, (nb1 - 1) // step + 1) if nb1 > 0 else 0
        return nb1 + nb2 - overlap

    def c_next_count(self, t: int) -> int:
        """|A+B| at bit length t+1, from the construction's exact formula."""
        a_ceil = _pow2_int(self.spec.alpha * t, "ceil")
        a_floor = _pow2_int(self.spec.alpha * t, "floor")
        g_minus = _pow2_int((self.spec.gamma - self.spec.alpha) * t, "ceil")
        return a_ceil + a_floor * (g_minus - 1)

    def c_next_bounds_log2(self, t: int) -> Tuple[float, float]:
        """(log2 lower, log2 upper) of the proved two-sided bounds."""
        g, a = self.spec.gamma, self.spec.alpha
        lo = g * t + math.log2(1 - 2 ** (-a * t)) if a * t > 1e-12 else -math.inf
        hi = 1 + g * t
        return lo, hi


def gen_tower_pair(spec: TowerPairSpec, materialize_bits: int = 16
                   ) -> Tuple[IntegerSet, IntegerSet, TowerAnalytics]:
    """The sum-construction pair (A, B) plus exact analytic counts.

    Elements are only materialized for bit lengths up to
    ``materialize_bits``; beyond that the analytics object serves counts.
    """
    errs = spec.validate()
    if errs:
        raise ParameterError("; ".join(errs))
    analytics = TowerAnalytics(spec)
    towers = [t for t in tower_values(materialize_bits)]

    def a_elements() -> List[int]:
        out = []
        for t in towers:
            base = 2 ** (t - 1)
            out.extend(range(base, base + analytics.a_count(t)))
        return out

    def b_elements() -> List[int]:
        out = []
        for t in towers:
            base = 2 ** (t - 1)
            vals = set(range(base, base + analytics.b1_count(t)))
            step, nb2 = analytics._b2_params(t)
            vals.update(base + k * step for k in range(nb2))
            out.extend(sorted(vals))
        return out

    A = finite_integer_set(a_elements(), name=f"tower_A({spec.alpha})")
    B = finite_integer_set(b_elements(), name=f"tower_B({spec.beta},{spec.gamma})")
    return A, B, analytics


# ---------------------------------------------------------------------------
# spec-string grammar (documented in the CLI help)
# ---------------------------------------------------------------------------

def _parse_kv(body: str) -> Dict[str, str]:
    out = {}
    if body:
        for part in body.split(","):
            if "=" not in part:
                raise UsageError(f"malformed parameter {part!r}")
            key, val = part.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def from_spec(text: str):
    """Build a set from a textual spec string, e.g. ``squares``,
    ``digits:k=3,allow=02`` or ``subst:c=2,d=2,rule=000n``."""
    head, _, body = text.partition(":")
    head = head.strip()
    try:
        if head == "all":
            return all_integers()
        if head == "primes":
            return primes()
        if head == "squares":
            return perfect_powers(2)
        if head == "cubes":
            return perfect_powers(3)
        if head == "powers":
            return powers_of(int(_parse_kv(body)["b"]))
        if head == "perfect":
            return perfect_powers(int(_parse_kv(body)["m"]))
        if head == "finite":
            return finite_integer_set(int(v) for v in body.split("|"))
        if head == "digits":
            kv = _parse_kv(body)
            return gen_digit_set(int(kv["k"]), [int(ch) for ch in kv["allow"]])
        if head == "code":
            kv = _parse_kv(body)
            words = [tuple(int(ch) for ch in w) for w in kv["B"].split("|")]
            spec = InstantaneousCodeSpec.make(
                int(kv["k"]), [int(ch) for ch in kv["delta"]], words)
            return gen_code_set(spec)
        if head == "pascal":
            return gen_pascal_mod2(int(_parse_kv(body)["depth"]))
        if head == "subst":
            kv = _parse_kv(body)
            c, d = int(kv["c"]), int(kv["d"])
            cells = kv["rule"]
            idxs = list(itertools.product(range(1, c + 1), repeat=d))
            if len(cells) != len(idxs):
                raise UsageError(
                    f"rule needs {len(idxs)} cell actions, got {len(cells)}")
            mapping = {}
            for idx, ch in zip(idxs, cells):
                mapping[idx] = "no" if ch == "n" else f"R{ch}"
            rule = SubstitutionRule.make(c, d, mapping)
            return gen_substitution(rule, int(kv.get("depth", "6")))
        if head == "tower":
            kv = _parse_kv(body)
            spec = TowerPairSpec(float(kv["a"]), float(kv["b"]), float(kv["g"]))
            A, B, _ = gen_tower_pair(spec)
            part = kv.get("part", "A")
            if part == "A":
                return A
            if part == "B":
                return B
            raise UsageError(f"unknown tower part {part!r}")
    except KeyError as exc:
        raise UsageError(f"spec {text!r} is missing parameter {exc}") from None
    raise UsageError(f"unknown set spec {text!r}")
