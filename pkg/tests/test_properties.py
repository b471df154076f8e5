"""Property-based spot checks for the exact counting arithmetic."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from zdim import block_profile, finite_integer_set, zeta_partial
from zdim.generators import (_subset_sum_pow2_below, digits_of, digits_to_int,
                             integer_root, pascal_parity_member)


@given(st.integers(min_value=0, max_value=10 ** 18),
       st.integers(min_value=1, max_value=10))
def test_integer_root_bracket(x, m):
    r = integer_root(x, m)
    assert r ** m <= x
    assert (r + 1) ** m > x


@given(st.integers(min_value=1, max_value=10 ** 12),
       st.integers(min_value=2, max_value=16))
def test_digit_expansion_roundtrip(n, k):
    digs = digits_of(n, k)
    assert digs[0] != 0
    assert all(0 <= d < k for d in digs)
    assert digits_to_int(digs, k) == n


@given(st.integers(min_value=0, max_value=5000))
def test_subset_sum_closed_form(m):
    assert _subset_sum_pow2_below(m) == \
        sum(2 ** bin(s).count("1") for s in range(m))


@given(st.integers(min_value=0, max_value=300),
       st.integers(min_value=0, max_value=300))
def test_parity_criterion_matches_binomial(m, n):
    odd = math.comb(m + n, m) % 2 == 1
    assert pascal_parity_member(m, n) == odd


@settings(max_examples=30)
@given(st.lists(st.integers(min_value=1, max_value=4096),
                min_size=1, max_size=60),
       st.integers(min_value=1, max_value=12))
def test_profile_counts_partition(values, n_max):
    A = finite_integer_set(values)
    prof = block_profile(A, "value", n_max)
    elems = sorted(set(values))
    for n in range(n_max + 1):
        assert prof.blocks[n] == sum(1 for v in elems
                                     if 2 ** n <= v < 2 ** (n + 1))
        assert prof.cumulative[n] == sum(1 for v in elems if v <= 2 ** n)


@settings(max_examples=30)
@given(st.lists(st.integers(min_value=1, max_value=1000),
                min_size=1, max_size=40),
       st.floats(min_value=0.0, max_value=3.0))
def test_zeta_partial_matches_direct_sum(values, s):
    A = finite_integer_set(values)
    got = zeta_partial(A, s, 1000)
    want = sum(v ** -s for v in set(values))
    assert abs(got - want) <= 1e-9 * max(1.0, want)
