import io
import math

import numpy as np
import pytest

from zdim import (BudgetExceededError, IntegerSet, ParseError, RangeError,
                  UsageError, all_integers, block_profile, count_range,
                  finite_integer_set, lattice_from_points, parse_set_stream,
                  perfect_powers, powers_of, primes, write_integer_set,
                  write_lattice_set, zeta_partial)


class TestIntegerSet:
    def test_elements_respect_bound(self):
        A = finite_integer_set([1, 5, 9, 30])
        assert list(A.elements(bound=9)) == [1, 5, 9]

    def test_budget_exhaustion_carries_partial_count(self):
        with pytest.raises(BudgetExceededError) as exc:
            list(all_integers().elements(budget=100))
        assert exc.value.partial == 100

    def test_membership_agrees_with_stream(self):
        A = perfect_powers(2)
        squares = set(A.elements(bound=500))
        for n in range(1, 500):
            assert A.contains(n) == (n in squares)

    def test_finite_set_rejects_nonpositive(self):
        with pytest.raises(RangeError):
            finite_integer_set([0, 3])

    def test_binary_length(self):
        assert IntegerSet.binary_length(1) == 1
        assert IntegerSet.binary_length(255) == 8
        assert IntegerSet.binary_length(256) == 9
        with pytest.raises(RangeError):
            IntegerSet.binary_length(0)


class TestCountRange:
    def test_exact_and_streaming_paths_agree(self):
        A = perfect_powers(2)
        B = IntegerSet(stream=A.stream, name="no-counter")
        for a, b in [(1, 100), (4, 4), (5, 8), (90, 121)]:
            assert count_range(A, a, b) == count_range(B, a, b)

    def test_bad_range(self):
        with pytest.raises(RangeError):
            count_range(all_integers(), 5, 4)
        with pytest.raises(RangeError):
            count_range(all_integers(), 0, 4)


class TestBlockProfile:
    def test_all_integers_blocks_are_powers_of_two(self):
        prof = block_profile(all_integers(), "value", 10)
        assert prof.blocks == tuple(2 ** n for n in range(11))
        assert prof.cumulative == tuple(2 ** n for n in range(11))

    def test_cumulative_is_closed_interval(self):
        # 2^n itself belongs to cumulative[n] but to block n, not n-1
        A = powers_of(2)
        prof = block_profile(A, "value", 6)
        assert prof.cumulative == tuple(n + 1 for n in range(7))
        assert prof.blocks == tuple([1] * 7)

    def test_streaming_matches_exact_count_path(self):
        A = perfect_powers(3)
        stream_only = IntegerSet(stream=A.stream, name="s")
        p1 = block_profile(A, "value", 15)
        p2 = block_profile(stream_only, "value", 15)
        assert p1.blocks == p2.blocks
        assert p1.cumulative == p2.cumulative

    def test_binary_length_blocks(self):
        prof = block_profile(all_integers(), "binary-length", 8)
        # 2^(k-1) integers have binary length k
        assert prof.blocks == (0,) + tuple(2 ** (k - 1) for k in range(1, 9))

    def test_lattice_norm_sandwich(self):
        pts = [(3, 4), (1, 1), (5, 12), (-2, 7)]
        S = lattice_from_points(pts, 2)
        for chunk in S.iter_chunks():
            for p in chunk:
                l1 = abs(int(p[0])) + abs(int(p[1]))
                l2 = math.hypot(*p)
                assert l1 / math.sqrt(2) <= l2 + 1e-12
                assert l2 <= l1 + 1e-12

    def test_lattice_profile_excludes_origin(self):
        S = lattice_from_points([(0, 0), (1, 0)], 2)
        prof = block_profile(S, "euclidean", 3)
        assert prof.total == 1

    def test_lattice_l1_and_euclidean_boundaries(self):
        # point at exact dyadic norm lands in cumulative[n] and block n
        S = lattice_from_points([(4, 0), (0, 3)], 2)
        prof = block_profile(S, "l1", 3)
        assert prof.cumulative[2] == 2  # both norms <= 4
        assert prof.blocks[2] == 1     # only (4,0) in [4,8)
        assert prof.blocks[1] == 1     # (0,3) in [2,4)

    def test_unknown_norm(self):
        with pytest.raises(UsageError):
            block_profile(all_integers(), "manhattan", 4)
        with pytest.raises(UsageError):
            block_profile(all_integers(), "l1", 4)

    def test_csv_schema(self):
        prof = block_profile(powers_of(2), "value", 3)
        text = prof.to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "n,block_count,cumulative_count"
        assert lines[1] == "0,1,1"
        assert len(lines) == 5


class TestZetaPartial:
    def test_known_value_basel_prefix(self):
        got = zeta_partial(all_integers(), 2.0, 10)
        want = sum(1.0 / n ** 2 for n in range(1, 11))
        assert got == pytest.approx(want, abs=1e-12)
        assert got.complete

    def test_budget_marks_incomplete(self):
        got = zeta_partial(all_integers(), 2.0, 10 ** 6, budget=1000)
        assert not got.complete
        assert got == pytest.approx(sum(1.0 / n ** 2 for n in range(1, 1001)),
                                    abs=1e-9)

    def test_lattice_l1_sum(self):
        S = lattice_from_points([(1, 0), (0, 2), (3, 3)], 2)
        got = zeta_partial(S, 1.0, 6, norm_kind="l1")
        assert got == pytest.approx(1.0 + 0.5 + 1.0 / 6.0, abs=1e-12)

    def test_lattice_euclidean_sum(self):
        S = lattice_from_points([(3, 4)], 2)
        got = zeta_partial(S, 2.0, 5, norm_kind="euclidean")
        assert got == pytest.approx(1.0 / 25.0, abs=1e-12)

    def test_rejects_binary_length(self):
        with pytest.raises(UsageError):
            zeta_partial(all_integers(), 1.0, 10, norm_kind="binary-length")


class TestSetFiles:
    def test_integer_roundtrip(self):
        A = perfect_powers(2)
        buf = io.StringIO()
        write_integer_set(A, buf, bound=100)
        B = parse_set_stream(buf.getvalue())
        assert list(B.elements()) == [n * n for n in range(1, 11)]

    def test_lattice_roundtrip(self):
        S = lattice_from_points([(1, 2), (-3, 4)], 2)
        buf = io.StringIO()
        write_lattice_set(S, buf)
        T = parse_set_stream(buf.getvalue())
        pts = sorted(tuple(p) for c in T.iter_chunks() for p in c)
        assert pts == [(-3, 4), (1, 2)]

    def test_monotonicity_enforced_with_line_number(self):
        with pytest.raises(ParseError) as exc:
            parse_set_stream("1\n5\n5\n")
        assert exc.value.line == 3

    def test_rejects_garbage(self):
        with pytest.raises(ParseError):
            parse_set_stream("1\ntwo\n")
        with pytest.raises(ParseError):
            parse_set_stream("0\n")
        with pytest.raises(ParseError):
            parse_set_stream("d=x\n")

    def test_lattice_arity_mismatch(self):
        with pytest.raises(ParseError) as exc:
            parse_set_stream("d=2\n1 2\n3\n")
        assert exc.value.line == 3

    def test_empty_file_is_empty_set(self):
        A = parse_set_stream("")
        assert list(A.elements()) == []


class TestPrimesSieve:
    def test_small_prime_counts(self):
        A = primes()
        assert list(A.elements(bound=30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        assert count_range(A, 1, 100) == 25
        assert count_range(A, 1, 1000) == 168

    def test_membership(self):
        A = primes()
        assert A.contains(7919)
        assert not A.contains(7917)
