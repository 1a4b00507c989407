"""Sturm-chain real-root counting on exact univariate polynomials."""

from fractions import Fraction

import pytest

from stablekit.errors import PreconditionError
from stablekit.unipoly import (
    SturmChain,
    UniPolyQ,
    count_real_roots,
    is_real_rooted,
    isolate_real_roots,
    poly_gcd,
    roots_all_nonnegative,
    roots_all_nonpositive,
    square_free_part,
)

from conftest import random_non_real_rooted, random_real_rooted


class TestCounting:
    def test_no_real_roots(self):
        assert count_real_roots(UniPolyQ((1, 0, 1))) == 0

    def test_two_real_roots(self):
        assert count_real_roots(UniPolyQ((-1, 0, 1))) == 2

    def test_three_real_roots(self):
        assert count_real_roots(UniPolyQ((0, -3, 0, 1))) == 3

    def test_interval_counts(self):
        f = UniPolyQ((0, -3, 0, 1))  # roots 0, +-sqrt(3)
        assert count_real_roots(f, lo=0, hi=2, include_lo=True) == 2
        assert count_real_roots(f, lo=0, hi=2) == 1
        assert count_real_roots(f, hi=0) == 1
        assert count_real_roots(f, hi=0, include_hi=True) == 2

    def test_multiplicities_count_once(self):
        f = UniPolyQ((1, 2, 1))  # (1+z)^2
        assert count_real_roots(f) == 1

    def test_zero_poly_rejected(self):
        with pytest.raises(PreconditionError):
            count_real_roots(UniPolyQ())

    def test_endpoint_equal_bounds(self):
        f = UniPolyQ((0, 1))
        assert count_real_roots(f, lo=0, hi=0, include_lo=True, include_hi=True) == 1
        assert count_real_roots(f, lo=0, hi=0) == 0


class TestRealRooted:
    def test_cube(self):
        assert is_real_rooted(UniPolyQ((1, 3, 3, 1)))

    def test_elliptic(self):
        assert not is_real_rooted(UniPolyQ((1, 0, 1)))

    def test_double_root(self):
        assert is_real_rooted(UniPolyQ((1, 2, 1)))

    def test_random_products(self, rng):
        for _ in range(100):
            assert is_real_rooted(random_real_rooted(rng, rng.randint(1, 10)))

    def test_random_non_real(self, rng):
        for _ in range(100):
            assert not is_real_rooted(random_non_real_rooted(rng, rng.randint(2, 8)))


class TestSignConstraints:
    def test_negative_roots(self):
        assert roots_all_nonpositive(UniPolyQ((2, 3, 1)))

    def test_mixed_signs(self):
        assert not roots_all_nonpositive(UniPolyQ((-1, 0, 1)))

    def test_boundary_zero_root(self):
        f = UniPolyQ((0, 0, 1))
        assert roots_all_nonpositive(f)
        assert not roots_all_nonpositive(f, strict=True)
        assert roots_all_nonnegative(f)

    def test_requires_real_rooted(self):
        with pytest.raises(PreconditionError):
            roots_all_nonpositive(UniPolyQ((1, 0, 1)))


class TestChainStructure:
    def test_chain_length_bound(self, rng):
        for _ in range(20):
            f = square_free_part(random_real_rooted(rng, rng.randint(1, 8)))
            chain = SturmChain(f)
            assert len(chain.chain) <= f.degree + 1

    def test_gcd_divides(self, rng):
        for _ in range(20):
            f = random_real_rooted(rng, 4)
            g = random_real_rooted(rng, 3)
            h = poly_gcd(f, g)
            assert (f % h).is_zero and (g % h).is_zero


class TestIsolation:
    def test_disjoint_and_complete(self, rng):
        for _ in range(40):
            f = random_real_rooted(rng, rng.randint(1, 8))
            g = square_free_part(f)
            intervals = isolate_real_roots(f)
            assert len(intervals) == count_real_roots(f)
            for (a1, b1), (a2, b2) in zip(intervals, intervals[1:]):
                assert b1 <= a2
            for a, b in intervals:
                assert count_real_roots(g, lo=a, hi=b) == 1
