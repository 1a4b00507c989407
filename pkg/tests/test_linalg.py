"""Exact matrix predicates, determinants and the PSD elimination test."""

from fractions import Fraction

import pytest

from stablekit.errors import PreconditionError
from stablekit.linalg import RationalMatrix

from conftest import rand_fraction, random_psd


class TestPredicates:
    def test_doubly_stochastic(self):
        j3 = RationalMatrix([[Fraction(1, 3)] * 3] * 3)
        assert j3.is_doubly_stochastic()
        assert not RationalMatrix([[1, 0], [1, 0]]).is_doubly_stochastic()

    def test_monotone_column(self):
        assert RationalMatrix([[1, 1], [0, 0]]).is_monotone_column()
        assert not RationalMatrix([[0, 1], [1, 0]]).is_monotone_column()

    def test_zero_one(self):
        assert RationalMatrix([[1, 0], [0, 1]]).is_zero_one()
        assert not RationalMatrix([[Fraction(1, 2), 0], [0, 1]]).is_zero_one()


class TestPsd:
    def test_psd_examples(self):
        assert RationalMatrix([[2, 1], [1, 2]]).is_psd()
        assert RationalMatrix([[1, 0], [0, 0]]).is_psd()
        assert RationalMatrix.zeros(3).is_psd()
        assert RationalMatrix(
            [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]]
        ).is_psd()

    def test_not_psd(self):
        assert not RationalMatrix([[0, 1], [1, 0]]).is_psd()
        assert not RationalMatrix([[-1]]).is_psd()
        assert not RationalMatrix([[1, 2], [2, 1]]).is_psd()

    def test_requires_symmetry(self):
        with pytest.raises(PreconditionError):
            RationalMatrix([[1, 2], [0, 1]]).is_psd()

    def test_gram_matrices_are_psd(self, rng):
        for _ in range(40):
            assert random_psd(rng, rng.randint(1, 5)).is_psd()

    def test_gram_minus_epsilon_fails(self, rng):
        # G - (lambda_min + eps) I is never PSD; use G - (trace+1) I
        for _ in range(20):
            n = rng.randint(1, 4)
            g = random_psd(rng, n)
            shifted = g + RationalMatrix.identity(n) * (-(g.trace() + 1))
            assert not shifted.is_psd()


class TestDeterminant:
    def test_laplacian_charpoly(self):
        k3 = RationalMatrix([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        assert k3.charlike_poly() == [0, 9, 6, 1]

    def test_det_multiplicative(self, rng):
        for _ in range(30):
            n = rng.randint(1, 4)
            a = RationalMatrix(
                [[rand_fraction(rng) for _ in range(n)] for _ in range(n)]
            )
            b = RationalMatrix(
                [[rand_fraction(rng) for _ in range(n)] for _ in range(n)]
            )
            assert (a * b).det() == a.det() * b.det()

    def test_charlike_matches_det_at_points(self, rng):
        for _ in range(20):
            n = rng.randint(1, 4)
            a = RationalMatrix(
                [[rand_fraction(rng) for _ in range(n)] for _ in range(n)]
            )
            coeffs = a.charlike_poly()
            z = rand_fraction(rng)
            direct = (a + RationalMatrix.identity(n) * z).det()
            assert sum(c * z**k for k, c in enumerate(coeffs)) == direct
