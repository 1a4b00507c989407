"""Coefficient inequalities, PF sequences, multiplier machinery."""

import math
from fractions import Fraction

import pytest

from stablekit.errors import PreconditionError
from stablekit.realroot import (
    apply_multiplier,
    basis_transform,
    gurvits_a1_bound_check,
    interlace_check,
    newton_ulc_check,
    pf_check,
    polya_schur_refute,
)
from stablekit.unipoly import UniPolyQ, is_real_rooted

from conftest import (
    random_non_real_rooted,
    random_real_rooted,
    random_strongly_non_real,
)


class TestNewtonUlc:
    def test_binomials_pass_with_equality(self):
        assert newton_ulc_check([1, 3, 3, 1]).passed
        assert newton_ulc_check([1, 4, 6, 4, 1]).passed

    def test_internal_zero_violation(self):
        rep = newton_ulc_check([1, 0, 1])
        assert not rep.passed and rep.first_violation == 1
        assert not rep.no_internal_zeros

    def test_internal_zeros_without_inequality_violation(self):
        rep = newton_ulc_check([1, 0, 0, 1])
        assert not rep.passed and rep.first_violation is None
        assert not rep.no_internal_zeros

    def test_short_input_vacuous(self):
        assert newton_ulc_check([]).passed
        assert newton_ulc_check([2, 5]).passed

    def test_negative_rejected(self):
        with pytest.raises(PreconditionError):
            newton_ulc_check([1, -1, 1])

    def test_real_rooted_products_pass(self, rng):
        for _ in range(500):
            f = random_real_rooted(rng, rng.randint(2, 10))
            assert is_real_rooted(f)
            assert newton_ulc_check(f.coeffs).passed


class TestPFCheck:
    def test_squared_binomial(self):
        assert pf_check([1, 2, 1], 3)

    def test_internal_zero_fails(self):
        assert not pf_check([1, 0, 1], 2)

    def test_singleton(self):
        assert pf_check([1], 2)

    def test_edrei_consistency(self, rng):
        # PF of the coefficient sequence <-> real-rootedness of the
        # generating polynomial, on stable and unstable instances.  The
        # unstable side keeps the complex pair well off the real axis:
        # the refuting minor size grows like pi / root-angle, so minors
        # up to 4 cannot refute near-real-rooted sequences.
        for _ in range(200):
            f = random_real_rooted(rng, rng.randint(1, 5))
            assert pf_check(f.coeffs, 4), f
        for _ in range(200):
            f = random_strongly_non_real(rng, rng.randint(2, 5))
            assert not is_real_rooted(f)
            assert not pf_check(f.coeffs, 4), f

    def test_near_real_pair_needs_larger_minors(self):
        # z^2 + 3z + 13/4 has roots (-3 +- 2i)/2; the first negative
        # Toeplitz minor has size 5, so max_minor=4 cannot refute
        seq = [Fraction(13, 4), Fraction(3), Fraction(1)]
        assert not is_real_rooted(UniPolyQ(seq))
        assert pf_check(seq, 4)
        assert not pf_check(seq, 5)


class TestGurvitsA1:
    def test_binomial_equality_case(self):
        f = UniPolyQ([Fraction(1, 8), Fraction(3, 8), Fraction(3, 8), Fraction(1, 8)])
        res = gurvits_a1_bound_check(f)
        assert res.passed
        assert abs(res.a1 - res.bound) < 1e-6  # equality within tolerance

    def test_degree_one(self):
        res = gurvits_a1_bound_check(UniPolyQ((0, 1)))
        assert res.passed and abs(res.c_upper - 1.0) < 1e-9

    def test_squared_half(self):
        f = UniPolyQ([Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)])
        res = gurvits_a1_bound_check(f)
        assert res.passed
        assert abs(res.c_upper - 1.0) < 1e-6
        assert abs(res.t_min - 1.0) < 1e-3

    def test_rejects_negative_coefficients(self):
        with pytest.raises(PreconditionError):
            gurvits_a1_bound_check(UniPolyQ((2, -1)))

    def test_random_pgfs(self, rng):
        for _ in range(50):
            f = random_real_rooted(rng, rng.randint(1, 6))
            f = f * (1 / f(1))
            assert gurvits_a1_bound_check(f).passed


class TestApplyMultiplier:
    def test_powers_give_dilation(self):
        f = UniPolyQ((1, 2, 1))
        b = Fraction(3)
        got = apply_multiplier([b**0, b**1, b**2], f)
        assert got == UniPolyQ((1, 6, 9))  # f(3z)

    def test_laguerre_factorials(self):
        f = UniPolyQ((1, 2, 1))
        got = apply_multiplier([Fraction(1), Fraction(1), Fraction(1, 2)], f)
        assert got == UniPolyQ((1, 2, Fraction(1, 2)))
        assert is_real_rooted(got)  # discriminant 4 - 2 > 0

    def test_identity(self):
        f = UniPolyQ((1, 5, 7))
        assert apply_multiplier([1, 1, 1], f) == f

    def test_too_short_rejected(self):
        with pytest.raises(PreconditionError):
            apply_multiplier([1], UniPolyQ((1, 1)))

    def test_factorial_sequence_preserves_real_rootedness(self, rng):
        lam = [Fraction(1, math.factorial(k)) for k in range(12)]
        for _ in range(100):
            f = random_real_rooted(rng, rng.randint(1, 8))
            assert is_real_rooted(apply_multiplier(lam, f))


class TestPolyaSchur:
    def test_alternating_refuted(self):
        out = polya_schur_refute([1, 0, 1], 2)
        assert out.refuted and out.at_degree == 2

    def test_factorials_not_refuted(self):
        lam = [Fraction(1, math.factorial(k)) for k in range(9)]
        assert not polya_schur_refute(lam, 8).refuted

    def test_truncation_not_refuted(self):
        assert not polya_schur_refute([1, 1], 6).refuted


class TestInterlace:
    def test_basic(self):
        assert interlace_check(UniPolyQ((-1, 0, 1)), UniPolyQ((0, 1)))

    def test_root_outside_gap(self):
        assert not interlace_check(UniPolyQ((-4, 0, 1)), UniPolyQ((-3, 1)))

    def test_hermite(self):
        h3 = UniPolyQ((0, -12, 0, 8))
        h2 = UniPolyQ((-2, 0, 4))
        assert interlace_check(h3, h2)

    def test_derivative_interlaces(self, rng):
        for _ in range(30):
            f = random_real_rooted(rng, rng.randint(2, 6))
            assert interlace_check(f, f.derivative())

    def test_degree_mismatch_rejected(self):
        with pytest.raises(PreconditionError):
            interlace_check(UniPolyQ((-1, 0, 1)), UniPolyQ((1,)) * UniPolyQ((-1, 0, 1)))


class TestBasisTransform:
    def test_falling_square(self):
        assert basis_transform(UniPolyQ((0, 0, 1)), "falling") == UniPolyQ((0, -1, 1))

    def test_rising_square(self):
        assert basis_transform(UniPolyQ((0, 0, 1)), "rising") == UniPolyQ((0, 1, 1))

    def test_constant_unchanged(self):
        assert basis_transform(UniPolyQ((5,)), "falling") == UniPolyQ((5,))

    def test_expansion_matches_direct_product(self, rng):
        for _ in range(40):
            f = random_real_rooted(rng, rng.randint(1, 6))
            for mode, step in (("falling", -1), ("rising", 1)):
                expected = UniPolyQ()
                basis = UniPolyQ.one()
                for k, c in enumerate(f.coeffs):
                    if k >= 1:
                        basis = basis * UniPolyQ((step * (k - 1), 1))
                    expected = expected + basis * c
                assert basis_transform(f, mode) == expected

    def test_falling_transform_can_lose_real_roots(self):
        # real-rooted with nonnegative coefficients, roots 0, -1/3, -2, yet
        # the falling-factorial expansion has a complex pair: preservation
        # needs root-location hypotheses beyond nonnegativity, so no
        # preservation invariant is asserted for this operation
        f = UniPolyQ((0, Fraction(4, 3), Fraction(14, 3), 2))
        assert is_real_rooted(f)
        g = basis_transform(f, "falling")
        assert g == UniPolyQ((0, Fraction(2, 3), Fraction(-4, 3), 2))
        assert not is_real_rooted(g)
