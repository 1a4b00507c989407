"""Shared random generators for the test suite.

Everything is seeded: each helper takes an explicit random.Random so tests
are reproducible run to run.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from stablekit.linalg import RationalMatrix
from stablekit.srmeasure import (
    CubeMeasure,
    conditioned_bernoulli,
    determinantal,
    spanning_tree_measure,
)
from stablekit.graphs import Graph
from stablekit.unipoly import UniPolyQ


def rand_fraction(
    rng: random.Random, lo: int = -4, hi: int = 4, max_den: int = 4
) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_real_rooted(rng: random.Random, deg: int) -> UniPolyQ:
    """Product of linear factors a + b z with a, b >= 0 rational: real
    stable with nonnegative coefficients and rational roots."""
    f = UniPolyQ((Fraction(rng.randint(1, 4), rng.randint(1, 3)),))
    for _ in range(deg):
        a = Fraction(rng.randint(0, 4), rng.randint(1, 3))
        b = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        f = f * UniPolyQ((a, b))
    return f


def random_non_real_rooted(rng: random.Random, deg: int) -> UniPolyQ:
    """Positive-coefficient polynomial with a verified non-real root pair:
    a random stable factor times z^2 + bz + c with b^2 < 4c."""
    b = Fraction(rng.randint(0, 3), rng.randint(1, 2))
    c = b * b / 4 + Fraction(rng.randint(1, 4), rng.randint(1, 3))
    f = UniPolyQ((c, b, 1))
    if deg > 2:
        f = f * random_real_rooted(rng, deg - 2)
    return f


def random_strongly_non_real(rng: random.Random, deg: int) -> UniPolyQ:
    """Non-real-rooted with the complex pair well away from the real axis
    (b^2 <= c), so small Toeplitz minors already refute the PF property;
    near-real pairs need minors of size ~ pi / root-angle."""
    b = Fraction(rng.randint(0, 1), rng.randint(1, 2))
    c = b * b + Fraction(rng.randint(1, 4), rng.randint(1, 2))
    f = UniPolyQ((c, b, 1))
    for _ in range(max(0, deg - 2)):
        f = f * UniPolyQ(
            (
                Fraction(rng.randint(1, 4), rng.randint(1, 3)),
                Fraction(rng.randint(1, 4), rng.randint(1, 3)),
            )
        )
    return f


def random_doubly_stochastic(rng: random.Random, n: int) -> RationalMatrix:
    from stablekit.permbounds import sinkhorn_doubly_stochastic

    seed = [
        [Fraction(rng.randint(1, 9), rng.randint(1, 3)) for _ in range(n)]
        for _ in range(n)
    ]
    return sinkhorn_doubly_stochastic(seed)


def random_kernel(rng: random.Random, d: int) -> RationalMatrix:
    """Symmetric PSD kernel with spectrum in [0, 1): M^T M scaled below
    the identity via the trace bound."""
    m = RationalMatrix(
        [
            [Fraction(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(d)]
            for _ in range(d)
        ]
    )
    g = m.transpose() * m
    return g * (1 / (1 + g.trace()))


def random_psd(rng: random.Random, n: int, spread: int = 2) -> RationalMatrix:
    m = RationalMatrix(
        [
            [Fraction(rng.randint(-spread, spread), rng.randint(1, 2)) for _ in range(n)]
            for _ in range(n)
        ]
    )
    return m.transpose() * m


def random_measure(rng: random.Random, d: int) -> CubeMeasure:
    raw = [Fraction(rng.randint(0, 6)) for _ in range(1 << d)]
    if not sum(raw):
        raw[rng.randrange(1 << d)] = Fraction(1)
    total = sum(raw)
    return CubeMeasure(d, [x / total for x in raw])


def sr_generator_measures(rng: random.Random, max_d: int = 6) -> list[CubeMeasure]:
    """A reproducible batch of certified strong-Rayleigh measures from the
    three generator families."""
    out = []
    for d in range(2, max_d + 1):
        out.append(determinantal(random_kernel(rng, d)))
    for d in (3, max_d):
        ps = [Fraction(rng.randint(1, 3), 4) for _ in range(d)]
        out.append(conditioned_bernoulli(ps, rng.randint(1, d - 1)))
    triangle = Graph(3, [(0, 1, Fraction(1)), (1, 2, Fraction(2)), (0, 2, Fraction(1))])
    out.append(spanning_tree_measure(triangle))
    k4 = Graph(
        4,
        [
            (0, 1, Fraction(1)),
            (0, 2, Fraction(1)),
            (0, 3, Fraction(2)),
            (1, 2, Fraction(1)),
            (1, 3, Fraction(1)),
            (2, 3, Fraction(3)),
        ],
    )
    out.append(spanning_tree_measure(k4))
    return out


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
