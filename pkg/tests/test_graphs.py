"""Matching and forest polynomials against enumeration oracles."""

from fractions import Fraction

import pytest

from stablekit.errors import PreconditionError, SizeGuardError
from stablekit.graphs import (
    Graph,
    enumerate_matchings,
    enumerate_rooted_forests,
    forest_polynomial,
    matching_polynomial,
    spanning_trees,
)
from stablekit.linalg import RationalMatrix
from stablekit.realroot import newton_ulc_check
from stablekit.unipoly import UniPolyQ, is_real_rooted

from conftest import rand_fraction


def random_weights(rng, n, zero_prob=0.3):
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() > zero_prob:
                w[i][j] = w[j][i] = Fraction(rng.randint(1, 5), rng.randint(1, 3))
    return RationalMatrix(w)


class TestMatchingPolynomial:
    def test_triangle(self):
        w = RationalMatrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        counts, q = matching_polynomial(w)
        assert counts == [1, 3]
        assert q == UniPolyQ((0, -3, 0, 1))

    def test_single_weighted_edge(self):
        w = Fraction(7, 3)
        counts, q = matching_polynomial(RationalMatrix([[0, w], [w, 0]]))
        assert counts == [1, w]
        assert q == UniPolyQ((-w, 0, 1))

    def test_empty_graph(self):
        counts, q = matching_polynomial(RationalMatrix.zeros(4))
        assert counts == [1]
        assert q == UniPolyQ((0, 0, 0, 0, 1))

    def test_negative_weight_rejected(self):
        with pytest.raises(PreconditionError):
            matching_polynomial(RationalMatrix([[0, -1], [-1, 0]]))

    def test_size_guard(self):
        with pytest.raises(SizeGuardError):
            matching_polynomial(RationalMatrix.zeros(17))

    def test_recursion_equals_enumeration(self, rng):
        for _ in range(25):
            n = rng.randint(2, 7)
            w = random_weights(rng, n)
            counts, _ = matching_polynomial(w)
            assert counts == enumerate_matchings(w)

    def test_signed_generator_real_rooted_and_counts_ulc(self, rng):
        for n in range(2, 9):
            w = random_weights(rng, n, zero_prob=0.0)
            counts, q = matching_polynomial(w)
            assert is_real_rooted(q)
            assert newton_ulc_check(counts).passed


class TestForestPolynomial:
    def test_single_edge(self):
        g = Graph(2, [(0, 1, Fraction(1))])
        assert forest_polynomial(g) == UniPolyQ((0, 2, 1))

    def test_empty_two_vertices(self):
        assert forest_polynomial(Graph(2, [])) == UniPolyQ((0, 0, 1))

    def test_triangle(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        assert forest_polynomial(g) == UniPolyQ((0, 9, 6, 1))

    def test_multigraph_against_enumeration(self, rng):
        for _ in range(20):
            n = rng.randint(2, 5)
            edges = []
            for i in range(n):
                for j in range(i + 1, n):
                    m = rng.randint(0, 2)
                    if m:
                        edges.append((i, j, Fraction(m)))
            g = Graph(n, edges)
            f = forest_polynomial(g)
            assert list(f.coeffs) == enumerate_rooted_forests(g)[: f.degree + 1]

    def test_real_rooted(self, rng):
        for _ in range(10):
            n = rng.randint(2, 6)
            edges = [
                (i, j, Fraction(rng.randint(0, 2)))
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.7
            ]
            edges = [(i, j, w) for i, j, w in edges if w]
            f = forest_polynomial(Graph(n, edges))
            assert is_real_rooted(f)


class TestSpanningTrees:
    def test_triangle_uniform(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        assert len(spanning_trees(g)) == 3

    def test_tree_single(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1)])
        trees = spanning_trees(g)
        assert trees == [((0, 1), Fraction(1))]

    def test_disconnected_rejected(self):
        with pytest.raises(PreconditionError):
            spanning_trees(Graph(3, [(0, 1, 1)]))
