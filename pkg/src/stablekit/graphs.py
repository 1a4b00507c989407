"""Combinatorial generating polynomials on small graphs, computed exactly.

`matching_polynomial` works on weighted complete graphs via a
vertex-subset recursion with bitmask memoization; `forest_polynomial`
uses the degree/adjacency determinant identity.  Both come with direct
enumeration counterparts used as test oracles.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError, SizeGuardError
from .linalg import RationalMatrix
from .unipoly import UniPolyQ


def _check_weights(weights: RationalMatrix) -> int:
    if not weights.is_square():
        raise PreconditionError("weight matrix must be square")
    n = weights.n
    for i in range(n):
        if weights[i, i] != 0:
            raise PreconditionError("weight matrix must have zero diagonal")
        for j in range(n):
            if weights[i, j] != weights[j, i]:
                raise PreconditionError("weight matrix must be symmetric")
            if weights[i, j] < 0:
                raise PreconditionError("negative weight")
    return n


def matching_polynomial(
    weights: RationalMatrix,
) -> tuple[list[Fraction], UniPolyQ]:
    """Weighted matching counts of K_n by size, and the signed generator
    Q_n(z) = sum_j (-1)^j a_j z^(n-2j).

    a_j is the total weight of j-edge matchings (a_0 = 1); computed by
    deleting a vertex or one of its incident edges, memoized on the
    surviving-vertex bitmask.
    """
    n = _check_weights(weights)
    if n > 16:
        raise SizeGuardError("matching_polynomial limited to n <= 16")

    cache: dict[int, list[Fraction]] = {}

    def counts(mask: int) -> list[Fraction]:
        if mask == 0:
            return [Fraction(1)]
        got = cache.get(mask)
        if got is not None:
            return got
        u = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << u)
        out = list(counts(rest)) + [Fraction(0)]
        v = rest
        while v:
            w = (v & -v).bit_length() - 1
            v &= v - 1
            wt = weights[u, w]
            if wt:
                sub = counts(rest & ~(1 << w))
                for j, c in enumerate(sub):
                    out[j + 1] += wt * c
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        cache[mask] = out
        return out

    a = counts((1 << n) - 1)
    q = [Fraction(0)] * (n + 1)
    for j, c in enumerate(a):
        q[n - 2 * j] = c * (-1) ** j
    return a, UniPolyQ(q)


def enumerate_matchings(weights: RationalMatrix) -> list[Fraction]:
    """Brute-force matching counts by size (test oracle, n <= 8)."""
    n = _check_weights(weights)
    if n > 8:
        raise SizeGuardError("enumeration oracle limited to n <= 8")
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if weights[i, j] != 0
    ]
    out = [Fraction(0)] * (n // 2 + 1)
    out[0] = Fraction(1)
    for size in range(1, n // 2 + 1):
        for combo in itertools.combinations(edges, size):
            used = set()
            ok = True
            w = Fraction(1)
            for i, j in combo:
                if i in used or j in used:
                    ok = False
                    break
                used.update((i, j))
                w *= weights[i, j]
            if ok:
                out[size] += w
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


class Graph:
    """Multigraph on vertices 0..n-1 with rational edge weights.

    For `forest_polynomial` the weight of an edge is its multiplicity and
    must be a nonnegative integer; for spanning-tree measures weights are
    arbitrary nonnegative rationals.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges: Sequence[tuple[int, int, Fraction]]):
        if n < 1:
            raise PreconditionError("graph needs at least one vertex")
        self.n = n
        es = []
        for i, j, w in edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise PreconditionError(f"bad edge ({i}, {j})")
            w = w if isinstance(w, Fraction) else Fraction(w)
            if w < 0:
                raise PreconditionError("negative edge weight")
            es.append((i, j, w))
        self.edges = tuple(es)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[i, j, str(w)] for i, j, w in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls(
            int(data["n"]),
            [(int(i), int(j), Fraction(w)) for i, j, w in data["edges"]],
        )

    def is_connected(self) -> bool:
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j, _ in self.edges:
            parent[find(i)] = find(j)
        return len({find(v) for v in range(self.n)}) == 1


def forest_polynomial(graph: Graph) -> UniPolyQ:
    """det(A + z I) where A_ii = deg(i) and A_ij = -(number of i-j edges).

    Coefficient of z^k is the number of rooted spanning forests with k
    components (forests weighted by the product of component sizes).
    Edge weights must be nonnegative integer multiplicities.
    """
    if graph.n > 12:
        raise SizeGuardError("forest_polynomial limited to n <= 12")
    n = graph.n
    a = [[Fraction(0)] * n for _ in range(n)]
    for i, j, w in graph.edges:
        if w.denominator != 1:
            raise PreconditionError("edge multiplicities must be integers")
        a[i][j] -= w
        a[j][i] -= w
        a[i][i] += w
        a[j][j] += w
    coeffs = RationalMatrix(a).charlike_poly()
    return UniPolyQ(coeffs)


def enumerate_rooted_forests(graph: Graph) -> list[Fraction]:
    """Brute-force rooted-forest counts by component number (oracle, n <= 5)."""
    if graph.n > 5:
        raise SizeGuardError("enumeration oracle limited to n <= 5")
    n = graph.n
    expanded = []
    for i, j, w in graph.edges:
        expanded.extend([(i, j)] * int(w))
    out = [Fraction(0)] * (n + 1)
    for size in range(len(expanded) + 1):
        for combo in itertools.combinations(range(len(expanded)), size):
            parent = list(range(n))

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            acyclic = True
            for idx in combo:
                i, j = expanded[idx]
                ri, rj = find(i), find(j)
                if ri == rj:
                    acyclic = False
                    break
                parent[ri] = rj
            if not acyclic:
                continue
            comps: dict[int, int] = {}
            for v in range(n):
                r = find(v)
                comps[r] = comps.get(r, 0) + 1
            gamma = Fraction(1)
            for c in comps.values():
                gamma *= c
            out[len(comps)] += gamma
    return out


def spanning_trees(graph: Graph) -> list[tuple[tuple[int, ...], Fraction]]:
    """All spanning trees as (edge-index tuple, weight) pairs; |E| <= 16."""
    m = len(graph.edges)
    if m > 16:
        raise SizeGuardError("spanning-tree enumeration limited to 16 edges")
    if not graph.is_connected():
        raise PreconditionError("graph is not connected")
    n = graph.n
    out = []
    for combo in itertools.combinations(range(m), n - 1):
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for idx in combo:
            i, j, _ = graph.edges[idx]
            ri, rj = find(i), find(j)
            if ri == rj:
                ok = False
                break
            parent[ri] = rj
        if ok:
            w = Fraction(1)
            for idx in combo:
                w *= graph.edges[idx][2]
            out.append((combo, w))
    return out
