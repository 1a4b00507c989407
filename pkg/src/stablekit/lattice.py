"""Boolean-lattice utilities: up-set enumeration and exact coupling
feasibility via integer max-flow.

Measures are scaled to a common integer denominator, so feasibility is
an exact integer max-flow question; an infeasible domination instance is
converted to a violating up-set certificate via the min cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

from .errors import PreconditionError


# -- up-sets -----------------------------------------------------------------


@lru_cache(maxsize=None)
def upset_masks(k: int) -> tuple[int, ...]:
    """All upward-closed subsets of {0,1}^k, each encoded as a bitmask over
    the 2^k states (bit s set iff state s belongs to the up-set).

    Built by the standard recursion: an up-set of B_k splits over the last
    coordinate into up-sets U0 <= U1 of B_{k-1}.
    """
    if k == 0:
        return (0, 1)
    prev = upset_masks(k - 1)
    half = 1 << (1 << (k - 1))  # shift for the x_{k-1}=1 block
    out = []
    for u1 in prev:
        for u0 in prev:
            if u0 & ~u1 == 0:
                out.append(u0 | u1 * half)
    return tuple(out)


@lru_cache(maxsize=None)
def upset_atom_lists(k: int) -> tuple[tuple[int, ...], ...]:
    """The same up-sets as `upset_masks`, as tuples of member states."""
    return tuple(
        tuple(s for s in range(1 << k) if (m >> s) & 1) for m in upset_masks(k)
    )


def is_up_set(states: set[int], d: int) -> bool:
    return all(
        (s | (1 << j)) in states
        for s in states
        for j in range(d)
        if not (s >> j) & 1
    )


def up_closure(states: set[int], d: int) -> set[int]:
    out = set(states)
    frontier = list(states)
    while frontier:
        s = frontier.pop()
        for j in range(d):
            t = s | (1 << j)
            if t not in out:
                out.add(t)
                frontier.append(t)
    return out


def down_closure(states: set[int], d: int) -> set[int]:
    out = set(states)
    frontier = list(states)
    while frontier:
        s = frontier.pop()
        for j in range(d):
            if (s >> j) & 1:
                t = s & ~(1 << j)
                if t not in out:
                    out.add(t)
                    frontier.append(t)
    return out


# -- max-flow ----------------------------------------------------------------


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.head: list[list[int]] = [[] for _ in range(n)]

    def add_edge(self, u: int, v: int, c: int) -> int:
        idx = len(self.to)
        self.head[u].append(idx)
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(idx + 1)
        self.to.append(u)
        self.cap.append(0)
        return idx

    def maxflow(self, s: int, t: int) -> int:
        flow = 0
        inf = sum(self.cap) + 1  # exceeds any feasible flow; capacities are bigints
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                for e in self.head[u]:
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u: int, f: int) -> int:
                if u == t:
                    return f
                while it[u] < len(self.head[u]):
                    e = self.head[u][it[u]]
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(f, self.cap[e]))
                        if got:
                            self.cap[e] -= got
                            self.cap[e ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, inf)
                if not pushed:
                    break
                flow += pushed

    def reachable_from(self, s: int) -> set[int]:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


# -- coupling ----------------------------------------------------------------

RELATION_GE = "ge"
RELATION_COVER = "cover"


@dataclass(frozen=True)
class CouplingProblem:
    """Is there a coupling of `source` (first marginal) and `target`
    (second marginal) supported on the allowed pairs?

    relation "ge": pairs (x, y) with x >= y coordinatewise (stochastic
    domination of target by source); "cover": x == y or x covers y.
    """

    source: "object"  # CubeMeasure, kept untyped to avoid an import cycle
    target: "object"
    relation: str

    def __post_init__(self):
        if self.relation not in (RELATION_GE, RELATION_COVER):
            raise PreconditionError(f"unknown relation {self.relation!r}")
        if self.source.d != self.target.d:
            raise PreconditionError("coupling requires measures on the same cube")


@dataclass(frozen=True)
class CouplingResult:
    feasible: bool
    coupling: Optional[dict]  # (x_mask, y_mask) -> Fraction
    certificate: Optional[dict]

    def to_json(self) -> dict:
        return {
            "feasible": self.feasible,
            "coupling": (
                None
                if self.coupling is None
                else {f"{x},{y}": str(q) for (x, y), q in sorted(self.coupling.items())}
            ),
            "certificate": self.certificate,
        }


def _pair_allowed(relation: str, x: int, y: int) -> bool:
    if relation == RELATION_GE:
        return x & y == y
    return x == y or (x & y == y and (x ^ y).bit_count() == 1)


def coupling_check(problem: CouplingProblem) -> CouplingResult:
    """Exact feasibility of the coupling problem by integer max-flow.

    Feasible: returns an explicit coupling.  Infeasible with the "ge"
    relation: returns an up-set A with source(A) < target(A); with the
    cover relation, the source side of a certifying cut.
    """
    mu, nu = problem.source, problem.target
    d = mu.d
    size = 1 << d
    den = 1
    for q in list(mu.probs) + list(nu.probs):
        den = den * q.denominator // gcd(den, q.denominator)
    mu_int = [int(q * den) for q in mu.probs]
    nu_int = [int(q * den) for q in nu.probs]

    # nodes: 0 = source, 1..size = x, size+1..2*size = y, 2*size+1 = sink
    s, t = 0, 2 * size + 1
    net = _Dinic(2 * size + 2)
    mid_edges: dict[int, tuple[int, int]] = {}
    for x in range(size):
        if mu_int[x]:
            net.add_edge(s, 1 + x, mu_int[x])
    for y in range(size):
        if nu_int[y]:
            net.add_edge(size + 1 + y, t, nu_int[y])
    for x in range(size):
        if not mu_int[x]:
            continue
        for y in range(size):
            if nu_int[y] and _pair_allowed(problem.relation, x, y):
                e = net.add_edge(1 + x, size + 1 + y, den + 1)
                mid_edges[e] = (x, y)

    flow = net.maxflow(s, t)
    if flow == den:
        coupling = {}
        for e, (x, y) in mid_edges.items():
            sent = net.cap[e ^ 1]  # reverse capacity = flow pushed
            if sent:
                coupling[(x, y)] = Fraction(sent, den)
        return CouplingResult(True, coupling, None)

    cut_side = net.reachable_from(s)
    x_side = [x for x in range(size) if (1 + x) in cut_side and mu_int[x]]
    if problem.relation == RELATION_GE:
        # complement of the down-closure of the cut's x-side is an up-set A
        # with mu(A) < nu(A)
        dn = down_closure(set(x_side), d)
        a = sorted(set(range(size)) - dn)
        mu_a = sum((mu.probs[x] for x in a), Fraction(0))
        nu_a = sum((nu.probs[y] for y in a), Fraction(0))
        assert mu_a < nu_a, "min-cut certificate failed to violate domination"
        certificate = {
            "upset": a,
            "source_mass": str(mu_a),
            "target_mass": str(nu_a),
        }
    else:
        certificate = {"cut_source_states": sorted(x_side)}
    return CouplingResult(False, None, certificate)
