"""Measures on the Boolean cube with exact rational probabilities:
strong-Rayleigh generators, closure operations, and brute-force
verification of the negative-dependence consequences.

Tables are dense (2^d entries, d <= 20) and every audit verdict is exact.
The only floating point in this module is the matrix-exponential oracle
for the exclusion dynamics and the exp() evaluation that is immediately
rationalized when building Trotter steps.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import PreconditionError, SizeGuardError
from .graphs import Graph, spanning_trees
from .lattice import (
    RELATION_COVER,
    RELATION_GE,
    CouplingProblem,
    CouplingResult,
    coupling_check,
    upset_atom_lists,
)
from .linalg import RationalMatrix
from .polyq import PolyQ, homogenize, polarize, rat
from .realroot import NewtonReport, newton_ulc_check

MAX_D = 20


class CubeMeasure:
    """Probability measure on {0,1}^d stored as a dense table of Fractions.

    State masks use bit j for coordinate j.  Total mass must be exactly 1.
    """

    __slots__ = ("d", "probs")

    def __init__(self, d: int, probs: Sequence):
        if not 0 <= d <= MAX_D:
            raise SizeGuardError(f"dimension must be between 0 and {MAX_D}")
        ps = tuple(rat(p) for p in probs)
        if len(ps) != 1 << d:
            raise PreconditionError("probability table has wrong size")
        if any(p < 0 for p in ps):
            raise PreconditionError("negative probability")
        if sum(ps) != 1:
            raise PreconditionError("total mass must be exactly 1")
        self.d = d
        self.probs = ps

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_dict(cls, d: int, masses: dict) -> "CubeMeasure":
        table = [Fraction(0)] * (1 << d)
        for mask, p in masses.items():
            table[mask] += rat(p)
        return cls(d, table)

    @classmethod
    def point_mass(cls, d: int, mask: int) -> "CubeMeasure":
        return cls.from_dict(d, {mask: Fraction(1)})

    @classmethod
    def uniform_on(cls, d: int, masks: Sequence[int]) -> "CubeMeasure":
        w = Fraction(1, len(masks))
        return cls.from_dict(d, {m: w for m in masks})

    @classmethod
    def bernoulli_product(cls, ps: Sequence) -> "CubeMeasure":
        pr = [rat(p) for p in ps]
        d = len(pr)
        table = []
        for mask in range(1 << d):
            m = Fraction(1)
            for j in range(d):
                m *= pr[j] if (mask >> j) & 1 else 1 - pr[j]
            table.append(m)
        return cls(d, table)

    # -- queries ---------------------------------------------------------------

    def mass(self, mask: int) -> Fraction:
        return self.probs[mask]

    def support(self) -> list[int]:
        return [m for m, p in enumerate(self.probs) if p]

    def marginal(self, j: int) -> Fraction:
        """P(X_j = 1)."""
        return sum(
            (p for m, p in enumerate(self.probs) if (m >> j) & 1), Fraction(0)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CubeMeasure)
            and self.d == other.d
            and self.probs == other.probs
        )

    def __hash__(self) -> int:
        return hash((self.d, self.probs))

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "probs": {
                format(m, f"0{self.d}b")[::-1] if self.d else "": str(p)
                for m, p in enumerate(self.probs)
                if p
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "CubeMeasure":
        d = int(data["d"])
        masses: dict[int, Fraction] = {}
        for bits, p in data["probs"].items():
            if len(bits) != d or any(c not in "01" for c in bits):
                raise PreconditionError(f"bad state bitstring {bits!r}")
            mask = sum(1 << j for j, c in enumerate(bits) if c == "1")
            masses[mask] = masses.get(mask, Fraction(0)) + Fraction(p)
        return cls.from_dict(d, masses)

    def __repr__(self) -> str:
        body = ", ".join(
            f"{format(m, f'0{self.d}b')[::-1]}: {p}"
            for m, p in enumerate(self.probs)
            if p
        )
        return f"CubeMeasure(d={self.d}, {{{body}}})"


# -- generating polynomial bijection ------------------------------------------


def genpoly(mu: CubeMeasure) -> PolyQ:
    """Probability generating polynomial sum_w mu(w) z^w (multi-affine)."""
    terms = {}
    for mask, p in enumerate(mu.probs):
        if p:
            terms[tuple((mask >> j) & 1 for j in range(mu.d))] = p
    return PolyQ(mu.d, terms)


def from_genpoly(f: PolyQ) -> CubeMeasure:
    """Inverse of `genpoly`; requires multi-affine, nonnegative, f(1,..,1)=1."""
    if not f.is_multi_affine():
        raise PreconditionError("generating polynomial must be multi-affine")
    masses = {}
    total = Fraction(0)
    for exps, c in f.terms.items():
        if c < 0:
            raise PreconditionError("negative coefficient")
        mask = sum(1 << j for j, e in enumerate(exps) if e)
        masses[mask] = c
        total += c
    if total != 1:
        raise PreconditionError("coefficients must sum to exactly 1")
    return CubeMeasure.from_dict(f.d, masses)


# -- closure operations --------------------------------------------------------


def product(mu: CubeMeasure, nu: CubeMeasure) -> CubeMeasure:
    """Independent product on d_mu + d_nu coordinates."""
    d = mu.d + nu.d
    table = [Fraction(0)] * (1 << d)
    for a, pa in enumerate(mu.probs):
        if not pa:
            continue
        for b, pb in enumerate(nu.probs):
            if pb:
                table[a | (b << mu.d)] = pa * pb
    return CubeMeasure(d, table)


def project(mu: CubeMeasure, coords: Sequence[int]) -> CubeMeasure:
    """Marginal law of the listed coordinates (in the listed order)."""
    cs = list(coords)
    if len(set(cs)) != len(cs) or any(not 0 <= j < mu.d for j in cs):
        raise PreconditionError("bad coordinate subset")
    table = [Fraction(0)] * (1 << len(cs))
    for mask, p in enumerate(mu.probs):
        if p:
            new = sum(1 << i for i, j in enumerate(cs) if (mask >> j) & 1)
            table[new] += p
    return CubeMeasure(len(cs), table)


def condition_var(mu: CubeMeasure, j: int, value: int) -> CubeMeasure:
    """(mu | X_j = value) viewed as a measure on the remaining d-1 coordinates."""
    if not 0 <= j < mu.d:
        raise PreconditionError("index out of range")
    if value not in (0, 1):
        raise PreconditionError("value must be 0 or 1")
    z = sum(
        (p for m, p in enumerate(mu.probs) if (m >> j) & 1 == value), Fraction(0)
    )
    if z == 0:
        raise PreconditionError("conditioning on a null event")
    table = [Fraction(0)] * (1 << (mu.d - 1))
    for mask, p in enumerate(mu.probs):
        if p and (mask >> j) & 1 == value:
            low = mask & ((1 << j) - 1)
            high = (mask >> (j + 1)) << j
            table[low | high] += p / z
    return CubeMeasure(mu.d - 1, table)


def external_field(mu: CubeMeasure, lam: Sequence) -> CubeMeasure:
    """Reweight by prod_j lam_j^{x_j} and renormalize; lam_j > 0."""
    ls = [rat(x) for x in lam]
    if len(ls) != mu.d:
        raise PreconditionError("field length does not match d")
    if any(x <= 0 for x in ls):
        raise PreconditionError("external field must be strictly positive")
    weights = []
    for mask, p in enumerate(mu.probs):
        w = p
        for j in range(mu.d):
            if (mask >> j) & 1:
                w *= ls[j]
        weights.append(w)
    z = sum(weights)
    return CubeMeasure(mu.d, [w / z for w in weights])


def rank_rescale(mu: CubeMeasure, b: Sequence) -> CubeMeasure:
    """Reweight state x by b_{N(x)} where N is the coordinate sum, then
    renormalize.  b = indicator of {k} conditions on N = k; an indicator of
    {k, k+1} gives the two-level conditioning."""
    bs = [rat(x) for x in b]
    if len(bs) != mu.d + 1:
        raise PreconditionError("rank weight vector must have length d+1")
    if any(x < 0 for x in bs):
        raise PreconditionError("rank weights must be nonnegative")
    weights = [p * bs[mask.bit_count()] for mask, p in enumerate(mu.probs)]
    z = sum(weights)
    if z == 0:
        raise PreconditionError("rank rescaling has zero normalizer")
    return CubeMeasure(mu.d, [w / z for w in weights])


def sr_preserving_rank_weights(b: Sequence) -> bool:
    """Gate for claiming SR preservation under `rank_rescale`: nonzero
    entries form an interval and the sequence passes the ULC check."""
    report = newton_ulc_check(b)
    return report.no_internal_zeros and report.passed


def partial_symmetrize(mu: CubeMeasure, i: int, j: int, theta) -> CubeMeasure:
    """With probability theta, transpose coordinates i and j."""
    th = rat(theta)
    if not 0 <= th <= 1:
        raise PreconditionError("theta must lie in [0, 1]")
    if not (0 <= i < mu.d and 0 <= j < mu.d) or i == j:
        raise PreconditionError("bad index pair")
    table = list(mu.probs)
    if th == 0:
        return mu
    out = []
    for mask, p in enumerate(table):
        bi, bj = (mask >> i) & 1, (mask >> j) & 1
        if bi == bj:
            out.append(p)
        else:
            swapped = mask ^ (1 << i) ^ (1 << j)
            out.append((1 - th) * p + th * table[swapped])
    return CubeMeasure(mu.d, out)


def total_symmetrize(mu: CubeMeasure) -> CubeMeasure:
    """Average over all coordinate permutations.

    Equals the polarization of the diagonalized generating polynomial:
    each state of weight k gets mass rank_k / C(d, k).
    """
    ranks = rank_sequence(mu)
    table = [
        ranks[mask.bit_count()] / math.comb(mu.d, mask.bit_count())
        for mask in range(1 << mu.d)
    ]
    return CubeMeasure(mu.d, table)


def homogenize_measure(mu: CubeMeasure) -> PolyQ:
    """Generating polynomial of the augmented law (X_1..X_d, d - sum X_j);
    the last variable's exponent carries the integer-valued check variable."""
    return homogenize(genpoly(mu), degree=mu.d)


def phsr_embed(mu: CubeMeasure) -> CubeMeasure:
    """Homogeneous lift to B_{2d}: homogenize to degree d, then polarize the
    check variable into d clones.  Projecting the first d coordinates
    recovers mu; all mass sits on rank d."""
    f = genpoly(mu)
    fh = homogenize(f, degree=mu.d)
    fp = polarize(fh, block_sizes=[1] * mu.d + [mu.d])
    return from_genpoly(fp)


# -- exclusion dynamics ---------------------------------------------------------

THETA_DENOMINATOR_CAP = 1 << 63


def _check_rates(rates: Sequence[Sequence], d: int) -> list[list[Fraction]]:
    rs = [[rat(x) for x in row] for row in rates]
    if len(rs) != d or any(len(row) != d for row in rs):
        raise PreconditionError("rate matrix shape does not match d")
    for i in range(d):
        if rs[i][i] != 0:
            raise PreconditionError("rate matrix must have zero diagonal")
        for j in range(d):
            if rs[i][j] != rs[j][i]:
                raise PreconditionError("rate matrix must be symmetric")
            if rs[i][j] < 0:
                raise PreconditionError("rates must be nonnegative")
    return rs


def exclusion_trotter_thetas(
    rates: Sequence[Sequence], t, steps: int, d: int
) -> dict[tuple[int, int], Fraction]:
    """Per-sweep swap probabilities: theta_ij = (1 - exp(-2 lam_ij t/steps))/2,
    rationalized to denominator <= 2^63.

    (1 - e^(-2 lam s))/2 is the probability that a rate-lam swap clock fires
    an odd number of times in time s, which is exactly the transposition
    probability of the two-site dynamics over that window.
    """
    rs = _check_rates(rates, d)
    tt = float(rat(t))
    out = {}
    for i in range(d):
        for j in range(i + 1, d):
            if rs[i][j]:
                theta = (1.0 - math.exp(-2.0 * float(rs[i][j]) * tt / steps)) / 2.0
                out[(i, j)] = Fraction(theta).limit_denominator(
                    THETA_DENOMINATOR_CAP
                )
    return out


def exclusion_evolve(
    mu: CubeMeasure, rates: Sequence[Sequence], t, steps: int = 64
) -> CubeMeasure:
    """Trotterized symmetric exclusion: `steps` sweeps, each applying the
    pairwise partial symmetrization with the window swap probability.

    The sweeps run on integer numerators over one growing denominator, with
    a single normalization at the end; this is the same exact update as
    repeated `partial_symmetrize`, minus the per-step gcd overhead.
    """
    if steps < 1:
        raise PreconditionError("steps must be >= 1")
    if rat(t) < 0:
        raise PreconditionError("time must be nonnegative")
    thetas = exclusion_trotter_thetas(rates, t, steps, mu.d)
    den = 1
    for p in mu.probs:
        den = den * p.denominator // gcd(den, p.denominator)
    num = [int(p * den) for p in mu.probs]
    size = 1 << mu.d
    pair_plan = []
    for (i, j), th in sorted(thetas.items()):
        swaps = [
            (mask, mask ^ (1 << i) ^ (1 << j))
            for mask in range(size)
            if not (mask >> i) & 1 and (mask >> j) & 1
        ]
        fixed = [
            mask for mask in range(size) if (mask >> i) & 1 == (mask >> j) & 1
        ]
        pair_plan.append((th.numerator, th.denominator, swaps, fixed))
    for _ in range(steps):
        for tn, td, swaps, fixed in pair_plan:
            keep = td - tn
            for a, b in swaps:
                na, nb = num[a], num[b]
                num[a] = keep * na + tn * nb
                num[b] = keep * nb + tn * na
            for mask in fixed:
                num[mask] *= td
            den *= td
    return CubeMeasure(mu.d, [Fraction(n, den) for n in num])


def exclusion_oracle(mu: CubeMeasure, rates: Sequence[Sequence], t) -> list[float]:
    """Float matrix-exponential solution of the exclusion generator on the
    full 2^d state space (d <= 10); used to measure Trotter error."""
    if mu.d > 10:
        raise SizeGuardError("oracle limited to d <= 10")
    import numpy as np
    from scipy.linalg import expm

    rs = _check_rates(rates, mu.d)
    n = 1 << mu.d
    gen = np.zeros((n, n))
    for i in range(mu.d):
        for j in range(i + 1, mu.d):
            lam = float(rs[i][j])
            if not lam:
                continue
            for mask in range(n):
                swapped = mask
                bi, bj = (mask >> i) & 1, (mask >> j) & 1
                if bi != bj:
                    swapped = mask ^ (1 << i) ^ (1 << j)
                if swapped != mask:
                    gen[swapped, mask] += lam
                    gen[mask, mask] -= lam
    v = np.array([float(p) for p in mu.probs])
    return list(expm(gen * float(rat(t))) @ v)


def tv_distance(mu: CubeMeasure, oracle: Sequence[float]) -> float:
    return 0.5 * sum(abs(float(p) - q) for p, q in zip(mu.probs, oracle))


# -- generators -----------------------------------------------------------------


def determinantal(kernel: RationalMatrix) -> CubeMeasure:
    """Determinantal measure of a symmetric kernel with spectrum in [0, 1]
    (K and I-K both PSD, verified exactly).

    Inclusion evaluations det(I - K + K D_S) are Moebius-inverted to point
    masses; nonnegativity and total mass 1 are asserted.
    """
    if not kernel.is_symmetric():
        raise PreconditionError("kernel must be symmetric")
    d = kernel.n
    if d > 14:
        raise SizeGuardError("determinantal measure limited to d <= 14")
    if not kernel.is_psd():
        raise PreconditionError("kernel must be PSD")
    eye = RationalMatrix.identity(d)
    i_minus_k = eye + (kernel * Fraction(-1))
    if not i_minus_k.is_psd():
        raise PreconditionError("I - K must be PSD (spectrum in [0, 1])")

    vals = []
    for mask in range(1 << d):
        rows = [
            [
                (1 if i == j else 0) - (0 if (mask >> j) & 1 else kernel[i, j])
                for j in range(d)
            ]
            for i in range(d)
        ]
        vals.append(RationalMatrix(rows).det())
    # subset Moebius inversion: mass(T) = sum_{S<=T} (-1)^{|T\S|} f(1_S)
    for j in range(d):
        bit = 1 << j
        for mask in range(1 << d):
            if mask & bit:
                vals[mask] -= vals[mask ^ bit]
    if any(v < 0 for v in vals) or sum(vals) != 1:
        raise RuntimeError("kernel inversion produced an invalid measure")
    return CubeMeasure(d, vals)


def spanning_tree_measure(graph: Graph) -> CubeMeasure:
    """Weighted uniform spanning tree law on the edge indicator cube."""
    trees = spanning_trees(graph)
    z = sum((w for _, w in trees), Fraction(0))
    if z == 0:
        raise PreconditionError("all spanning trees have zero weight")
    masses: dict[int, Fraction] = {}
    for combo, w in trees:
        if w:
            mask = sum(1 << idx for idx in combo)
            masses[mask] = masses.get(mask, Fraction(0)) + w / z
    return CubeMeasure.from_dict(len(graph.edges), masses)


def conditioned_bernoulli(ps: Sequence, k: int) -> CubeMeasure:
    """Independent Bernoulli(p_j) conditioned on the coordinate sum being k."""
    mu = CubeMeasure.bernoulli_product(ps)
    indicator = [Fraction(1) if i == k else Fraction(0) for i in range(mu.d + 1)]
    return rank_rescale(mu, indicator)


# -- consequences ------------------------------------------------------------------


def rank_sequence(mu: CubeMeasure) -> list[Fraction]:
    """Level masses a_k = mu(N = k), k = 0..d."""
    out = [Fraction(0)] * (mu.d + 1)
    for mask, p in enumerate(mu.probs):
        out[mask.bit_count()] += p
    return out


@dataclass(frozen=True)
class LevelsReport:
    passed: bool
    failing_level: Optional[int]
    certificate: Optional[dict]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "failing_level": self.failing_level,
            "certificate": self.certificate,
        }


def increasing_levels_check(mu: CubeMeasure) -> LevelsReport:
    """(mu | N=k) stochastically below (mu | N=k+1) for every adjacent pair
    of non-null levels, decided by exact coupling feasibility."""
    ranks = rank_sequence(mu)
    for k in range(mu.d):
        if ranks[k] == 0 or ranks[k + 1] == 0:
            continue
        low = rank_rescale(
            mu, [Fraction(1) if i == k else Fraction(0) for i in range(mu.d + 1)]
        )
        high = rank_rescale(
            mu,
            [Fraction(1) if i == k + 1 else Fraction(0) for i in range(mu.d + 1)],
        )
        res = coupling_check(CouplingProblem(high, low, RELATION_GE))
        if not res.feasible:
            return LevelsReport(False, k, res.certificate)
    return LevelsReport(True, None, None)


@dataclass(frozen=True)
class CoveringReport:
    passed: bool
    failing_index: Optional[int]
    certificate: Optional[dict]
    skipped: tuple = ()

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "failing_index": self.failing_index,
            "certificate": self.certificate,
            "skipped": list(self.skipped),
        }


def sc_property_check(mu: CubeMeasure) -> CoveringReport:
    """Stochastic covering (mu | X_j=0) over (mu | X_j=1) on B_{d-1} for
    every j with both conditionings non-null."""
    skipped = tuple(j for j in range(mu.d) if mu.marginal(j) in (0, 1))
    for j in range(mu.d):
        if j in skipped:
            continue
        nu0 = condition_var(mu, j, 0)
        nu1 = condition_var(mu, j, 1)
        res = coupling_check(CouplingProblem(nu0, nu1, RELATION_COVER))
        if not res.feasible:
            return CoveringReport(False, j, res.certificate, skipped)
    return CoveringReport(True, None, None, skipped)


@dataclass(frozen=True)
class TierResult:
    passed: bool
    counterexample: Optional[dict]

    def to_json(self) -> dict:
        return {"passed": self.passed, "counterexample": self.counterexample}


@dataclass(frozen=True)
class NAReport:
    pairwise: TierResult
    cylinder: TierResult
    na: TierResult

    @property
    def passed(self) -> bool:
        return self.pairwise.passed and self.cylinder.passed and self.na.passed

    def to_json(self) -> dict:
        return {
            "pairwise": self.pairwise.to_json(),
            "cylinder": self.cylinder.to_json(),
            "na": self.na.to_json(),
            "passed": self.passed,
        }


def _pairwise_tier(mu: CubeMeasure) -> TierResult:
    marg = [mu.marginal(j) for j in range(mu.d)]
    joint = [[Fraction(0)] * mu.d for _ in range(mu.d)]
    for mask, p in enumerate(mu.probs):
        if not p:
            continue
        bits = [j for j in range(mu.d) if (mask >> j) & 1]
        for a in range(len(bits)):
            for b in range(a + 1, len(bits)):
                joint[bits[a]][bits[b]] += p
    for i in range(mu.d):
        for j in range(i + 1, mu.d):
            if joint[i][j] > marg[i] * marg[j]:
                return TierResult(
                    False,
                    {
                        "pair": [i, j],
                        "joint": str(joint[i][j]),
                        "product": str(marg[i] * marg[j]),
                    },
                )
    return TierResult(True, None)


def _cylinder_tier(mu: CubeMeasure) -> TierResult:
    # superset sums: up[S] = P(X_j = 1 for all j in S)
    up = list(mu.probs)
    for j in range(mu.d):
        bit = 1 << j
        for mask in range(1 << mu.d):
            if not mask & bit:
                up[mask] += up[mask | bit]
    marg = [up[1 << j] for j in range(mu.d)]
    for s in range(1, 1 << mu.d):
        prod = Fraction(1)
        for j in range(mu.d):
            if (s >> j) & 1:
                prod *= marg[j]
        if up[s] > prod:
            return TierResult(
                False,
                {
                    "subset": [j for j in range(mu.d) if (s >> j) & 1],
                    "joint": str(up[s]),
                    "product": str(prod),
                },
            )
    return TierResult(True, None)


# Pairs whose float slack clears this margin are certified by the rounding
# bound (entries in [0,1], <= 2^6 summands: true error < 1e-12); anything
# closer is re-decided exactly.
_NA_FLOAT_MARGIN = 1e-9


def _na_tier(mu: CubeMeasure) -> TierResult:
    """Negative association over all splits (S, S^c) and all pairs of
    up-sets of the two sub-cubes (sufficient by the decomposition of
    increasing functions into up-set indicators).

    Every verdict is exact: with large denominators a float screen skips
    pairs whose slack provably clears the rounding error, and every
    remaining pair is decided in integers.
    """
    d = mu.d
    if d > 6:
        raise SizeGuardError("NA tier limited to d <= 6")
    if d < 2:
        return TierResult(True, None)
    den = 1
    for p in mu.probs:
        den = den * p.denominator // gcd(den, p.denominator)
    scaled = [int(p * den) for p in mu.probs]
    screen = den.bit_length() > 256

    full = (1 << d) - 1
    for s_mask in range(1, full):
        if not s_mask & 1:
            continue  # each unordered split once: keep coordinate 0 in S
        s_coords = [j for j in range(d) if (s_mask >> j) & 1]
        c_coords = [j for j in range(d) if not (s_mask >> j) & 1]
        k, m = len(s_coords), len(c_coords)
        joint = [[0] * (1 << m) for _ in range(1 << k)]
        for mask, w in enumerate(scaled):
            if not w:
                continue
            xs = sum(1 << i for i, j in enumerate(s_coords) if (mask >> j) & 1)
            ys = sum(1 << i for i, j in enumerate(c_coords) if (mask >> j) & 1)
            joint[xs][ys] += w
        row_tot = [sum(r) for r in joint]
        col_tot = [sum(joint[x][y] for x in range(1 << k)) for y in range(1 << m)]
        b_lists = upset_atom_lists(m)[1:-1]  # drop empty and full: trivial
        b_sums = [sum(col_tot[y] for y in atoms) for atoms in b_lists]
        if screen:
            jf = [[v / den for v in row] for row in joint]
            rf = [v / den for v in row_tot]
            bf = [v / den for v in b_sums]
        for a_atoms in upset_atom_lists(k)[1:-1]:
            w_a = [0] * (1 << m)
            for x in a_atoms:
                row = joint[x]
                for y in range(1 << m):
                    w_a[y] += row[y]
            a_tot = sum(row_tot[x] for x in a_atoms)
            if screen:
                wf = [sum(jf[x][y] for x in a_atoms) for y in range(1 << m)]
                af = sum(rf[x] for x in a_atoms)
            for bi, (atoms, b_tot) in enumerate(zip(b_lists, b_sums)):
                if screen:
                    slack = af * bf[bi] - sum(wf[y] for y in atoms)
                    if slack > _NA_FLOAT_MARGIN:
                        continue
                lhs = den * sum(w_a[y] for y in atoms)
                if lhs > a_tot * b_tot:
                    return TierResult(
                        False,
                        {
                            "S": s_coords,
                            "A_atoms": list(a_atoms),
                            "B_atoms": list(atoms),
                            "joint": str(Fraction(lhs, den * den)),
                            "product": str(Fraction(a_tot * b_tot, den * den)),
                        },
                    )
    return TierResult(True, None)


def na_audit(mu: CubeMeasure) -> NAReport:
    """Three-tier negative dependence audit: pairwise correlations, cylinder
    inequalities, and full negative association (d <= 6), all exact."""
    return NAReport(_pairwise_tier(mu), _cylinder_tier(mu), _na_tier(mu))


def sr_consequence_battery(mu: CubeMeasure, newton=newton_ulc_check) -> dict:
    """The full consequence battery for a claimed strong-Rayleigh measure:
    na_audit tiers, stochastic covering, increasing levels, rank ULC."""
    audit = na_audit(mu)
    covering = sc_property_check(mu)
    levels = increasing_levels_check(mu)
    ranks = newton(rank_sequence(mu))
    return {
        "na_audit": audit.to_json(),
        "stochastic_covering": covering.to_json(),
        "increasing_levels": levels.to_json(),
        "rank_ulc": ranks.to_json(),
        "passed": audit.passed and covering.passed and levels.passed and ranks.passed,
    }


# -- random closure chains ------------------------------------------------------

CHAIN_OPS = (
    "product",
    "project",
    "condition_var",
    "external_field",
    "rank_rescale",
    "partial_symmetrize",
    "total_symmetrize",
    "exclusion_evolve",
)


def _random_stable_rank_weights(rng: random.Random, d: int) -> list[Fraction]:
    """Coefficients of z^r * prod (a_i + b_i z): a stable nonnegative
    sequence, hence ULC with interval support."""
    deg = rng.randint(1, d)
    shift = rng.randint(0, d - deg)
    coeffs = [Fraction(1)]
    for _ in range(deg):
        a = Fraction(rng.randint(1, 3), rng.randint(1, 2))
        b = Fraction(rng.randint(1, 3), rng.randint(1, 2))
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += a * c
            nxt[i + 1] += b * c
        coeffs = nxt
    out = [Fraction(0)] * shift + coeffs
    out += [Fraction(0)] * (d + 1 - len(out))
    return out[: d + 1]


def random_closure_step(
    rng: random.Random, mu: CubeMeasure, max_d: int = 5
) -> tuple[dict, CubeMeasure]:
    """One random SR-preserving closure operation; returns (descriptor, result)."""
    ops = [op for op in CHAIN_OPS]
    if mu.d >= max_d:
        ops.remove("product")
    if mu.d <= 1:
        for name in ("condition_var", "project", "partial_symmetrize", "exclusion_evolve"):
            if name in ops:
                ops.remove(name)
    op = rng.choice(ops)
    if op == "product":
        p = Fraction(rng.randint(1, 3), 4)
        extra = CubeMeasure.bernoulli_product([p])
        return {"op": op, "bernoulli_p": str(p)}, product(mu, extra)
    if op == "project":
        keep = rng.randint(1, mu.d)
        coords = sorted(rng.sample(range(mu.d), keep))
        return {"op": op, "coords": coords}, project(mu, coords)
    if op == "condition_var":
        choices = [
            (j, v)
            for j in range(mu.d)
            for v in (0, 1)
            if 0 < mu.marginal(j) < 1 or (mu.marginal(j) == v)
        ]
        valid = [
            (j, v)
            for j, v in choices
            if sum(
                p for m, p in enumerate(mu.probs) if (m >> j) & 1 == v
            )
            > 0
        ]
        if not valid:
            return {"op": "noop"}, mu
        j, v = rng.choice(valid)
        return {"op": op, "index": j, "value": v}, condition_var(mu, j, v)
    if op == "external_field":
        lam = [Fraction(rng.randint(1, 4), rng.randint(1, 4)) for _ in range(mu.d)]
        return {"op": op, "field": [str(x) for x in lam]}, external_field(mu, lam)
    if op == "rank_rescale":
        ranks = rank_sequence(mu)
        for _ in range(20):
            b = _random_stable_rank_weights(rng, mu.d)
            if sum(w * r for w, r in zip(b, ranks)):
                return {"op": op, "weights": [str(x) for x in b]}, rank_rescale(
                    mu, b
                )
        return {"op": "noop"}, mu
    if op == "partial_symmetrize":
        i, j = rng.sample(range(mu.d), 2)
        th = Fraction(rng.randint(0, 8), 8)
        return {"op": op, "pair": [i, j], "theta": str(th)}, partial_symmetrize(
            mu, i, j, th
        )
    if op == "total_symmetrize":
        return {"op": op}, total_symmetrize(mu)
    # exclusion_evolve with few steps to keep denominators manageable
    rates = [[Fraction(0)] * mu.d for _ in range(mu.d)]
    npairs = rng.randint(1, min(3, mu.d * (mu.d - 1) // 2))
    for _ in range(npairs):
        i, j = rng.sample(range(mu.d), 2)
        r = Fraction(rng.randint(1, 4), 8)
        rates[i][j] = rates[j][i] = r
    t = Fraction(rng.randint(1, 4), 4)
    steps = 4
    return (
        {
            "op": op,
            "rates": [[str(x) for x in row] for row in rates],
            "t": str(t),
            "steps": steps,
        },
        exclusion_evolve(mu, rates, t, steps),
    )


def random_closure_chain(
    rng: random.Random, mu: CubeMeasure, length: int, max_d: int = 5
) -> tuple[list[dict], CubeMeasure]:
    chain = []
    for _ in range(length):
        desc, mu = random_closure_step(rng, mu, max_d)
        chain.append(desc)
    return chain, mu
