"""Permanents and permanent-adjacent bounds: Ryser oracle, polynomial
capacity, the capacity-descent inequality, Bregman and van der Waerden
bounds, monotone-column permanent polynomials, and trace-power
coefficient checks for PSD pairs.

Soundness note: the capacity optimizer only ever upper-bounds an infimum,
so no >=-assertion is ever routed through it.  Where the doubly stochastic
normalization pins the capacity at exactly 1, the van der Waerden check is
a pure integer comparison.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PreconditionError, SizeGuardError
from .linalg import RationalMatrix
from .polyq import PolyQ, differentiate, rat
from .stability import Verdict, refute_stability
from .unipoly import UniPolyQ, is_real_rooted


def permanent_ryser(a: RationalMatrix) -> Fraction:
    """Exact permanent by Ryser inclusion-exclusion with Gray-code row sums."""
    if not a.is_square():
        raise PreconditionError("permanent requires a square matrix")
    n = a.n
    if n > 14:
        raise SizeGuardError("permanent_ryser limited to n <= 14")
    if n == 0:
        return Fraction(1)
    rows = a.rows
    sums = [Fraction(0)] * n
    total = Fraction(0)
    gray = 0
    for k in range(1, 1 << n):
        g = k ^ (k >> 1)
        bit = (g ^ gray).bit_length() - 1
        if g > gray:
            for i in range(n):
                sums[i] += rows[i][bit]
        else:
            for i in range(n):
                sums[i] -= rows[i][bit]
        gray = g
        prod = Fraction(1)
        for s in sums:
            prod *= s
            if not prod:
                break
        # (-1)^(n - |S|) per Ryser inclusion-exclusion
        total += prod if g.bit_count() % 2 == n % 2 else -prod
    return total


def permanent_naive(a: RationalMatrix) -> Fraction:
    """Permutation-sum permanent (test oracle, n <= 8)."""
    if not a.is_square():
        raise PreconditionError("permanent requires a square matrix")
    n = a.n
    if n > 8:
        raise SizeGuardError("naive permanent limited to n <= 8")
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        prod = Fraction(1)
        for i in range(n):
            prod *= a[i, perm[i]]
            if not prod:
                break
        total += prod
    return total


def product_poly(a: RationalMatrix) -> PolyQ:
    """The row-product polynomial prod_i (sum_j a_ij x_j) of a nonnegative
    square matrix; its all-ones-exponent coefficient is the permanent
    (cross-checked against Ryser)."""
    if not a.is_square():
        raise PreconditionError("product polynomial requires a square matrix")
    if not a.is_nonnegative():
        raise PreconditionError("matrix must be nonnegative")
    n = a.n
    if n > 10:
        raise SizeGuardError("product_poly limited to n <= 10")
    acc = PolyQ.one(n)
    for i in range(n):
        row = PolyQ(
            n,
            {
                tuple(1 if t == j else 0 for t in range(n)): a[i, j]
                for j in range(n)
                if a[i, j]
            },
        )
        acc = acc * row
    assert acc.coeff((1,) * n) == permanent_ryser(a), (
        "product polynomial coefficient disagrees with Ryser"
    )
    return acc


def _check_class(p: PolyQ) -> int:
    """Membership in C_n: n-homogeneous in n variables, nonnegative coeffs."""
    if p.is_zero:
        raise PreconditionError("zero polynomial")
    n = p.d
    if not p.is_homogeneous() or p.total_degree() != n:
        raise PreconditionError(
            "polynomial must be homogeneous of degree equal to its variable count"
        )
    if any(c < 0 for c in p.terms.values()):
        raise PreconditionError("coefficients must be nonnegative")
    return n


def doubly_stochastic_check(p: PolyQ) -> bool:
    """Exact test that every partial derivative of p is 1 at the all-ones point."""
    n = _check_class(p)
    ones = [Fraction(1)] * n
    return all(
        differentiate(p, j).eval_rational(ones) == 1 for j in range(n)
    )


@dataclass(frozen=True)
class CapacityResult:
    upper: float  # best evaluation of p(x)/prod x_i found: upper bound on Cap
    argmin: list
    gradient_norm: float
    iterations: int
    converged: bool

    def to_json(self) -> dict:
        return {
            "upper": self.upper,
            "argmin": list(self.argmin),
            "gradient_norm": self.gradient_norm,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def capacity(p: PolyQ, tol: float = 1e-8, max_iter: int = 500) -> CapacityResult:
    """Minimize g(y) = log p(e^y) - sum y_i (convex) by gradient descent with
    backtracking from y = 0; exp(g) at the last iterate upper-bounds Cap(p).
    """
    n = _check_class(p)
    terms = [(exps, float(c)) for exps, c in p.terms.items()]

    def eval_p_and_grad(y: list[float]) -> tuple[float, list[float]]:
        x = [math.exp(v) for v in y]
        val = 0.0
        weighted = [0.0] * n
        for exps, c in terms:
            t = c
            for j, e in enumerate(exps):
                if e:
                    t *= x[j] ** e
            val += t
            for j, e in enumerate(exps):
                if e:
                    weighted[j] += e * t
        if val <= 0.0:
            raise RuntimeError("nonpositive evaluation encountered")
        grad = [weighted[j] / val - 1.0 for j in range(n)]
        return math.log(val) - sum(y), grad

    y = [0.0] * n
    g, grad = eval_p_and_grad(y)
    iterations = 0
    gnorm = math.sqrt(sum(v * v for v in grad))
    while gnorm >= tol and iterations < max_iter:
        step = 1.0
        while step > 1e-18:
            trial = [y[j] - step * grad[j] for j in range(n)]
            gt, grad_t = eval_p_and_grad(trial)
            if gt <= g - 0.5 * step * gnorm * gnorm:
                y, g, grad = trial, gt, grad_t
                break
            step *= 0.5
        else:
            break
        gnorm = math.sqrt(sum(v * v for v in grad))
        iterations += 1
    return CapacityResult(
        upper=math.exp(g),
        argmin=[math.exp(v) for v in y],
        gradient_norm=gnorm,
        iterations=iterations,
        converged=gnorm < tol,
    )


def descent_factor(m: int) -> Fraction:
    """((m-1)/m)^(m-1), with the degree-1 case pinned to 1 (0^0 convention)."""
    if m <= 1:
        return Fraction(1)
    return Fraction(m - 1, m) ** (m - 1)


def gurvits_bound(a: RationalMatrix, tol: float = 1e-8) -> dict:
    """Capacity lower bound on the permanent: Per(A) >= Cap(p_A) n!/n^n.

    For doubly stochastic A the capacity equals 1 exactly, so the
    van der Waerden comparison Per >= n!/n^n is an exact rational check
    with no optimizer in the assertion path.
    """
    if not a.is_square():
        raise PreconditionError("square matrix required")
    n = a.n
    if n > 10:
        raise SizeGuardError("gurvits_bound limited to n <= 10")
    if not a.is_nonnegative():
        raise PreconditionError("matrix must be nonnegative")
    per = permanent_ryser(a)
    p = product_poly(a)
    cap = capacity(p, tol=tol)
    scale = Fraction(math.factorial(n), n**n)
    ds = a.is_doubly_stochastic()
    report = {
        "n": n,
        "per": str(per),
        "per_float": float(per),
        "cap_upper": cap.upper,
        "bound_float": cap.upper * float(scale),
        "slack_float": float(per) - cap.upper * float(scale),
        "doubly_stochastic": ds,
    }
    if ds:
        report["vdw_exact_holds"] = per >= scale
        report["vdw_equality"] = per == scale
    return report


def capacity_descent_pair(
    p: PolyQ, tol: float = 1e-6
) -> tuple[PolyQ, dict]:
    """q := d/dx_n p(..., 0) and the numeric descent check
    Cap(q) >= Cap(p) * ((d-1)/d)^(d-1) with d the degree of x_n in p.

    The check is asserted only when p is doubly stochastic (capacity then
    exactly 1); otherwise the report is informational.
    """
    n = _check_class(p)
    last = n - 1
    deg = p.degree_in(last)
    q_terms = {}
    for exps, c in p.terms.items():
        if exps[last] == 1:
            q_terms[exps[:last]] = c
    q = PolyQ(n - 1, q_terms)
    factor = descent_factor(deg)
    ds = doubly_stochastic_check(p)
    cap_q = capacity(q, tol=tol) if not q.is_zero else None
    report = {
        "x_n_degree": deg,
        "descent_factor": str(factor),
        "doubly_stochastic": ds,
        "cap_q_upper": None if cap_q is None else cap_q.upper,
    }
    if cap_q is not None:
        rhs = float(factor) * (1.0 if ds else capacity(p, tol=tol).upper)
        report["rhs_float"] = rhs
        report["holds_within_tol"] = cap_q.upper >= rhs - tol
        report["informational_only"] = not ds
    return q, report


def sinkhorn_doubly_stochastic(
    entries: Sequence[Sequence], rounds: int = 4
) -> RationalMatrix:
    """Exactly doubly stochastic matrix from a positive seed matrix:
    rational Sinkhorn rounds, then an exact repair step.

    Entries are re-rationalized between rounds to keep denominators small
    (only positivity matters mid-stream); exactness comes from the repair:
    after row normalization the column sums c_j satisfy sum c_j = n, so
    scaling by 1/max(c_j) leaves nonnegative row and column deficits with
    equal totals, and adding the rank-one matrix r_i d_j / s closes both
    exactly.
    """
    a = [[rat(x) for x in row] for row in entries]
    n = len(a)
    if any(len(row) != n for row in a):
        raise PreconditionError("square matrix required")
    if any(x <= 0 for row in a for x in row):
        raise PreconditionError("seed matrix must be strictly positive")
    for _ in range(rounds):
        a = [[x / sum(row) for x in row] for row in a]
        cols = [sum(a[i][j] for i in range(n)) for j in range(n)]
        a = [
            [(a[i][j] / cols[j]).limit_denominator(1 << 20) for j in range(n)]
            for i in range(n)
        ]
    a = [[x / sum(row) for x in row] for row in a]
    cols = [sum(a[i][j] for i in range(n)) for j in range(n)]
    lam = 1 / max(cols)
    a = [[x * lam for x in row] for row in a]
    row_def = [1 - sum(row) for row in a]
    col_def = [1 - sum(a[i][j] for i in range(n)) for j in range(n)]
    s = sum(row_def)
    if s:
        a = [
            [a[i][j] + row_def[i] * col_def[j] / s for j in range(n)]
            for i in range(n)
        ]
    out = RationalMatrix(a)
    assert out.is_doubly_stochastic()
    return out


def _upper_root_bound(value: int, r: int, scale_bits: int = 20) -> Fraction:
    """Smallest k/2^scale_bits with (k/2^scale_bits)^r >= value (dyadic
    upper bound on value^(1/r), exact integer comparisons only)."""
    if r == 0:
        return Fraction(1)
    den = 1 << scale_bits
    lo, hi = 0, 1
    while hi**r < value * den**r:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**r >= value * den**r:
            hi = mid
        else:
            lo = mid + 1
    return Fraction(lo, den)


def bregman_bound(a: RationalMatrix) -> dict:
    """Per(A) <= prod_j (r_j!)^(1/r_j) for a zero-one matrix, with the bound
    rounded upward so the comparison is conservative; an exact integer
    power comparison is reported alongside."""
    if not a.is_square():
        raise PreconditionError("square matrix required")
    if not a.is_zero_one():
        raise PreconditionError("matrix entries must be 0 or 1")
    n = a.n
    if n > 12:
        raise SizeGuardError("bregman_bound limited to n <= 12")
    per = permanent_ryser(a)
    row_sums = [int(sum(row)) for row in a.rows]
    bound_up = Fraction(1)
    for r in row_sums:
        bound_up *= _upper_root_bound(math.factorial(r), r)
    # exact comparison: Per^R <= prod (r_j!)^(R/r_j) with R = lcm of row sums
    lcm = 1
    for r in row_sums:
        if r:
            lcm = lcm * r // math.gcd(lcm, r)
    per_int = int(per)  # zero-one matrix: permanent is an integer
    rhs = 1
    for r in row_sums:
        if r:
            rhs *= math.factorial(r) ** (lcm // r)
    return {
        "n": n,
        "per": str(per),
        "row_sums": row_sums,
        "bound_up": str(bound_up),
        "bound_float": float(bound_up),
        "holds_rounded_up": per <= bound_up,
        "holds_exact_power": per_int**lcm <= rhs if lcm else per_int <= 1,
    }


def mmcpt_poly(
    a: RationalMatrix, trials: int = 100, seed: int = 0
) -> dict:
    """per(z J + A) for a monotone column matrix, with its exact
    real-rootedness verdict; for n <= 4 the multivariate per(J Z + A) is
    also built and handed to the stability refuter."""
    if not a.is_square():
        raise PreconditionError("square matrix required")
    n = a.n
    if n > 6:
        raise SizeGuardError("mmcpt_poly limited to n <= 6")
    for j in range(n):
        for i in range(n - 1):
            if a[i, j] < a[i + 1, j]:
                raise PreconditionError(
                    f"column {j} increases downward at row {i}"
                )
    q = UniPolyQ()
    for perm in itertools.permutations(range(n)):
        prod = UniPolyQ.one()
        for i in range(n):
            prod = prod * UniPolyQ((a[i, perm[i]], 1))
        q = q + prod
    report = {
        "q": q.to_json(),
        "real_rooted": bool(is_real_rooted(q)) if not q.is_zero else True,
    }
    if n <= 4:
        mv = PolyQ.zero(n)
        for perm in itertools.permutations(range(n)):
            prod = PolyQ.one(n)
            for i in range(n):
                # (J Z + A)_{i, j} = z_j + a_ij
                j = perm[i]
                prod = prod * (PolyQ.variable(j, n) + PolyQ.constant(a[i, j], n))
            mv = mv + prod
        verdict = refute_stability(mv, trials=trials, seed=seed)
        report["multivariate"] = verdict.to_json()
    return report


def bmv_coeffs(
    a: RationalMatrix, b: RationalMatrix, n: int
) -> tuple[list[Fraction], bool]:
    """Coefficients of Tr((A + t B)^n) in t for exact PSD matrices A, B,
    plus the all-nonnegative verdict.

    Computed by the binomial-word recursion C_m[k] = C_{m-1}[k] A +
    C_{m-1}[k-1] B, which sums all interleavings exactly.
    """
    if n < 1 or n > 10:
        raise PreconditionError("power must be between 1 and 10")
    if a.n > 5 or not a.is_square() or (b.n, b.m) != (a.n, a.m):
        raise SizeGuardError("bmv_coeffs limited to matching square size <= 5")
    if not a.is_psd() or not b.is_psd():
        raise PreconditionError("both matrices must be positive semidefinite")
    layers = [RationalMatrix.identity(a.n)]
    for _ in range(n):
        nxt = []
        for k in range(len(layers) + 1):
            term = None
            if k < len(layers):
                term = layers[k] * a
            if k > 0:
                add = layers[k - 1] * b
                term = add if term is None else term + add
            nxt.append(term)
        layers = nxt
    coeffs = [m.trace() for m in layers]
    return coeffs, all(c >= 0 for c in coeffs)
