"""Univariate coefficient tests: Newton/ULC, Polya frequency, multiplier
sequences, interlacing, and the probability-generating lower bound on a1.

Everything except `gurvits_a1_bound_check` is decided in exact rational
arithmetic; that one check minimizes numerically and asserts with an
explicit slack, since evaluations only upper-bound an infimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PreconditionError
from .unipoly import (
    UniPolyQ,
    _nonroot_point,
    count_real_roots,
    is_real_rooted,
    isolate_real_roots,
    poly_gcd,
    roots_all_nonnegative,
    roots_all_nonpositive,
    square_free_part,
)


def _coerce_seq(a: Sequence) -> list[Fraction]:
    return [x if isinstance(x, Fraction) else Fraction(x) for x in a]


@dataclass(frozen=True)
class NewtonReport:
    """Outcome of the ultra log-concavity check on a coefficient sequence."""

    passed: bool
    first_violation: Optional[int]  # first k with the Newton inequality violated
    no_internal_zeros: bool
    log_concave: bool

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "first_violation": self.first_violation,
            "no_internal_zeros": self.no_internal_zeros,
            "log_concave": self.log_concave,
        }


def newton_ulc_check(a: Sequence) -> NewtonReport:
    """Check (a_k/C(n,k))^2 >= (a_{k+1}/C(n,k+1)) (a_{k-1}/C(n,k-1)) for all k.

    Also reports plain log-concavity and whether the support is an interval
    (no internal zeros); the sequence is ultra log-concave iff both the
    inequalities and the support condition hold.  Sequences shorter than 3
    pass vacuously.
    """
    seq = _coerce_seq(a)
    if any(x < 0 for x in seq):
        raise PreconditionError("coefficient sequence must be nonnegative")
    n = len(seq) - 1
    nz = [i for i, x in enumerate(seq) if x != 0]
    no_internal_zeros = not nz or (nz[-1] - nz[0] + 1 == len(nz))

    first_violation = None
    log_concave = True
    for k in range(1, n):
        lhs = (seq[k] / math.comb(n, k)) ** 2
        rhs = (seq[k + 1] / math.comb(n, k + 1)) * (seq[k - 1] / math.comb(n, k - 1))
        if lhs < rhs and first_violation is None:
            first_violation = k
        if seq[k] ** 2 < seq[k + 1] * seq[k - 1]:
            log_concave = False
    if not no_internal_zeros:
        log_concave = False
    passed = first_violation is None and no_internal_zeros
    return NewtonReport(passed, first_violation, no_internal_zeros, log_concave)


def pf_check(a: Sequence, max_minor: int) -> bool:
    """Polya-frequency test: all minors of the Toeplitz matrix A[i,j] = a[i-j]
    up to size `max_minor`, over a window of width len(a)-1+max_minor, are >= 0.

    The sequence is scaled to integers first (a positive scalar does not
    change minor signs); minors are computed by Laplace expansion with
    shared subminors.
    """
    if max_minor < 1:
        raise PreconditionError("max_minor must be >= 1")
    seq = _coerce_seq(a)
    if not seq:
        return True
    den = 1
    for x in seq:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in seq]
    n = len(ints) - 1
    w = n + max_minor

    def entry(i: int, j: int) -> int:
        k = i - j
        return ints[k] if 0 <= k <= n else 0

    from itertools import combinations

    cache: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}

    def minor(rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
        if len(rows) == 1:
            return entry(rows[0], cols[0])
        key = (rows, cols)
        v = cache.get(key)
        if v is not None:
            return v
        r = rows[-1]
        sub_rows = rows[:-1]
        total = 0
        sign = (-1) ** (len(rows) - 1)
        for idx, c in enumerate(cols):
            e = entry(r, c)
            if e:
                total += sign * ((-1) ** idx) * e * minor(
                    sub_rows, cols[:idx] + cols[idx + 1 :]
                )
        cache[key] = total
        return total

    for size in range(1, max_minor + 1):
        for rows in combinations(range(w), size):
            for cols in combinations(range(w), size):
                if minor(rows, cols) < 0:
                    return False
    return True


@dataclass(frozen=True)
class A1BoundResult:
    passed: bool
    a1: float
    bound: float
    c_upper: float
    t_min: float

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "a1": self.a1,
            "bound": self.bound,
            "c_upper": self.c_upper,
            "t_min": self.t_min,
        }


def gurvits_a1_bound_check(
    f: UniPolyQ, samples: int = 200, tol: float = 1e-9
) -> A1BoundResult:
    """Check a1 = f'(0) >= ((d-1)/d)^(d-1) * C for a probability generating
    polynomial f, where C = inf_{t>0} f(t)/t.

    C is estimated by a bracketing scan plus golden-section refinement; the
    estimate upper-bounds the infimum, and the assertion carries an explicit
    slack `tol`.
    """
    if f.is_zero:
        raise PreconditionError("zero polynomial")
    if any(c < 0 for c in f.coeffs):
        raise PreconditionError("coefficients must be nonnegative")
    if f(1) != 1:
        raise PreconditionError("not a probability generating polynomial: f(1) != 1")
    if not is_real_rooted(f):
        raise PreconditionError("polynomial is not real-rooted")
    d = f.degree

    ff = [float(c) for c in f.coeffs]

    def ratio(t: float) -> float:
        acc = 0.0
        for c in reversed(ff):
            acc = acc * t + c
        return acc / t

    # geometric bracket scan, then golden-section refinement
    grid = [2.0**k for k in range(-30, 31)]
    vals = [ratio(t) for t in grid]
    i = min(range(len(grid)), key=lambda k: vals[k])
    lo = grid[max(0, i - 1)]
    hi = grid[min(len(grid) - 1, i + 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1, f2 = ratio(c1), ratio(c2)
    for _ in range(max(1, samples)):
        if f1 <= f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = ratio(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = ratio(c2)
    t_min = (a + b) / 2.0
    c_upper = min(vals[i], ratio(t_min))
    g = 1.0 if d <= 1 else ((d - 1) / d) ** (d - 1)
    a1 = float(f.coeffs[1]) if f.degree >= 1 else 0.0
    bound = g * c_upper
    return A1BoundResult(a1 >= bound - tol, a1, bound, c_upper, t_min)


def apply_multiplier(lam: Sequence, f: UniPolyQ) -> UniPolyQ:
    """Coefficientwise product: sum lam_k a_k z^k."""
    ls = _coerce_seq(lam)
    if len(ls) < len(f.coeffs):
        raise PreconditionError("multiplier sequence shorter than deg f + 1")
    return UniPolyQ(tuple(l * c for l, c in zip(ls, f.coeffs)))


@dataclass(frozen=True)
class RefuteOutcome:
    refuted: bool
    at_degree: Optional[int]
    witness: Optional[dict]

    def to_json(self) -> dict:
        return {
            "refuted": self.refuted,
            "at_degree": self.at_degree,
            "witness": self.witness,
        }


def polya_schur_refute(lam: Sequence, n_max: int) -> RefuteOutcome:
    """Test T_lam[(1+z)^n] for n = 1..n_max against the real-rooted,
    same-sign-roots criterion.

    A failure certifies that lam is NOT a multiplier sequence.  Passing all
    degrees is evidence only; no finite set of degrees certifies.  A finite
    lam is implicitly extended by zeros.
    """
    if n_max < 1:
        raise PreconditionError("need n_max >= 1")
    ls = _coerce_seq(lam)

    def l(k: int) -> Fraction:
        return ls[k] if k < len(ls) else Fraction(0)

    for n in range(1, n_max + 1):
        g = UniPolyQ(tuple(l(k) * math.comb(n, k) for k in range(n + 1)))
        if g.is_zero:
            continue
        ok = is_real_rooted(g) and (
            roots_all_nonpositive(g) or roots_all_nonnegative(g)
        )
        if not ok:
            return RefuteOutcome(True, n, {"polynomial": g.to_json()})
    return RefuteOutcome(False, None, None)


def interlace_check(f: UniPolyQ, g: UniPolyQ) -> bool:
    """Exact interlacing test: between consecutive distinct roots of f lies
    exactly one root of g, and g has no roots outside the hull of f's roots.

    Both inputs must be real-rooted with deg g = deg f - 1.  A common factor
    is divided out of both before the gap analysis.
    """
    if f.is_zero or g.is_zero:
        raise PreconditionError("zero polynomial")
    if g.degree != f.degree - 1:
        raise PreconditionError("need deg g = deg f - 1")
    if not is_real_rooted(f) or not is_real_rooted(g):
        raise PreconditionError("both polynomials must be real-rooted")

    h = poly_gcd(f, g)
    if h.degree > 0:
        f, g = f // h, g // h
    fs = square_free_part(f)
    gs = square_free_part(g)
    total_g = count_real_roots(gs) if gs.degree >= 1 else 0

    # isolate f's roots, then shrink each interval until it is free of
    # g-roots (possible: the common factor was removed, so fs, gs coprime)
    refined = []
    for a, b in isolate_real_roots(fs):
        while gs.degree >= 1 and (
            gs(a) == 0 or gs(b) == 0 or count_real_roots(gs, lo=a, hi=b) > 0
        ):
            m = _nonroot_point(fs * gs, a, b)
            if count_real_roots(fs, lo=a, hi=m) == 1:
                b = m
            else:
                a = m
        refined.append((a, b))

    # no g-roots outside the hull of f's roots
    if gs.degree >= 1:
        if count_real_roots(gs, hi=refined[0][0], include_hi=True) > 0:
            return False
        if count_real_roots(gs, lo=refined[-1][1], include_lo=True) > 0:
            return False
    # exactly one distinct g-root between consecutive f-intervals
    found = 0
    for (_, b1), (a2, _) in zip(refined, refined[1:]):
        if gs.degree < 1:
            return False
        if count_real_roots(gs, lo=b1, hi=a2, include_lo=True, include_hi=True) != 1:
            return False
        found += 1
    return found == total_g


def basis_transform(f: UniPolyQ, mode: str) -> UniPolyQ:
    """Replace x^k by the falling product (x)_k or rising product (x)^k."""
    if mode not in ("falling", "rising"):
        raise PreconditionError("mode must be 'falling' or 'rising'")
    step = -1 if mode == "falling" else 1
    acc = UniPolyQ()
    basis = UniPolyQ.one()
    for k, c in enumerate(f.coeffs):
        if k >= 1:
            basis = basis * UniPolyQ((step * (k - 1), 1))
        if c:
            acc = acc + basis * c
    return acc
