"""Exact univariate rational polynomials and Sturm-chain real-root counting.

All coefficients are `fractions.Fraction`; every count returned here is an
exact integer, never an estimate.  Repeated roots are handled by reducing
to the square-free part (gcd with the derivative) before counting, so
counts are counts of *distinct* real roots unless stated otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd
from typing import Iterable, Optional

from .errors import PreconditionError


def _coerce(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class UniPolyQ:
    """Dense univariate polynomial a0 + a1*z + ... + an*z^n over Q.

    Trailing zero coefficients are trimmed; the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> "UniPolyQ":
        return cls(())

    @classmethod
    def one(cls) -> "UniPolyQ":
        return cls((1,))

    @classmethod
    def x(cls) -> "UniPolyQ":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise PreconditionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x) -> Fraction:
        x = _coerce(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPolyQ) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "UniPolyQ":
        return UniPolyQ(tuple(-c for c in self.coeffs))

    def __add__(self, other: "UniPolyQ") -> "UniPolyQ":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPolyQ(out)

    def __sub__(self, other: "UniPolyQ") -> "UniPolyQ":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UniPolyQ):
            if self.is_zero or other.is_zero:
                return UniPolyQ()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return UniPolyQ(out)
        c = _coerce(other)
        return UniPolyQ(tuple(a * c for a in self.coeffs))

    __rmul__ = __mul__

    def __divmod__(self, other: "UniPolyQ"):
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dn = other.degree
        lead = other.coeffs[-1]
        q = [Fraction(0)] * max(0, len(rem) - dn)
        for i in range(len(rem) - 1, dn - 1, -1):
            if rem[i]:
                f = rem[i] / lead
                q[i - dn] = f
                for j, b in enumerate(other.coeffs):
                    rem[i - dn + j] -= f * b
        return UniPolyQ(q), UniPolyQ(rem)

    def __floordiv__(self, other: "UniPolyQ") -> "UniPolyQ":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPolyQ") -> "UniPolyQ":
        return divmod(self, other)[1]

    def derivative(self) -> "UniPolyQ":
        return UniPolyQ(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def reversed_coeffs(self) -> "UniPolyQ":
        """z^n * f(1/z): the coefficient sequence reversed."""
        return UniPolyQ(tuple(reversed(self.coeffs)))

    def primitive(self) -> "UniPolyQ":
        """Scale by a positive rational so coefficients are coprime integers."""
        if self.is_zero:
            return self
        den_lcm = 1
        for c in self.coeffs:
            den_lcm = den_lcm * c.denominator // _int_gcd(den_lcm, c.denominator)
        ints = [int(c * den_lcm) for c in self.coeffs]
        g = 0
        for v in ints:
            g = _int_gcd(g, abs(v))
        return UniPolyQ(tuple(Fraction(v // g) for v in ints))

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "UniPolyQ":
        return cls(tuple(Fraction(s) for s in data["coeffs"]))

    def __repr__(self) -> str:
        if self.is_zero:
            return "UniPolyQ(0)"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*z")
            else:
                parts.append(f"{c}*z^{k}")
        return "UniPolyQ(" + " + ".join(parts) + ")"


def poly_gcd(f: UniPolyQ, g: UniPolyQ) -> UniPolyQ:
    """Monic gcd via the Euclidean algorithm with size normalization."""
    a, b = f.primitive(), g.primitive()
    while not b.is_zero:
        a, b = b, (a % b).primitive()
    if a.is_zero:
        return a
    return a * (1 / a.leading)


def square_free_part(f: UniPolyQ) -> UniPolyQ:
    """f divided by gcd(f, f'): same root set, all roots simple."""
    if f.is_zero:
        raise PreconditionError("zero polynomial")
    if f.degree <= 0:
        return UniPolyQ.one()
    g = poly_gcd(f, f.derivative())
    if g.degree == 0:
        return f
    return f // g


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Iterable[int]) -> int:
    v, prev = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


class SturmChain:
    """Canonical Sturm chain of a square-free polynomial.

    Chain members are rescaled to primitive integer form by positive
    constants, which leaves all sign variation counts unchanged.
    """

    def __init__(self, f: UniPolyQ):
        if f.is_zero:
            raise PreconditionError("zero polynomial")
        chain = [f.primitive()]
        if f.degree >= 1:
            chain.append(f.derivative().primitive())
            while chain[-1].degree > 0:
                r = -(chain[-2] % chain[-1])
                if r.is_zero:
                    break
                chain.append(r.primitive())
        self.chain = tuple(chain)

    def variations_at(self, x: Fraction) -> int:
        return _variations(_sign(p(x)) for p in self.chain)

    def variations_at_neg_inf(self) -> int:
        return _variations(
            _sign(p.leading) * (-1 if p.degree % 2 else 1) for p in self.chain
        )

    def variations_at_pos_inf(self) -> int:
        return _variations(_sign(p.leading) for p in self.chain)

    def count_halfopen(self, lo: Optional[Fraction], hi: Optional[Fraction]) -> int:
        """Distinct roots in (lo, hi]; None bounds mean -inf / +inf."""
        va = self.variations_at(lo) if lo is not None else self.variations_at_neg_inf()
        vb = self.variations_at(hi) if hi is not None else self.variations_at_pos_inf()
        return va - vb


def cauchy_root_bound(f: UniPolyQ) -> Fraction:
    """B with every real root of f strictly inside (-B, B)."""
    if f.is_zero or f.degree < 1:
        return Fraction(1)
    lead = abs(f.leading)
    m = max(abs(c) for c in f.coeffs[:-1])
    return Fraction(1) + m / lead + 1


def count_real_roots(
    f: UniPolyQ,
    lo: Optional[Fraction] = None,
    hi: Optional[Fraction] = None,
    include_lo: bool = False,
    include_hi: bool = False,
) -> int:
    """Exact number of distinct real roots of f in the given interval.

    `lo`/`hi` of None mean the interval is unbounded on that side; the
    endpoint flags select open vs closed.  Repeated roots count once.
    """
    if f.is_zero:
        raise PreconditionError("zero polynomial")
    g = square_free_part(f)
    if g.degree <= 0:
        return 0
    lo = _coerce(lo) if lo is not None else None
    hi = _coerce(hi) if hi is not None else None
    if lo is not None and hi is not None and lo > hi:
        return 0
    if lo is not None and hi is not None and lo == hi:
        return 1 if (include_lo and include_hi and g(lo) == 0) else 0

    extra = 0
    work = g
    if lo is not None and work(lo) == 0:
        if include_lo:
            extra += 1
        work = work // UniPolyQ((-lo, 1))
    if hi is not None and work(hi) == 0:
        if include_hi:
            extra += 1
        work = work // UniPolyQ((-hi, 1))
    if work.degree <= 0:
        return extra
    chain = SturmChain(work)
    # Sturm counts (lo, hi]; endpoints are root-free for `work`, so the
    # half-open count equals the open count here.
    return extra + chain.count_halfopen(lo, hi)


def is_real_rooted(f: UniPolyQ) -> bool:
    """True iff every complex root of f is real (multiplicity-free test)."""
    if f.is_zero:
        raise PreconditionError("zero polynomial")
    g = square_free_part(f)
    if g.degree <= 0:
        return True
    return count_real_roots(g) == g.degree


def roots_all_nonpositive(f: UniPolyQ, strict: bool = False) -> bool:
    """True iff f has no root in (0, inf); with strict=True, none in [0, inf).

    Requires f real-rooted.
    """
    if f.is_zero:
        raise PreconditionError("zero polynomial")
    if not is_real_rooted(f):
        raise PreconditionError("polynomial is not real-rooted")
    return count_real_roots(f, lo=Fraction(0), include_lo=strict) == 0


def roots_all_nonnegative(f: UniPolyQ, strict: bool = False) -> bool:
    """Mirror of roots_all_nonpositive on the other half line."""
    if f.is_zero:
        raise PreconditionError("zero polynomial")
    if not is_real_rooted(f):
        raise PreconditionError("polynomial is not real-rooted")
    return count_real_roots(f, hi=Fraction(0), include_hi=strict) == 0


def _nonroot_point(g: UniPolyQ, a: Fraction, b: Fraction) -> Fraction:
    """A rational point in (a, b) that is not a root of g."""
    n = g.degree + 2
    for k in range(1, n + 1):
        m = a + (b - a) * Fraction(k, n + 1)
        if g(m) != 0:
            return m
    raise AssertionError("unreachable: more roots than degree")


def isolate_real_roots(f: UniPolyQ) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open rational intervals, each containing exactly one
    distinct real root of f, together covering all of them."""
    if f.is_zero:
        raise PreconditionError("zero polynomial")
    g = square_free_part(f)
    if g.degree <= 0:
        return []
    bound = cauchy_root_bound(g)
    chain = SturmChain(g)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound, chain.count_halfopen(-bound, bound))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = _nonroot_point(g, a, b)
        left = chain.count_halfopen(a, m)
        stack.append((a, m, left))
        stack.append((m, b, n - left))
    out.sort()
    return out
