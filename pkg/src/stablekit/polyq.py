"""Exact sparse multivariate polynomials over the rationals.

Coefficients are `fractions.Fraction` throughout and every operation is a
pure function returning a new value.  Floating point enters only through
`eval_complex`, which converts each coefficient exactly once.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .errors import PreconditionError
from .unipoly import UniPolyQ

Rational = Fraction
RationalLike = Union[Fraction, int, str]

Monomial = tuple  # exponent vector, length = ambient variable count


def rat(x: RationalLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Var(NamedTuple):
    """Substitution target marker: a variable index rather than a constant."""

    index: int


class PolyQ:
    """Sparse multivariate polynomial in d variables with Fraction coefficients.

    Zero coefficients are never stored; all exponent vectors have length d.
    Instances are immutable by convention.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Optional[Mapping[Monomial, RationalLike]] = None):
        if d < 0:
            raise PreconditionError("variable count must be nonnegative")
        self.d = d
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != d:
                    raise PreconditionError(
                        f"monomial length {len(exps)} does not match d={d}"
                    )
                if any(e < 0 for e in exps):
                    raise PreconditionError("negative exponent")
                c = rat(c)
                if c:
                    acc = clean.get(exps)
                    if acc is None:
                        clean[exps] = c
                    else:
                        acc = acc + c
                        if acc:
                            clean[exps] = acc
                        else:
                            del clean[exps]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> "PolyQ":
        return cls(d)

    @classmethod
    def constant(cls, c: RationalLike, d: int) -> "PolyQ":
        return cls(d, {(0,) * d: rat(c)})

    @classmethod
    def one(cls, d: int) -> "PolyQ":
        return cls.constant(1, d)

    @classmethod
    def variable(cls, j: int, d: int) -> "PolyQ":
        if not 0 <= j < d:
            raise PreconditionError("variable index out of range")
        e = [0] * d
        e[j] = 1
        return cls(d, {tuple(e): Fraction(1)})

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, j: int) -> int:
        self._check_index(j)
        return max((e[j] for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def is_multi_affine(self) -> bool:
        return all(max(e, default=0) <= 1 for e in self.terms)

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def _check_index(self, j: int) -> None:
        if not 0 <= j < self.d:
            raise PreconditionError(f"variable index {j} out of range for d={self.d}")

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyQ) and self.d == other.d and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.d, frozenset(self.terms.items())))

    def __neg__(self) -> "PolyQ":
        return PolyQ(self.d, {e: -c for e, c in self.terms.items()})

    def __add__(self, other: "PolyQ") -> "PolyQ":
        self._check_same_d(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return PolyQ(self.d, out)

    def __sub__(self, other: "PolyQ") -> "PolyQ":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PolyQ):
            self._check_same_d(other)
            out: dict[Monomial, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    s = out.get(e, Fraction(0)) + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        out.pop(e, None)
            return PolyQ(self.d, out)
        c = rat(other)
        return PolyQ(self.d, {e: v * c for e, v in self.terms.items()})

    __rmul__ = __mul__

    def _check_same_d(self, other: "PolyQ") -> None:
        if self.d != other.d:
            raise PreconditionError(
                f"dimension mismatch: {self.d} vs {other.d} variables"
            )

    # -- evaluation ----------------------------------------------------------

    def eval_rational(self, point: Sequence[RationalLike]) -> Fraction:
        if len(point) != self.d:
            raise PreconditionError("point length does not match variable count")
        pt = [rat(x) for x in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(pt, exps):
                if e:
                    v *= x**e
            total += v
        return total

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "terms": [
                {"exp": list(e), "coeff": str(c)}
                for e, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolyQ":
        d = int(data["d"])
        terms = {tuple(t["exp"]): Fraction(t["coeff"]) for t in data["terms"]}
        return cls(d, terms)

    def __repr__(self) -> str:
        if self.is_zero:
            return "PolyQ(0)"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"z{j}" if k == 1 else f"z{j}^{k}" for j, k in enumerate(e) if k
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "PolyQ(" + " + ".join(parts) + ")"


# --------------------------------------------------------------------------
# Structural transforms
# --------------------------------------------------------------------------


def eval_complex(p: PolyQ, point: Sequence[complex]) -> complex:
    """Evaluate p at a complex point (coefficients rounded once to float)."""
    if len(point) != p.d:
        raise PreconditionError("point length does not match variable count")
    pt = [complex(z) for z in point]
    for z in pt:
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise PreconditionError("complex point entries must be finite")
    # cache powers per variable
    max_deg = [p.degree_in(j) for j in range(p.d)]
    powers = []
    for j in range(p.d):
        row = [1 + 0j]
        for _ in range(max_deg[j]):
            row.append(row[-1] * pt[j])
        powers.append(row)
    total = 0 + 0j
    for exps, c in p.terms.items():
        v = float(c) + 0j
        for j, e in enumerate(exps):
            if e:
                v *= powers[j][e]
        total += v
    return total


def differentiate(p: PolyQ, j: int) -> PolyQ:
    """Formal partial derivative with respect to variable j."""
    p._check_index(j)
    out: dict[Monomial, Fraction] = {}
    for exps, c in p.terms.items():
        e = exps[j]
        if e:
            ne = exps[:j] + (e - 1,) + exps[j + 1 :]
            out[ne] = out.get(ne, Fraction(0)) + c * e
    return PolyQ(p.d, out)


def substitute(p: PolyQ, j: int, target: Union[RationalLike, Var]) -> PolyQ:
    """Set variable j to a rational constant, or to another variable (Var(i)).

    The variable count is unchanged; the substituted variable simply no
    longer occurs.
    """
    p._check_index(j)
    out: dict[Monomial, Fraction] = {}
    if isinstance(target, Var):
        i = target.index
        p._check_index(i)
        for exps, c in p.terms.items():
            e = list(exps)
            if j != i:
                e[i] += e[j]
                e[j] = 0
            ne = tuple(e)
            s = out.get(ne, Fraction(0)) + c
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
    else:
        value = rat(target)
        for exps, c in p.terms.items():
            e = exps[j]
            scaled = c * value**e if e else c
            if not scaled:
                continue
            ne = exps[:j] + (0,) + exps[j + 1 :]
            s = out.get(ne, Fraction(0)) + scaled
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
    return PolyQ(p.d, out)


def dilate(p: PolyQ, b: Sequence[RationalLike]) -> PolyQ:
    """Coordinatewise scaling z_j -> b_j * z_j with nonnegative b_j."""
    if len(b) != p.d:
        raise PreconditionError("scale vector length does not match d")
    bs = [rat(x) for x in b]
    if any(x < 0 for x in bs):
        raise PreconditionError("dilation requires nonnegative scales")
    out: dict[Monomial, Fraction] = {}
    for exps, c in p.terms.items():
        v = c
        for x, e in zip(bs, exps):
            if e:
                v *= x**e
        if v:
            out[exps] = v
    return PolyQ(p.d, out)


def restrict_line(
    p: PolyQ, v: Sequence[RationalLike], u: Sequence[RationalLike]
) -> UniPolyQ:
    """The exact univariate polynomial t -> p(v + t*u)."""
    if len(v) != p.d or len(u) != p.d:
        raise PreconditionError("vector length does not match variable count")
    vs = [rat(x) for x in v]
    us = [rat(x) for x in u]
    # powers of (v_j + u_j t), cached per variable
    cache: list[list[UniPolyQ]] = [[UniPolyQ.one()] for _ in range(p.d)]
    lines = [UniPolyQ((vs[j], us[j])) for j in range(p.d)]
    acc = UniPolyQ()
    for exps, c in p.terms.items():
        term = UniPolyQ((c,))
        for j, e in enumerate(exps):
            if not e:
                continue
            row = cache[j]
            while len(row) <= e:
                row.append(row[-1] * lines[j])
            term = term * row[e]
        acc = acc + term
    return acc


def shift(p: PolyQ, x: Sequence[RationalLike]) -> PolyQ:
    """Taylor shift: the polynomial z -> p(x + z)."""
    if len(x) != p.d:
        raise PreconditionError("shift vector length does not match d")
    xs = [rat(v) for v in x]
    terms = dict(p.terms)
    for j in range(p.d):
        if xs[j] == 0:
            continue
        out: dict[Monomial, Fraction] = {}
        for exps, c in terms.items():
            e = exps[j]
            if e == 0:
                out[exps] = out.get(exps, Fraction(0)) + c
                continue
            for k in range(e + 1):
                coeff = c * math.comb(e, k) * xs[j] ** (e - k)
                ne = exps[:j] + (k,) + exps[j + 1 :]
                s = out.get(ne, Fraction(0)) + coeff
                if s:
                    out[ne] = s
                else:
                    out.pop(ne, None)
        terms = out
    return PolyQ(p.d, terms)


def homogenize(p: PolyQ, degree: Optional[int] = None) -> PolyQ:
    """Homogenization in d+1 variables: z_{d}^m * p(z_0/z_d, ..., z_{d-1}/z_d).

    `degree` may force a homogeneity degree >= total_degree(p); substituting
    1 for the last variable recovers p either way.
    """
    if p.is_zero:
        raise PreconditionError("zero polynomial")
    m = p.total_degree()
    if degree is not None:
        if degree < m:
            raise PreconditionError("requested degree below total degree")
        m = degree
    out = {}
    for exps, c in p.terms.items():
        out[exps + (m - sum(exps),)] = c
    return PolyQ(p.d + 1, out)


def hom_parts(p: PolyQ) -> tuple[PolyQ, PolyQ]:
    """(top, bottom): the highest and lowest total-degree homogeneous parts."""
    if p.is_zero:
        raise PreconditionError("zero polynomial")
    degs = [sum(e) for e in p.terms]
    top_deg, low_deg = max(degs), min(degs)
    top = {e: c for e, c in p.terms.items() if sum(e) == top_deg}
    low = {e: c for e, c in p.terms.items() if sum(e) == low_deg}
    return PolyQ(p.d, top), PolyQ(p.d, low)


def localize(p: PolyQ, x: Sequence[RationalLike]) -> PolyQ:
    """Lowest-degree homogeneous part of p shifted to base point x."""
    return hom_parts(shift(p, x))[1]


def polarize_blocks(p: PolyQ, block_sizes: Optional[Sequence[int]] = None) -> tuple:
    """Clone-variable index blocks used by `polarize` (one block per variable)."""
    if p.is_zero:
        raise PreconditionError("zero polynomial")
    if block_sizes is None:
        sizes = [max(1, p.degree_in(j)) for j in range(p.d)]
    else:
        sizes = [int(n) for n in block_sizes]
        if len(sizes) != p.d:
            raise PreconditionError("block size vector length does not match d")
        for j, n in enumerate(sizes):
            if n < max(1, p.degree_in(j)):
                raise PreconditionError(
                    f"block size {n} below degree of variable {j}"
                )
    blocks = []
    base = 0
    for n in sizes:
        blocks.append(tuple(range(base, base + n)))
        base += n
    return tuple(blocks)


def _elementary_symmetric(indices: Sequence[int], r: int, total: int) -> PolyQ:
    import itertools

    out = {}
    for combo in itertools.combinations(indices, r):
        e = [0] * total
        for i in combo:
            e[i] = 1
        out[tuple(e)] = Fraction(1)
    return PolyQ(total, out)


def polarize(p: PolyQ, block_sizes: Optional[Sequence[int]] = None) -> PolyQ:
    """Multi-affine polarization: z_j^r -> e_r(clones of j) / C(n_j, r).

    The result is symmetric within each clone block and diagonalizes back
    to p; `polarize_blocks` reports the clone index blocks.
    """
    blocks = polarize_blocks(p, block_sizes)
    total = sum(len(b) for b in blocks)
    acc = PolyQ.zero(total)
    for exps, c in p.terms.items():
        term = PolyQ.constant(c, total)
        for j, e in enumerate(exps):
            if e == 0:
                continue
            n = len(blocks[j])
            factor = _elementary_symmetric(blocks[j], e, total) * Fraction(
                1, math.comb(n, e)
            )
            term = term * factor
        acc = acc + term
    return acc


def depolarize(q: PolyQ, blocks: Sequence[Sequence[int]]) -> PolyQ:
    """Diagonalize clone blocks back to one variable per block."""
    d = len(blocks)
    out: dict[Monomial, Fraction] = {}
    for exps, c in q.terms.items():
        r = tuple(sum(exps[i] for i in block) for block in blocks)
        s = out.get(r, Fraction(0)) + c
        if s:
            out[r] = s
        else:
            out.pop(r, None)
    return PolyQ(d, out)


def multi_affine_part(p: PolyQ) -> PolyQ:
    """Drop every term in which some variable has exponent >= 2."""
    return PolyQ(
        p.d, {e: c for e, c in p.terms.items() if all(x <= 1 for x in e)}
    )
