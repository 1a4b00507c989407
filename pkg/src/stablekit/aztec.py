"""Exact placement probabilities for the Aztec diamond and the arctan
scaling limit.

The generating function in use here is

    F(X, Y, Z) = (Z/2) / ((1 - (c/2) Z + Z^2) (1 - Y Z)),
    c = X + 1/X + Y + 1/Y,

with the coefficient of Z in the quadratic factor HALVED relative to the
commonly printed form 1 - cZ + Z^2.  The printed form does not vanish at
(1, 1, 1), while the singularity structure and the localized quadratic
Z^2 - (U^2 + V^2)/2 require a zero there; only with the halved form do the
extracted coefficients lie in [0, 1] and match the known central value
1/4.  See the README for the full note.

Coefficients are computed as exact integers over the power-of-two
denominator 2^t per row, so a full table to t = 400 stays affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import PreconditionError, SizeGuardError

T_MAX_LIMIT = 400


def _mul_c(poly: dict) -> dict:
    """Multiply an integer Laurent polynomial in (X, Y) by
    c = X + X^-1 + Y + Y^-1."""
    out: dict[tuple[int, int], int] = {}
    for (r, s), v in poly.items():
        for dr, ds in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            key = (r + dr, s + ds)
            out[key] = out.get(key, 0) + v
    return {k: v for k, v in out.items() if v}


def aztec_rows(t_max: int) -> Iterator[tuple[int, dict]]:
    """Yield (t, row) for t = 1..t_max, where row maps (r, s) to the integer
    numerator of a_{r,s,t} over denominator 2^t.

    Recurrences (all integer): U_t = c U_{t-1} - 4 U_{t-2} encodes
    u_t = (c/2) u_{t-1} - u_{t-2} scaled by 2^t, and V_t = U_t + 2 Y V_{t-1}
    accumulates the geometric 1/(1 - YZ) factor; row t is V_{t-1} / 2^t.
    """
    if t_max < 1:
        raise PreconditionError("t_max must be >= 1")
    if t_max > T_MAX_LIMIT:
        raise SizeGuardError(f"aztec table limited to t_max <= {T_MAX_LIMIT}")
    u_prev: dict[tuple[int, int], int] = {}  # U_{t-1} (starts as U_{-1} = 0)
    u_cur: dict[tuple[int, int], int] = {(0, 0): 1}  # U_0 = 1
    v_cur: dict[tuple[int, int], int] = {(0, 0): 1}  # V_0 = U_0
    for t in range(1, t_max + 1):
        yield t, dict(v_cur)
        if t == t_max:
            return
        u_next = _mul_c(u_cur)
        for key, v in u_prev.items():
            nv = u_next.get(key, 0) - 4 * v
            if nv:
                u_next[key] = nv
            else:
                u_next.pop(key, None)
        u_prev, u_cur = u_cur, u_next
        v_next = dict(u_cur)
        for (r, s), v in v_cur.items():
            key = (r, s + 1)
            nv = v_next.get(key, 0) + 2 * v
            if nv:
                v_next[key] = nv
            else:
                v_next.pop(key, None)
        v_cur = v_next


@dataclass(frozen=True)
class AztecTable:
    """Rows of exact placement probabilities: row t holds the integer
    numerators of a_{.,.,t} over denominator 2^t."""

    t_max: int
    rows: tuple  # rows[t-1]: dict (r, s) -> int numerator

    def value(self, r: int, s: int, t: int) -> Fraction:
        if not 1 <= t <= self.t_max:
            raise PreconditionError(f"t must be between 1 and {self.t_max}")
        return Fraction(self.rows[t - 1].get((r, s), 0), 1 << t)

    def row_items(self, t: int) -> list[tuple[int, int, Fraction]]:
        if not 1 <= t <= self.t_max:
            raise PreconditionError(f"t must be between 1 and {self.t_max}")
        den = 1 << t
        return [
            (r, s, Fraction(num, den))
            for (r, s), num in sorted(self.rows[t - 1].items())
        ]


def aztec_coeffs(t_max: int) -> AztecTable:
    """Exact table of a_{r,s,t} for 1 <= t <= t_max."""
    return AztecTable(t_max, tuple(row for _, row in aztec_rows(t_max)))


def arctan_limit(r: float, s: float, t: float) -> float:
    """The scaling limit arctan(sqrt(t^2 - 2r^2 - 2s^2) / (t - 2s)) / pi,
    with the branch shifted into (0, 1) when t - 2s < 0.

    Defined strictly inside the cone t^2 > 2 r^2 + 2 s^2, t > 0.
    """
    disc = t * t - 2.0 * r * r - 2.0 * s * s
    if t <= 0 or disc <= 0:
        raise PreconditionError("(r, s, t) outside the cone t^2 > 2r^2 + 2s^2")
    return math.atan2(math.sqrt(disc), t - 2.0 * s) / math.pi


def compare_report(
    rays: Sequence[tuple], t_list: Sequence[int], table: Optional[AztecTable] = None
) -> dict:
    """Exact-vs-limit comparison along rays (alpha, beta): at each t the
    lattice point is (round(alpha t), round(beta t)), which must keep
    r + s + t odd and stay inside the cone.

    Each ray's rows carry the exact value, its float rendering, the limit,
    and the absolute error; a per-ray flag records whether the error is
    strictly decreasing along the given t values.
    """
    ts = list(t_list)
    if table is None and ts:
        table = aztec_coeffs(max(ts))
    out = {"rays": []}
    for alpha, beta in rays:
        af, bf = float(alpha), float(beta)
        if 2 * af * af + 2 * bf * bf >= 1:
            raise PreconditionError("ray direction outside the cone")
        rows = []
        errors = []
        for t in ts:
            r = round(af * t)
            s = round(bf * t)
            if (r + s + t) % 2 == 0:
                raise PreconditionError(
                    f"r + s + t even at t={t}; pick t values of the right parity"
                )
            exact = table.value(r, s, t)
            limit = arctan_limit(r, s, t)
            err = abs(float(exact) - limit)
            errors.append(err)
            rows.append(
                {
                    "t": t,
                    "r": r,
                    "s": s,
                    "exact": str(exact),
                    "float": float(exact),
                    "limit": limit,
                    "abs_error": err,
                }
            )
        out["rays"].append(
            {
                "alpha": af,
                "beta": bf,
                "rows": rows,
                "monotone_decreasing": all(
                    e2 < e1 for e1, e2 in zip(errors, errors[1:])
                ),
            }
        )
    return out


def report_csv(report: dict) -> str:
    """CSV rendering: t, r, s, exact value, float value, limit, abs error."""
    lines = ["t,r,s,exact,float,limit,abs_error"]
    for ray in report["rays"]:
        for row in ray["rows"]:
            lines.append(
                "{t},{r},{s},{exact},{float!r},{limit!r},{abs_error!r}".format(**row)
            )
    return "\n".join(lines) + "\n"
