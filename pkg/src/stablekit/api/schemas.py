"""Pydantic request/response models mirroring the JSON wire formats.

Rationals travel as decimal-free strings ("num/den" or "num"); polynomial
terms are sorted lexicographically by exponent on output; measures are
sparse maps from state bitstrings (character i = coordinate i) to masses.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from ..graphs import Graph
from ..linalg import RationalMatrix
from ..polyq import PolyQ
from ..srmeasure import CubeMeasure
from ..unipoly import UniPolyQ


def _check_rational(s: str) -> str:
    Fraction(s)  # raises ValueError on malformed input
    return s


class PolyTerm(BaseModel):
    exp: list[int]
    coeff: str

    _coeff_ok = field_validator("coeff")(_check_rational)


class PolynomialModel(BaseModel):
    d: int = Field(ge=0)
    terms: list[PolyTerm]

    def to_poly(self) -> PolyQ:
        return PolyQ(self.d, {tuple(t.exp): Fraction(t.coeff) for t in self.terms})

    @classmethod
    def from_poly(cls, p: PolyQ) -> "PolynomialModel":
        return cls(**p.to_json())


class UnivariateModel(BaseModel):
    coeffs: list[str]

    _coeffs_ok = field_validator("coeffs")(lambda v: [_check_rational(s) for s in v])

    def to_poly(self) -> UniPolyQ:
        return UniPolyQ(tuple(Fraction(s) for s in self.coeffs))

    @classmethod
    def from_poly(cls, f: UniPolyQ) -> "UnivariateModel":
        return cls(**f.to_json())


class MatrixModel(BaseModel):
    rows: list[list[str]]

    _rows_ok = field_validator("rows")(
        lambda v: [[_check_rational(s) for s in row] for row in v]
    )

    def to_matrix(self) -> RationalMatrix:
        return RationalMatrix([[Fraction(s) for s in row] for row in self.rows])

    @classmethod
    def from_matrix(cls, m: RationalMatrix) -> "MatrixModel":
        return cls(**m.to_json())


class GraphModel(BaseModel):
    n: int = Field(ge=1)
    edges: list[tuple[int, int, str]]

    def to_graph(self) -> Graph:
        return Graph(self.n, [(i, j, Fraction(w)) for i, j, w in self.edges])


class MeasureModel(BaseModel):
    d: int = Field(ge=0)
    probs: dict[str, str]

    def to_measure(self) -> CubeMeasure:
        return CubeMeasure.from_json({"d": self.d, "probs": self.probs})

    @classmethod
    def from_measure(cls, mu: CubeMeasure) -> "MeasureModel":
        return cls(**mu.to_json())


# -- per-endpoint requests -------------------------------------------------


class StabilityRequest(BaseModel):
    polynomial: PolynomialModel
    trials: int = 200
    seed: int = 0
    box: int = 8


class HyperbolicityRequest(BaseModel):
    polynomial: PolynomialModel
    direction: list[str]
    trials: int = 200
    seed: int = 0
    box: int = 8


class ConeRequest(BaseModel):
    polynomial: PolynomialModel
    xi: list[str]
    x: list[str]


class NewtonRequest(BaseModel):
    coeffs: list[str]


class PFRequest(BaseModel):
    coeffs: list[str]
    max_minor: int = 4


class MultiplierRequest(BaseModel):
    lam: list[str]
    n_max: int = 8


class MatchingsRequest(BaseModel):
    weights: MatrixModel


class ForestsRequest(BaseModel):
    graph: GraphModel


class SrAuditRequest(BaseModel):
    measure: MeasureModel


class SrClosureRequest(BaseModel):
    measure: MeasureModel
    seed: int = 0
    length: int = 5
    trials: int = 200


class ExclusionRequest(BaseModel):
    measure: MeasureModel
    rates: MatrixModel
    t: str = "1"
    steps: int = 64

    _t_ok = field_validator("t")(_check_rational)


class DetMeasureRequest(BaseModel):
    kernel: MatrixModel


class CouplingRequest(BaseModel):
    source: MeasureModel
    target: MeasureModel
    relation: str = "ge"


class PermanentRequest(BaseModel):
    matrix: MatrixModel


class CapacityRequest(BaseModel):
    polynomial: PolynomialModel
    tol: float = 1e-8


class GurvitsRequest(BaseModel):
    matrix: MatrixModel
    tol: float = 1e-8


class BregmanRequest(BaseModel):
    matrix: MatrixModel


class MmcptRequest(BaseModel):
    matrix: MatrixModel
    trials: int = 100
    seed: int = 0


class BmvRequest(BaseModel):
    a: MatrixModel
    b: MatrixModel
    n: int = Field(ge=1, le=10)


class AztecRequest(BaseModel):
    t_max: int = Field(ge=1, le=400)
    rays: Optional[list[tuple[float, float]]] = None
    t_list: Optional[list[int]] = None
