"""stablekit: exact verification toolkit for stable and hyperbolic
polynomials, strong Rayleigh measures, permanent bounds, and
Aztec-diamond placement probabilities."""

__version__ = "0.1.0"

from .polyq import PolyQ, Var
from .unipoly import UniPolyQ
from .linalg import RationalMatrix
from .srmeasure import CubeMeasure
from .stability import Verdict

__all__ = [
    "__version__",
    "PolyQ",
    "Var",
    "UniPolyQ",
    "RationalMatrix",
    "CubeMeasure",
    "Verdict",
]
