"""Exact modular representation theory of the periplectic Lie superalgebra p(n).

Subpackages build the algebra over GF(p), enumerate weights and p-characters,
construct reduced-enveloping-algebra modules (baby Vermas, simple modules over
the even part, Kac modules), solve for maximal vectors, and compute full
composition series with machine-checked certificates.
"""

__version__ = "0.1.0"

from .field import FieldElement, FieldParams, Matrix, NoSolutionError, RowSpace, SparseOp

__all__ = [
    "FieldParams",
    "FieldElement",
    "Matrix",
    "NoSolutionError",
    "RowSpace",
    "SparseOp",
    "__version__",
]
