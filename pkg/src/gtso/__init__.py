"""Exact Gelfand-Tsetlin machinery for quantized and classical orthogonal
algebras: pattern combinatorics, finite-dimensional and generic module
constructions with rationalized coefficients, skew-group-algebra
embeddings, central-element eigenvalues, and mechanical verification of
the identities tying them together."""

from .halfint import HalfInt
from .patterns import GTPattern, enumerate_basis, l_coords, shift, validate
from .scalars import CLASSICAL, QUANTUM, RatScalar, qnum

__all__ = [
    "HalfInt", "GTPattern", "enumerate_basis", "l_coords", "shift", "validate",
    "RatScalar", "qnum", "QUANTUM", "CLASSICAL",
]
