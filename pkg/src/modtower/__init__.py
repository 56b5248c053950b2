"""Exact modular representation workbench over finite fields.

Layers, bottom to top: gf/matrix (GF(q) linear algebra), groups (finite
permutation groups), modules (kG-modules and functors), endo (endomorphism
algebras, indecomposability), relproj (relative projectivity, vertices,
sources), tower (families of finite quotients), cli (text front end).
"""

__version__ = "0.1.0"

from .errors import ModtowerError
from .gf import FieldElement, FieldEmbedding, FiniteField, make_field
from .matrix import Matrix, fitting_split, solve_linear

__all__ = [
    "FieldElement",
    "FieldEmbedding",
    "FiniteField",
    "Matrix",
    "ModtowerError",
    "__version__",
    "fitting_split",
    "make_field",
    "solve_linear",
]
