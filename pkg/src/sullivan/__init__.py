"""Exact computations with Sullivan algebras over the rationals."""

from .algebra import Generator, GeneratorTable, Poly, parse_poly
from .cdga import (
    CdgaMorphism,
    CdgaPresentation,
    FormalAlgebra,
    check_morphism,
    load,
    parse_presentation,
    parse_target,
    validate,
)
from .cohomology import cohomology, cohomology_dims, induced_on_H, xi
from .errors import SullivanError
from .linalg import EchelonBasis, QMatrix, nullspace_basis, rank, rref, solve

__all__ = [
    "CdgaMorphism",
    "CdgaPresentation",
    "EchelonBasis",
    "FormalAlgebra",
    "Generator",
    "GeneratorTable",
    "Poly",
    "QMatrix",
    "SullivanError",
    "check_morphism",
    "cohomology",
    "cohomology_dims",
    "induced_on_H",
    "load",
    "nullspace_basis",
    "parse_poly",
    "parse_presentation",
    "parse_target",
    "rank",
    "rref",
    "solve",
    "validate",
    "xi",
]
