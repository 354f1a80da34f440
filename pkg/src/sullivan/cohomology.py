"""Degreewise cohomology, induced maps, and the projection to generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Poly, wordlength_component
from .cdga import CdgaMorphism, CdgaPresentation
from .errors import NotCocycle, NotMinimalError
from .linalg import EchelonBasis, QMatrix, nullspace_basis


@dataclass
class CohomologyResult:
    """H^n of an algebra with a canonical basis of representative cocycles.

    Representatives are reduced against the coboundaries (zero in every pivot
    column of the coboundary echelon form) and then put in reduced echelon
    form among themselves, so they depend only on the algebra and the
    monomial order.
    """

    degree: int
    dim: int
    representatives: list
    coboundary_dim: int
    basis: list = field(repr=False)
    _boundaries: EchelonBasis = field(repr=False)
    _classes: EchelonBasis = field(repr=False)
    _table: object = field(repr=False)
    _dmat: QMatrix = field(repr=False)

    def is_cocycle(self, x: Poly) -> bool:
        return x.is_zero() or not any(self._dmat.apply(x.coords(self.basis)))

    def class_coords(self, x: Poly) -> tuple:
        """Coordinates of the class of cocycle ``x`` in the representative basis."""
        if x.is_zero():
            return tuple(Fraction(0) for _ in range(self.dim))
        if x.degree() != self.degree:
            raise NotCocycle(f"{x} is not of degree {self.degree}")
        vec = x.coords(self.basis)
        if any(self._dmat.apply(vec)):
            raise NotCocycle(f"{x} is not a cocycle")
        rem = self._boundaries.reduce(vec)
        coords = self._classes.coordinates(rem)
        assert coords is not None
        return coords

    def class_of(self, coords) -> Poly:
        out = Poly.zero(self._table)
        for c, rep in zip(coords, self.representatives):
            if c:
                out = out + rep.scale(c)
        return out

    def normal_form(self, x: Poly) -> Poly:
        """Canonical representative of the class of ``x``."""
        return self.class_of(self.class_coords(x))

    def is_coboundary(self, x: Poly) -> bool:
        return not any(self.class_coords(x))

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "dim": self.dim,
            "representatives": [str(r) for r in self.representatives],
        }


def cohomology(alg, n: int) -> CohomologyResult:
    cache = alg.__dict__.setdefault("_hcache", {})
    if n in cache:
        return cache[n]
    dn = alg.differential_matrix(n)
    basis = alg.basis(n)
    boundaries = EchelonBasis(len(basis))
    if n > 0:
        dprev = alg.differential_matrix(n - 1)
        for j in range(dprev.cols):
            col = dprev.column(j)
            if any(col):
                boundaries.add(col)
    classes = EchelonBasis(len(basis))
    for z in nullspace_basis(dn):
        classes.add(boundaries.reduce(z))
    reps = [Poly.from_coords(alg.table, basis, v) for v in classes.rows()]
    res = CohomologyResult(n, len(reps), reps, len(boundaries), basis, boundaries, classes,
                           alg.table, dn)
    cache[n] = res
    return res


def cohomology_dims(alg, top: int) -> list[int]:
    return [cohomology(alg, n).dim for n in range(top + 1)]


def xi(p: CdgaPresentation, c, n: int) -> Poly:
    """Word-length-one part of a class of a minimal presentation."""
    if not isinstance(p, CdgaPresentation) or not p.is_minimal():
        raise NotMinimalError("the projection to generators needs a minimal presentation")
    h = cohomology(p, n)
    if isinstance(c, int):
        rep = h.representatives[c]
    else:
        if not c.is_zero() and not h.is_cocycle(c):
            raise NotCocycle(f"{c} is not a cocycle")
        rep = c
    return wordlength_component(rep, 1)


def induced_on_H(f: CdgaMorphism, n: int) -> QMatrix:
    hs = cohomology(f.source, n)
    ht = cohomology(f.target, n)
    cols = [ht.class_coords(f.apply(rep)) for rep in hs.representatives]
    return QMatrix.from_columns(cols, ht.dim) if cols else QMatrix(ht.dim, 0)
