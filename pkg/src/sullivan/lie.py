"""Homotopy dimensions and the fundamental Lie algebra of a minimal presentation.

The Lie algebra is dual to the degree-1 generators.  Writing
``d v_k = sum_{i<j} a_ij^k v_i v_j`` for the quadratic part, the bracket is
pinned as ``[x_i, x_j] = -sum_k a_ij^k x_k``.  Any consistent sign would do;
antisymmetry and Jacobi are what the tests check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cdga import CdgaPresentation
from .errors import NotMinimalError, SullivanError
from .linalg import EchelonBasis


@dataclass
class HomotopyTable:
    dims: dict  # n >= 2 -> dim V^n
    degree1_dim: int
    degree1_stages: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "pi": {str(n): d for n, d in sorted(self.dims.items())},
            "degree1": {
                "dim": self.degree1_dim,
                "stages": {str(k): v for k, v in sorted(self.degree1_stages.items())},
            },
        }


def homotopy_dims(p: CdgaPresentation, max_degree: int) -> HomotopyTable:
    if not p.is_minimal():
        raise NotMinimalError("homotopy dimensions are read off minimal presentations only")
    dims = {n: 0 for n in range(2, max_degree + 1)}
    d1, stages = 0, {}
    for g in p.table:
        if g.degree == 1:
            d1 += 1
            if g.stage is not None:
                stages[g.stage] = stages.get(g.stage, 0) + 1
        elif g.degree <= max_degree:
            dims[g.degree] += 1
    return HomotopyTable(dims, d1, stages)


@dataclass
class LieAlgebraData:
    """Finite-dimensional Lie algebra given by structure constants.

    ``brackets[(i, j)]`` for ``i < j`` is the coordinate tuple of ``[x_i, x_j]``.
    """

    names: list
    brackets: dict

    @property
    def dim(self) -> int:
        return len(self.names)

    def basis_vector(self, i: int) -> tuple:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def bracket_basis(self, i: int, j: int) -> tuple:
        if i == j:
            return (Fraction(0),) * self.dim
        if i < j:
            return self.brackets.get((i, j), (Fraction(0),) * self.dim)
        return tuple(-c for c in self.brackets.get((j, i), (Fraction(0),) * self.dim))

    def bracket(self, u, v) -> tuple:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b or i == j:
                    continue
                for k, c in enumerate(self.bracket_basis(i, j)):
                    if c:
                        out[k] += a * b * c
        return tuple(out)

    def jacobi_violations(self) -> list:
        bad = []
        n = self.dim
        e = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    s = [Fraction(0)] * n
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        t = self.bracket(self.bracket(e[a], e[b]), e[c])
                        s = [x + y for x, y in zip(s, t)]
                    if any(s):
                        bad.append((i, j, k))
        return bad

    def permuted(self, perm: list) -> LieAlgebraData:
        """Same algebra with basis element ``perm[i]`` moved to position ``i``."""
        inv = {old: new for new, old in enumerate(perm)}
        br = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                v = self.bracket_basis(perm[a], perm[b])
                w = [Fraction(0)] * self.dim
                for k, c in enumerate(v):
                    w[inv[k]] = c
                if any(w):
                    br[(a, b)] = tuple(w)
        return LieAlgebraData([self.names[p] for p in perm], br)

    def brackets_json(self) -> list:
        return [[i, j, [str(c) for c in v]] for (i, j), v in sorted(self.brackets.items())]


def fundamental_lie(p: CdgaPresentation) -> LieAlgebraData:
    if not p.is_minimal():
        raise NotMinimalError("the fundamental Lie algebra needs a minimal presentation")
    deg1 = p.table.indices_of_degree(1)
    pos = {g: a for a, g in enumerate(deg1)}
    n = len(deg1)
    br: dict = {}
    for k in deg1:
        for m, c in p.differential_of(k).terms.items():
            if len(m) == 2 and all(i in pos and e == 1 for i, e in m):
                i, j = pos[m[0][0]], pos[m[1][0]]
                row = br.setdefault((i, j), [Fraction(0)] * n)
                row[pos[k]] -= c
    brackets = {key: tuple(v) for key, v in br.items() if any(v)}
    L = LieAlgebraData([p.table[g].name for g in deg1], brackets)
    if L.jacobi_violations():
        raise SullivanError(
            "Jacobi identity fails on the degree-1 quadratic part; the truncation is too small")
    return L


@dataclass
class LcsTable:
    rows: list  # (n, dim L^n / L^{n+1})
    nilpotency_index: int | None

    def to_json(self) -> list:
        return [[n, d] for n, d in self.rows]


def lcs_terms(L: LieAlgebraData, depth: int) -> list[EchelonBasis]:
    """Echelon bases of L^1, ..., L^{depth+1}."""
    terms = []
    cur = EchelonBasis(L.dim)
    for i in range(L.dim):
        cur.add(L.basis_vector(i))
    terms.append(cur)
    for _ in range(depth):
        nxt = EchelonBasis(L.dim)
        for y in cur.rows():
            for i in range(L.dim):
                nxt.add(L.bracket(L.basis_vector(i), y))
        terms.append(nxt)
        cur = nxt
    return terms


def lcs_quotients(L: LieAlgebraData, depth: int) -> LcsTable:
    terms = lcs_terms(L, depth)
    rows = [(n, len(terms[n - 1]) - len(terms[n])) for n in range(1, depth + 1)]
    index = None
    for n in range(0, depth + 1):
        if len(terms[n]) == 0:
            index = n
            break
    return LcsTable(rows, index)


def abelianization_dim(L: LieAlgebraData) -> int:
    eb = EchelonBasis(L.dim)
    for v in L.brackets.values():
        eb.add(v)
    return L.dim - len(eb)
