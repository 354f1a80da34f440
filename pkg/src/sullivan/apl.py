"""Polynomial differential forms on standard simplices.

A form on the n-simplex is stored with ``t_0`` eliminated through
``t_0 = 1 - t_1 - ... - t_n``: each term is a monomial in ``t_1..t_n`` times an
ascending wedge of ``dt_1..dt_n``.  Faces and degeneracies are pullbacks
along the usual coface/codegeneracy substitutions.

Integration over the n-simplex carries the sign ``s_n = (-1)^(n(n+1)/2)``,
so that integrating ``dt_1`` over the 1-simplex gives -1.  With that sign the
integration map is a cochain map for the coboundary
``(δc)(σ) = (-1)^n Σ_i (-1)^i c(∂_i σ)`` on n-simplices; the tests check
this on standard simplices up to dimension 3.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path

from .algebra import Poly
from .cdga import CdgaPresentation
from .errors import IncompatibleFamily, ParseError, SullivanError

# term key: (exponents of t_1..t_n, ascending tuple of dt indices in 1..n)


def _merge_dt(a: tuple, b: tuple):
    """Sign and sorted union of two wedge words, or None if they overlap."""
    if set(a) & set(b):
        return None
    seq = list(a) + list(b)
    sign = 1
    # count inversions
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


class PolyForm:
    """Element of the algebra of polynomial forms on the n-simplex."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        if n < 0:
            raise ValueError("simplex dimension must be non-negative")
        self.n = n
        clean = {}
        for (exps, dts), c in (terms or {}).items():
            c = Fraction(c)
            if c:
                if len(exps) != n or any(not 1 <= k <= n for k in dts):
                    raise ValueError(f"term {(exps, dts)} does not live on the {n}-simplex")
                clean[(tuple(exps), tuple(dts))] = c
        self.terms = clean

    # -- constructors --
    @classmethod
    def zero(cls, n: int) -> PolyForm:
        return cls(n)

    @classmethod
    def constant(cls, n: int, c) -> PolyForm:
        return cls(n, {((0,) * n, ()): c})

    @classmethod
    def t(cls, n: int, k: int) -> PolyForm:
        """The barycentric coordinate t_k, with t_0 expanded."""
        if not 0 <= k <= n:
            raise ValueError(f"t{k} does not exist on the {n}-simplex")
        if k == 0:
            out = {((0,) * n, ()): Fraction(1)}
            for j in range(1, n + 1):
                out[(tuple(int(i == j - 1) for i in range(n)), ())] = Fraction(-1)
            return cls(n, out)
        return cls(n, {(tuple(int(i == k - 1) for i in range(n)), ()): 1})

    @classmethod
    def dt(cls, n: int, k: int) -> PolyForm:
        return form_d(cls.t(n, k))

    # -- queries --
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(dts) for _, dts in self.terms}

    def degree(self) -> int | None:
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise SullivanError("form is not homogeneous")
        return degs.pop()

    def __eq__(self, other):
        if isinstance(other, PolyForm):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- arithmetic --
    def _same(self, other: PolyForm):
        if self.n != other.n:
            raise SullivanError(f"forms live on simplices of different dimension ({self.n}, {other.n})")

    def __add__(self, other: PolyForm) -> PolyForm:
        if isinstance(other, int | Fraction):
            other = PolyForm.constant(self.n, other)
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return PolyForm(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> PolyForm:
        return PolyForm(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: PolyForm) -> PolyForm:
        return self + (-other)

    def scale(self, c) -> PolyForm:
        c = Fraction(c)
        return PolyForm(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> PolyForm:
        if isinstance(other, int | Fraction):
            return self.scale(other)
        self._same(other)
        out: dict = {}
        for (ea, da), ca in self.terms.items():
            for (eb, db), cb in other.terms.items():
                merged = _merge_dt(da, db)
                if merged is None:
                    continue
                sign, dts = merged
                # moving the dt's of ``a`` past the 0-form part of ``b`` is free
                key = (tuple(x + y for x, y in zip(ea, eb)), dts)
                out[key] = out.get(key, 0) + sign * ca * cb
        return PolyForm(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> PolyForm:
        out = PolyForm.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def render(self) -> str:
        return render_form(self)

    def __str__(self):
        return render_form(self)

    def __repr__(self):
        return f"PolyForm({self.n}, {render_form(self)!r})"


def form_d(f: PolyForm) -> PolyForm:
    """Exterior derivative: d(P dt_S) = Σ_i ∂P/∂t_i dt_i ∧ dt_S."""
    out: dict = {}
    for (exps, dts), c in f.terms.items():
        for i, e in enumerate(exps):
            if not e:
                continue
            k = i + 1
            merged = _merge_dt((k,), dts)
            if merged is None:
                continue
            sign, new_dts = merged
            new_exps = exps[:i] + (e - 1,) + exps[i + 1:]
            key = (new_exps, new_dts)
            out[key] = out.get(key, 0) + sign * e * c
    return PolyForm(f.n, out)


def pullback(f: PolyForm, images: list[PolyForm]) -> PolyForm:
    """Substitute t_k ↦ images[k-1] (0-forms on one simplex), dt_k ↦ d(images[k-1])."""
    if len(images) != f.n:
        raise ValueError("need one image per coordinate")
    m = images[0].n if images else None
    if m is None:
        raise ValueError("pullback of a form on the 0-simplex needs the target dimension")
    dimg = [form_d(x) for x in images]
    out = PolyForm.zero(m)
    for (exps, dts), c in f.terms.items():
        term = PolyForm.constant(m, c)
        for i, e in enumerate(exps):
            if e:
                term = term * images[i] ** e
        for k in dts:
            term = term * dimg[k - 1]
        out = out + term
    return out


def _lift0(f: PolyForm, m: int) -> PolyForm:
    # a form on Δ^0 is a constant; view it on Δ^m
    return PolyForm.constant(m, f.terms.get(((), ()), 0))


def face(f: PolyForm, i: int) -> PolyForm:
    n = f.n
    if n < 1:
        raise SullivanError("the 0-simplex has no faces")
    if not 0 <= i <= n:
        raise SullivanError(f"face index {i} out of range 0..{n}")
    images = []
    for k in range(1, n + 1):
        if k < i:
            images.append(PolyForm.t(n - 1, k))
        elif k == i:
            images.append(PolyForm.zero(n - 1))
        else:
            images.append(PolyForm.t(n - 1, k - 1))
    return pullback(f, images)


def degeneracy(f: PolyForm, j: int) -> PolyForm:
    n = f.n
    if not 0 <= j <= n:
        raise SullivanError(f"degeneracy index {j} out of range 0..{n}")
    if n == 0:
        return _lift0(f, 1)
    images = []
    for k in range(1, n + 1):
        if k < j:
            images.append(PolyForm.t(n + 1, k))
        elif k == j:
            images.append(PolyForm.t(n + 1, k) + PolyForm.t(n + 1, k + 1))
        else:
            images.append(PolyForm.t(n + 1, k + 1))
    return pullback(f, images)


def integration_sign(n: int) -> int:
    return -1 if (n * (n + 1) // 2) % 2 else 1


def integrate(f: PolyForm) -> Fraction:
    """Signed exact integral of a top-degree form over the n-simplex."""
    n = f.n
    total = Fraction(0)
    for (exps, dts), c in f.terms.items():
        if len(dts) != n:
            raise SullivanError(f"only forms of degree {n} integrate over the {n}-simplex")
        num = 1
        for e in exps:
            num *= factorial(e)
        total += c * Fraction(num, factorial(n + sum(exps)))
    return integration_sign(n) * total


# ---------- literal grammar ----------

_T = re.compile(r"^t(\d+)(?:\^(\d+))?$")
_DT = re.compile(r"^dt(\d+)$")
_COEF = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_form(text: str, n: int) -> PolyForm:
    """Parse ``t1^2*t2 dt1^dt3`` style literals; terms joined by ``+``."""
    text = text.strip()
    if not text:
        raise ParseError("empty form")
    out = PolyForm.zero(n)
    for raw in re.sub(r"\s-\s", " + -", text).split("+"):
        raw = raw.strip()
        if not raw:
            raise ParseError(f"malformed form {text!r}")
        parts = raw.split()
        dt_part = [p for p in parts if p.startswith("dt")]
        mono_part = [p for p in parts if not p.startswith("dt")]
        if len(mono_part) > 1 or len(dt_part) > 1:
            raise ParseError(f"malformed term {raw!r}")
        term = PolyForm.constant(n, 1)
        factors = mono_part[0].split("*") if mono_part else []
        if factors and factors[0].startswith("-") and not _COEF.match(factors[0]):
            term = -term
            factors[0] = factors[0][1:]
        for fac in factors:
            if _COEF.match(fac):
                num, _, den = fac.partition("/")
                if den and int(den) == 0:
                    raise ParseError(f"zero denominator in {fac!r}")
                term = term.scale(Fraction(int(num), int(den or 1)))
                continue
            m = _T.match(fac)
            if not m:
                raise ParseError(f"unknown factor {fac!r}")
            k, e = int(m.group(1)), int(m.group(2) or 1)
            if k > n:
                raise ParseError(f"t{k} does not exist on the {n}-simplex")
            term = term * PolyForm.t(n, k) ** e
        if dt_part:
            for d in dt_part[0].split("^"):
                m = _DT.match(d)
                if not m:
                    raise ParseError(f"unknown differential {d!r}")
                k = int(m.group(1))
                if k > n:
                    raise ParseError(f"dt{k} does not exist on the {n}-simplex")
                term = term * PolyForm.dt(n, k)
        out = out + term
    return out


def render_form(f: PolyForm) -> str:
    if f.is_zero():
        return "0"
    pieces = []
    for (exps, dts), c in sorted(f.terms.items(), key=lambda kv: (len(kv[0][1]), kv[0][1],
                                                                   [-e for e in kv[0][0]])):
        mono = "*".join(f"t{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
        coef = str(c)
        if mono:
            left = mono if c == 1 else f"{coef}*{mono}"
        else:
            left = "" if (c == 1 and dts) else coef
        dt = "^".join(f"dt{k}" for k in dts)
        pieces.append(" ".join(p for p in (left, dt) if p))
    return " + ".join(pieces)


# ---------- simplicial sets ----------

_DEGEN = re.compile(r"^s(\d+)\((.+)\)$")


@dataclass
class FiniteSimplicialSet:
    """Nondegenerate simplices with explicit faces; faces may name degeneracies like ``s0(c0)``."""

    simplices: dict  # dim -> list of names
    faces: dict  # name -> list of face names (dim+1 entries)
    dim_of: dict = field(init=False)

    def __post_init__(self):
        self.simplices = {int(k): list(v) for k, v in self.simplices.items()}
        self.dim_of = {}
        for n, names in self.simplices.items():
            for s in names:
                if s in self.dim_of:
                    raise SullivanError(f"duplicate simplex {s!r}")
                self.dim_of[s] = n
        for s, n in self.dim_of.items():
            fs = self.faces.get(s, [])
            if n == 0:
                if fs:
                    raise SullivanError(f"vertex {s!r} cannot have faces")
                continue
            if len(fs) != n + 1:
                raise SullivanError(f"{s!r} needs {n + 1} faces, got {len(fs)}")
            for f in fs:
                if self.dimension(f) != n - 1:
                    raise SullivanError(f"face {f!r} of {s!r} has the wrong dimension")

    @classmethod
    def from_json(cls, data) -> FiniteSimplicialSet:
        return cls(data["simplices"], data.get("faces", {}))

    @classmethod
    def load(cls, path) -> FiniteSimplicialSet:
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {"simplices": {str(k): v for k, v in sorted(self.simplices.items())},
                "faces": dict(self.faces)}

    def all_simplices(self) -> list:
        return [s for n in sorted(self.simplices) for s in self.simplices[n]]

    def dimension(self, name: str) -> int:
        m = _DEGEN.match(name)
        if m:
            return self.dimension(m.group(2)) + 1
        if name not in self.dim_of:
            raise SullivanError(f"unknown simplex {name!r}")
        return self.dim_of[name]

    def face_of(self, name: str, i: int) -> str:
        """∂_i of a (possibly degenerate) simplex, in normal form."""
        m = _DEGEN.match(name)
        if not m:
            return self.faces[name][i]
        j, inner = int(m.group(1)), m.group(2)
        # ∂_i s_j = s_{j-1} ∂_i (i<j), id (i=j,j+1), s_j ∂_{i-1} (i>j+1)
        if i < j:
            return f"s{j - 1}({self.face_of(inner, i)})"
        if i in (j, j + 1):
            return inner
        return f"s{j}({self.face_of(inner, i - 1)})"

    def simplicial_identity_violations(self) -> list:
        bad = []
        for s in self.all_simplices():
            n = self.dim_of[s]
            if n < 2:
                continue
            for j in range(n + 1):
                for i in range(j):
                    a = self.face_of(self.face_of(s, j), i)
                    b = self.face_of(self.face_of(s, i), j - 1)
                    if a != b:
                        bad.append((s, i, j))
        return bad


def standard_simplex(n: int, skeleton: int | None = None) -> FiniteSimplicialSet:
    """Δ[n], or its ``skeleton``-skeleton (n-1 gives the boundary)."""
    from itertools import combinations

    top = n if skeleton is None else skeleton
    simplices, faces = {}, {}
    for k in range(top + 1):
        names = []
        for verts in combinations(range(n + 1), k + 1):
            name = "v" + "".join(map(str, verts))
            names.append(name)
            if k:
                faces[name] = ["v" + "".join(map(str, verts[:i] + verts[i + 1:]))
                               for i in range(k + 1)]
        simplices[k] = names
    return FiniteSimplicialSet(simplices, faces)


def circle() -> FiniteSimplicialSet:
    """Δ[1]/∂Δ[1]: one vertex and one edge with both faces at the vertex."""
    return FiniteSimplicialSet({0: ["c0"], 1: ["c1"]}, {"c1": ["c0", "c0"]})


def restrict_to_faces(K: FiniteSimplicialSet, top: PolyForm, top_name: str | None = None) -> dict:
    """Family on a sub-complex of Δ[n] obtained by restricting one form on Δ^n.

    Simplices are named by their vertex strings (as in ``standard_simplex``).
    """
    n = top.n
    fam = {}
    for s in K.all_simplices():
        verts = [int(ch) for ch in s[1:]]
        f = top
        # remove missing vertices from the highest index down
        for v in sorted(set(range(n + 1)) - set(verts), reverse=True):
            f = face(f, v)
        fam[s] = f
    return fam


# ---------- cochain comparison ----------

def _family_value(K, fam, name):
    m = _DEGEN.match(name)
    if m:
        return degeneracy(_family_value(K, fam, m.group(2)), int(m.group(1)))
    return fam[name]


def cochain_of(K: FiniteSimplicialSet, fam: dict) -> dict:
    """σ ↦ ∮ Φ_σ on nondegenerate σ (zero when the degree does not match)."""
    out = {}
    for s in K.all_simplices():
        f = fam[s]
        n = K.dim_of[s]
        top = PolyForm(n, {k: c for k, c in f.terms.items() if len(k[1]) == n})
        out[s] = integrate(top)
    return out


def coboundary(K: FiniteSimplicialSet, c: dict) -> dict:
    """(δc)(σ) = (-1)^n Σ_i (-1)^i c(∂_i σ); degenerate faces contribute 0."""
    out = {}
    for s in K.all_simplices():
        n = K.dim_of[s]
        if n == 0:
            out[s] = Fraction(0)
            continue
        tot = Fraction(0)
        for i, f in enumerate(K.faces[s]):
            if not _DEGEN.match(f):
                tot += (-1) ** i * c[f]
        out[s] = (-1) ** n * tot
    return out


@dataclass
class CochainReport:
    compatible: bool
    cochain: dict
    d_cochain: dict
    delta_cochain: dict
    mismatches: list
    incompatibilities: list

    @property
    def ok(self) -> bool:
        return self.compatible and not self.mismatches

    def to_dict(self) -> dict:
        return {
            "compatible": self.compatible,
            "cochain": {k: str(v) for k, v in self.cochain.items()},
            "cochain_map": not self.mismatches,
            "mismatches": self.mismatches,
            "incompatibilities": self.incompatibilities,
        }


def family_incompatibilities(K: FiniteSimplicialSet, fam: dict) -> list:
    bad = []
    for s in K.all_simplices():
        if s not in fam:
            bad.append(f"no form given on {s}")
            continue
        if fam[s].n != K.dim_of[s]:
            bad.append(f"form on {s} lives on the wrong simplex dimension")
    if bad:
        return bad
    for s in K.all_simplices():
        for i in range(K.dim_of[s] + 1) if K.dim_of[s] else ():
            lhs = face(fam[s], i)
            rhs = _family_value(K, fam, K.faces[s][i])
            if lhs != rhs:
                bad.append(f"face {i} of the form on {s} is {lhs}, but the family has {rhs}")
    return bad


def apl_cochain_compare(K: FiniteSimplicialSet, fam: dict, strict: bool = True) -> CochainReport:
    incompat = family_incompatibilities(K, fam)
    if incompat and strict:
        raise IncompatibleFamily("; ".join(incompat))
    if incompat:
        return CochainReport(False, {}, {}, {}, [], incompat)
    c = cochain_of(K, fam)
    dc = cochain_of(K, {s: form_d(f) for s, f in fam.items()})
    delta = coboundary(K, c)
    mism = [{"simplex": s, "integral_of_d": str(dc[s]), "coboundary": str(delta[s])}
            for s in K.all_simplices() if dc[s] != delta[s]]
    return CochainReport(True, c, dc, delta, mism, [])


def load_family(data, K: FiniteSimplicialSet | None = None):
    """Family JSON: {"simplicial_set": {...}, "forms": {name: literal}}."""
    if K is None:
        K = FiniteSimplicialSet.from_json(data["simplicial_set"])
    fam = {}
    for s, lit in data["forms"].items():
        fam[s] = parse_form(lit, K.dimension(s))
    return K, fam


# ---------- simplices of the spatial realization ----------

@dataclass
class SimplexReport:
    valid: bool
    degree_mismatches: list
    violations: list

    def to_dict(self) -> dict:
        return {"valid": self.valid, "degree_mismatches": self.degree_mismatches,
                "violations": self.violations}


def apply_sigma(p: CdgaPresentation, sigma: dict, x: Poly, n: int) -> PolyForm:
    out = PolyForm.zero(n)
    for m, c in x.terms.items():
        term = PolyForm.constant(n, c)
        for i, e in m:
            term = term * sigma[i] ** e
        out = out + term
    return out


def check_simplex(p: CdgaPresentation, sigma: dict, n: int) -> SimplexReport:
    """Is σ (generator ↦ form on Δ^n) a CDGA morphism ΛV → forms on Δ^n?"""
    table = p.table
    sig = {}
    for k, f in sigma.items():
        i = table.index(k) if isinstance(k, str) else k
        sig[i] = f
    mism, viol = [], []
    for i, g in enumerate(table):
        if i not in sig:
            sig[i] = PolyForm.zero(n)
        f = sig[i]
        if f.n != n:
            mism.append(f"{g.name}: form lives on the {f.n}-simplex, not the {n}-simplex")
            continue
        if not f.is_zero() and f.degrees() != {g.degree}:
            mism.append(f"{g.name} has degree {g.degree} but its image has degree "
                        f"{sorted(f.degrees())}")
    if mism:
        return SimplexReport(False, mism, [])
    for i, g in enumerate(table):
        lhs = apply_sigma(p, sig, p.differential_of(i), n)
        rhs = form_d(sig[i])
        if lhs != rhs:
            viol.append(f"sigma(d{g.name}) = {lhs} but d(sigma({g.name})) = {rhs}")
    return SimplexReport(not viol, [], viol)
