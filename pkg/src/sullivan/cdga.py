"""CDGA presentations, formal targets and morphisms between them.

Two kinds of algebra share one informal interface (``table``, ``max_degree``,
``basis(n)``, ``d(x)``, ``mul(a, b)``, ``differential_matrix(n)``):

* :class:`CdgaPresentation` -- a free algebra ``(ΛV, d)`` with the
  differential given on generators and extended as a derivation;
* :class:`FormalAlgebra` -- a finite-dimensional graded ring with zero
  differential, given by a basis per degree and a cup-product table.  Its
  elements are ``Poly`` objects of word length at most one over the basis.

Cohomology and model construction only use this interface, so both kinds
work as sources and targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    UNIT,
    Generator,
    GeneratorTable,
    Poly,
    basis_of_degree,
    mul,
    parse_poly,
    render_poly,
    wordlength,
    wordlength_component,
)
from .errors import AlgebraMismatch, CapExceeded, ParseError, SullivanError
from .linalg import QMatrix


def _check_cap(alg, n: int, what: str = "degree"):
    if alg.max_degree is not None and n > alg.max_degree:
        raise CapExceeded(f"{what} {n} exceeds the truncation cap max_degree={alg.max_degree}")


def default_max_degree(table: GeneratorTable) -> int:
    return max(4, 2 * table.max_generator_degree() + 2)


class CdgaPresentation:
    """Free graded-commutative algebra with a differential on generators."""

    def __init__(self, gens: GeneratorTable, diff: dict | None = None, max_degree: int | None = None):
        self.table = gens
        self.max_degree = default_max_degree(gens) if max_degree is None else max_degree
        self.diff: dict[int, Poly] = {}
        for key, image in (diff or {}).items():
            i = gens.index(key) if isinstance(key, str) else key
            if image.table != gens:
                raise AlgebraMismatch("differential image over a different generator table")
            if not image.is_zero():
                if not image.is_homogeneous() or image.degree() != gens.degree(i) + 1:
                    raise ValueError(
                        f"d({gens[i].name}) must be homogeneous of degree {gens.degree(i) + 1}"
                    )
                self.diff[i] = image
        self._dcache: dict = {}

    # -- algebra interface ---------------------------------------------
    @property
    def gens(self) -> GeneratorTable:
        return self.table

    def gen(self, name) -> Poly:
        return Poly.gen(self.table, name)

    def one(self) -> Poly:
        return Poly.one(self.table)

    def zero(self) -> Poly:
        return Poly.zero(self.table)

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self.table)

    def basis(self, n: int) -> list:
        return basis_of_degree(self.table, n)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return mul(a, b)

    def d(self, x: Poly) -> Poly:
        if x.table != self.table:
            raise AlgebraMismatch("element is not over this presentation's generators")
        out: dict = {}
        for m, c in x.terms.items():
            for m2, c2 in self._d_monomial(m).terms.items():
                out[m2] = out.get(m2, 0) + c * c2
        return Poly(self.table, out)

    def _d_monomial(self, m) -> Poly:
        hit = self._dcache.get(m)
        if hit is not None:
            return hit
        table = self.table
        if not m:
            res = Poly.zero(table)
        else:
            (i, e), rest = m[0], m[1:]
            dv = self.diff.get(i)
            if dv is None:
                d_first = Poly.zero(table)
            elif e == 1:
                d_first = dv
            else:
                d_first = Poly.monomial(table, ((i, e - 1),), e) * dv
            first = Poly.monomial(table, ((i, e),))
            rest_p = Poly.monomial(table, rest)
            res = d_first * rest_p
            if rest:
                sign = -1 if (e * table.degree(i)) % 2 else 1
                res = res + (first * self._d_monomial(rest)).scale(sign)
        self._dcache[m] = res
        return res

    def differential_matrix(self, n: int) -> QMatrix:
        _check_cap(self, n + 1)
        src = self.basis(n)
        tgt = self.basis(n + 1)
        pos = {m: r for r, m in enumerate(tgt)}
        entries = {}
        for j, m in enumerate(src):
            for m2, c in self._d_monomial(m).terms.items():
                entries[(pos[m2], j)] = c
        return QMatrix(len(tgt), len(src), entries)

    # -- derived presentations ------------------------------------------
    def with_max_degree(self, max_degree: int) -> CdgaPresentation:
        return CdgaPresentation(self.table, dict(self.diff), max_degree)

    def extend(self, new_gens, new_diff: dict, max_degree: int | None = None) -> CdgaPresentation:
        """Add generators; ``new_diff`` maps new names to strings or Polys."""
        table = self.table.extend(new_gens)
        diff = {i: Poly(table, p.terms) for i, p in self.diff.items()}
        for name, image in new_diff.items():
            if isinstance(image, str):
                image = parse_poly(image, table)
            else:
                image = Poly(table, image.terms)
            diff[table.index(name)] = image
        return CdgaPresentation(table, diff, self.max_degree if max_degree is None else max_degree)

    def lift(self, x: Poly) -> Poly:
        """Re-home an element of a sub-presentation (prefix of the table)."""
        return Poly(self.table, x.terms)

    def is_minimal(self) -> bool:
        return all(wordlength_component(p, 1).is_zero() and wordlength_component(p, 0).is_zero()
                   for p in self.diff.values())

    def differential_of(self, name) -> Poly:
        i = self.table.index(name) if isinstance(name, str) else name
        return self.diff.get(i, Poly.zero(self.table))

    def render(self) -> str:
        lines = []
        for g in self.table:
            if g.stage is None:
                lines.append(f"gen {g.name} {g.degree}")
            else:
                lines.append(f"gen {g.name} {g.degree} {g.stage}")
        for i, g in enumerate(self.table):
            if i in self.diff:
                lines.append(f"diff {g.name} = {render_poly(self.diff[i])}")
        lines.append(f"maxdeg {self.max_degree}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, CdgaPresentation):
            return NotImplemented
        return (self.table == other.table and self.diff == other.diff
                and self.max_degree == other.max_degree)

    def __repr__(self):
        return f"CdgaPresentation({self.table.names}, maxdeg={self.max_degree})"


class FormalAlgebra:
    """Finite graded ring with zero differential (a cohomology ring as target)."""

    def __init__(self, table: GeneratorTable, cup: dict | None = None, max_degree: int | None = None):
        self.table = table
        self.max_degree = max_degree
        self.cup: dict[tuple[int, int], Poly] = {}
        for (i, j), p in (cup or {}).items():
            if not p.is_zero():
                self.cup[(i, j)] = p

    def basis(self, n: int) -> list:
        if n == 0:
            return [UNIT]
        return [((i, 1),) for i in self.table.indices_of_degree(n)]

    def one(self) -> Poly:
        return Poly.one(self.table)

    def zero(self) -> Poly:
        return Poly.zero(self.table)

    def gen(self, name) -> Poly:
        return Poly.gen(self.table, name)

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self.table)

    def mul(self, a: Poly, b: Poly) -> Poly:
        out = Poly.zero(self.table)
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                if not ma:
                    out = out + Poly.monomial(self.table, mb, ca * cb)
                elif not mb:
                    out = out + Poly.monomial(self.table, ma, ca * cb)
                else:
                    prod = self.cup.get((ma[0][0], mb[0][0]))
                    if prod is not None:
                        out = out + prod.scale(ca * cb)
        return out

    def d(self, x: Poly) -> Poly:
        return Poly.zero(self.table)

    def differential_of(self, name) -> Poly:
        return Poly.zero(self.table)

    def differential_matrix(self, n: int) -> QMatrix:
        _check_cap(self, n + 1)
        return QMatrix(len(self.basis(n + 1)), len(self.basis(n)))

    def dims(self) -> dict[int, int]:
        out = {0: 1}
        for g in self.table:
            out[g.degree] = out.get(g.degree, 0) + 1
        return out

    def render(self) -> str:
        lines = []
        by_degree: dict[int, list[str]] = {}
        for g in self.table:
            by_degree.setdefault(g.degree, []).append(g.name)
        for deg in sorted(by_degree):
            lines.append(f"h {deg} {len(by_degree[deg])} " + " ".join(by_degree[deg]))
        for (i, j) in sorted(self.cup):
            if i <= j:
                a, b = self.table[i].name, self.table[j].name
                lines.append(f"cup {a} {b} = {render_poly(self.cup[(i, j)])}")
        if self.max_degree is not None:
            lines.append(f"maxdeg {self.max_degree}")
        return "\n".join(lines) + "\n"


# ---------- morphisms ----------

@dataclass
class CdgaMorphism:
    source: object
    target: object
    images: dict  # source generator index -> Poly over target.table

    def __post_init__(self):
        fixed = {}
        for key, img in self.images.items():
            i = self.source.table.index(key) if isinstance(key, str) else key
            if isinstance(img, str):
                img = self.target.parse(img)
            fixed[i] = img
        self.images = fixed
        self._cache: dict = {}

    def image_of(self, i: int) -> Poly:
        return self.images.get(i, self.target.zero())

    def apply(self, x: Poly) -> Poly:
        tgt = self.target
        out = tgt.zero()
        for m, c in x.terms.items():
            img = self._cache.get(m)
            if img is None:
                img = tgt.one()
                for i, e in m:
                    for _ in range(e):
                        img = tgt.mul(img, self.image_of(i))
                self._cache[m] = img
            out = out + img.scale(c)
        return out

    def compose(self, other: CdgaMorphism) -> CdgaMorphism:
        """``self ∘ other``."""
        imgs = {i: self.apply(other.image_of(i)) for i in range(len(other.source.table))}
        return CdgaMorphism(other.source, self.target, imgs)


@dataclass
class MorphismReport:
    valid: bool
    degree_violations: list = field(default_factory=list)
    chain_violations: list = field(default_factory=list)
    verified_up_to: int | None = None

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "degree_violations": self.degree_violations,
            "chain_violations": self.chain_violations,
            "verified_up_to": self.verified_up_to,
        }


def _common_cap(a, b):
    caps = [c for c in (a.max_degree, b.max_degree) if c is not None]
    return min(caps) if caps else None


def check_morphism(f: CdgaMorphism) -> MorphismReport:
    src, tgt = f.source, f.target
    cap = _common_cap(src, tgt)
    deg_bad, chain_bad = [], []
    for i, g in enumerate(src.table):
        img = f.image_of(i)
        if not img.is_zero() and (not img.is_homogeneous() or img.degree() != g.degree):
            deg_bad.append(f"{g.name} (degree {g.degree}) -> {img}")
    if not deg_bad:
        for i, g in enumerate(src.table):
            if cap is not None and g.degree + 1 > cap:
                continue
            lhs = f.apply(src.differential_of(i))
            rhs = tgt.d(f.image_of(i))
            if lhs != rhs:
                chain_bad.append(f"f(d {g.name}) = {lhs} but d(f {g.name}) = {rhs}")
    return MorphismReport(not deg_bad and not chain_bad, deg_bad, chain_bad, cap)


# ---------- validation ----------

@dataclass
class ValidationReport:
    d_squared_zero: bool
    minimal: bool
    sullivan: bool
    violations: list
    verified_up_to: int | None

    @property
    def ok(self) -> bool:
        return self.d_squared_zero

    def to_dict(self) -> dict:
        return {
            "d_squared_zero": self.d_squared_zero,
            "minimal": self.minimal,
            "sullivan": self.sullivan,
            "violations": self.violations,
            "verified_up_to": self.verified_up_to,
        }


def generator_filtration(table: GeneratorTable, diff: dict, candidates=None) -> dict[int, int]:
    """Least generator-wise filtration: level(v) = 1 + max level over generators in dv.

    Only generators in ``candidates`` (default: all) are levelled; the others
    are treated as base and ignored.  Generators that never qualify are
    absent from the result.
    """
    pool = set(range(len(table))) if candidates is None else set(candidates)
    used = {i: diff[i].generators_used() & pool if i in diff else set() for i in pool}
    level: dict[int, int] = {}
    todo = set(pool)
    r = 0
    while todo:
        newly = [i for i in sorted(todo) if all(level.get(j, r) <= r - 1 for j in used[i])]
        if not newly:
            break
        for i in newly:
            level[i] = r
            todo.discard(i)
        r += 1
    return level


def validate(p: CdgaPresentation) -> ValidationReport:
    table = p.table
    violations = []
    d2 = True
    for i, g in enumerate(table):
        if g.degree + 2 > p.max_degree:
            continue
        dd = p.d(p.differential_of(i))
        if not dd.is_zero():
            d2 = False
            violations.append(f"d(d({g.name})) = {dd} != 0")
    minimal = True
    for i, g in enumerate(table):
        lin = wordlength_component(p.differential_of(i), 1)
        if not lin.is_zero():
            minimal = False
            violations.append(f"d({g.name}) has word-length-1 part {lin}")
    level = generator_filtration(table, p.diff)
    sullivan = len(level) == len(table)
    for i, g in enumerate(table):
        if i not in level:
            violations.append(f"{g.name} admits no filtration level (dV(k) in ΛV(k-1) fails)")
    return ValidationReport(d2, minimal, sullivan, violations, p.max_degree)


# ---------- parsing ----------

def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", line) from None


def parse_lines(text: str, allow_fiber: bool = False):
    """Shared line parser for ``.cdga`` files.

    Returns ``(table, diff, max_degree, fiber_names)`` where the table lists
    plain ``gen`` generators first and ``fiber`` generators after them.
    """
    base, fiber, diffs = [], [], []
    max_degree = None
    names = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        toks = line.split()
        kw = toks[0]
        if kw in ("gen", "fiber"):
            if kw == "fiber" and not allow_fiber:
                raise ParseError("'fiber' lines belong in relative presentations", lineno)
            if len(toks) not in (3, 4):
                raise ParseError(f"expected '{kw} <name> <degree> [<stage>]'", lineno)
            name = toks[1]
            if name in names:
                raise ParseError(f"duplicate generator {name!r}", lineno)
            deg = _int(toks[2], lineno, "degree")
            if deg < 1:
                raise ParseError(f"generator {name!r} must have positive degree", lineno)
            stage = _int(toks[3], lineno, "stage") if len(toks) == 4 else None
            names.add(name)
            (fiber if kw == "fiber" else base).append(Generator(name, deg, stage))
        elif kw == "diff":
            if len(toks) < 4 or toks[2] != "=":
                raise ParseError("expected 'diff <name> = <poly>'", lineno)
            diffs.append((lineno, toks[1], line.split("=", 1)[1].strip()))
        elif kw == "maxdeg":
            if len(toks) != 2:
                raise ParseError("expected 'maxdeg <n>'", lineno)
            max_degree = _int(toks[1], lineno, "maxdeg")
            if max_degree < 1:
                raise ParseError("maxdeg must be positive", lineno)
        else:
            raise ParseError(f"unknown directive {kw!r}", lineno)
    table = GeneratorTable(tuple(base + fiber))
    diff = {}
    for lineno, name, rhs in diffs:
        if name not in table:
            raise ParseError(f"unknown generator {name!r}", lineno)
        i = table.index(name)
        if i in diff:
            raise ParseError(f"second differential for {name!r}", lineno)
        p = parse_poly(rhs, table, lineno)
        if not p.is_zero():
            degs = p.degrees()
            if len(degs) > 1:
                raise ParseError(f"inhomogeneous right-hand side for d({name})", lineno)
            want = table.degree(i) + 1
            if degs != {want}:
                raise ParseError(
                    f"degree mismatch: d({name}) must have degree {want}, got {degs.pop()}", lineno)
        diff[i] = p
    return table, diff, max_degree, [g.name for g in fiber]


def parse_presentation(text: str) -> CdgaPresentation:
    table, diff, max_degree, _ = parse_lines(text)
    return CdgaPresentation(table, diff, max_degree)


def parse_target(text: str) -> FormalAlgebra:
    """Parse a ``.target`` file: ``h <deg> <dim> [names]``, ``cup a b = poly``, ``maxdeg``."""
    gens, cups = [], []
    max_degree = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        toks = line.split()
        kw = toks[0]
        if kw == "h":
            if len(toks) < 3:
                raise ParseError("expected 'h <degree> <dim> [names...]'", lineno)
            deg = _int(toks[1], lineno, "degree")
            dim = _int(toks[2], lineno, "dimension")
            if deg == 0:
                if dim != 1:
                    raise ParseError("targets must be connected (h 0 1)", lineno)
                continue
            if deg < 0 or dim < 0:
                raise ParseError("degree and dimension must be non-negative", lineno)
            given = toks[3:]
            if given and len(given) != dim:
                raise ParseError(f"expected {dim} basis names, got {len(given)}", lineno)
            for k in range(dim):
                name = given[k] if given else f"h{deg}_{k + 1}"
                if any(g.name == name for g in gens):
                    raise ParseError(f"duplicate basis name {name!r}", lineno)
                gens.append(Generator(name, deg))
        elif kw == "cup":
            if len(toks) < 5 or toks[3] != "=":
                raise ParseError("expected 'cup <a> <b> = <poly>'", lineno)
            cups.append((lineno, toks[1], toks[2], line.split("=", 1)[1].strip()))
        elif kw == "maxdeg":
            if len(toks) != 2:
                raise ParseError("expected 'maxdeg <n>'", lineno)
            max_degree = _int(toks[1], lineno, "maxdeg")
        else:
            raise ParseError(f"unknown directive {kw!r}", lineno)
    gens.sort(key=lambda g: g.degree)
    table = GeneratorTable(tuple(gens))
    cup: dict = {}
    for lineno, a, b, rhs in cups:
        for nm in (a, b):
            if nm not in table:
                raise ParseError(f"unknown basis element {nm!r}", lineno)
        i, j = table.index(a), table.index(b)
        p = parse_poly(rhs, table, lineno)
        if any(wordlength(m) != 1 for m in p.terms):
            raise ParseError("cup products must be linear in the cohomology basis", lineno)
        want = table.degree(i) + table.degree(j)
        if not p.is_zero() and p.degrees() != {want}:
            raise ParseError(f"degree mismatch: {a}*{b} must have degree {want}", lineno)
        sign = -1 if (table.degree(i) * table.degree(j)) % 2 else 1
        for key, val in (((i, j), p), ((j, i), p.scale(sign))):
            if key in cup and cup[key] != val:
                raise ParseError(f"cup {a} {b} contradicts an earlier entry", lineno)
            cup[key] = val
        if i == j and sign == -1 and not p.is_zero():
            raise ParseError(f"odd class {a} must square to zero", lineno)
    alg = FormalAlgebra(table, cup, max_degree)
    _check_associative(alg)
    return alg


def _check_associative(alg: FormalAlgebra):
    if not alg.cup:
        return
    gens = [Poly.gen(alg.table, i) for i in range(len(alg.table))]
    for a in gens:
        for b in gens:
            ab = alg.mul(a, b)
            for c in gens:
                if alg.mul(ab, c) != alg.mul(a, alg.mul(b, c)):
                    raise ParseError(f"cup product is not associative on ({a}, {b}, {c})")


def load(path) -> object:
    """Read a ``.cdga`` or ``.target`` file."""
    from pathlib import Path

    path = Path(path)
    text = path.read_text()
    if path.suffix == ".target":
        return parse_target(text)
    return parse_presentation(text)


def apply_d(p: CdgaPresentation, x: Poly) -> Poly:
    return p.d(x)


def differential_matrix(p, n: int) -> QMatrix:
    return p.differential_matrix(n)


def is_connected_presentation(alg) -> bool:
    return all(g.degree >= 1 for g in alg.table)


__all__ = [
    "CdgaMorphism",
    "CdgaPresentation",
    "FormalAlgebra",
    "MorphismReport",
    "SullivanError",
    "ValidationReport",
    "apply_d",
    "check_morphism",
    "differential_matrix",
    "generator_filtration",
    "load",
    "parse_lines",
    "parse_presentation",
    "parse_target",
    "validate",
]
