"""Free graded-commutative algebras on finitely many generators.

A monomial is a tuple of ``(generator_index, exponent)`` pairs with strictly
ascending indices.  Odd generators only ever appear with exponent 1; their
squares vanish.  Multiplying two monomials merges the factor lists and picks
up one sign for each pair of odd factors that has to be transposed.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import AlgebraMismatch, CapExceeded, ParseError

Monomial = tuple  # tuple[tuple[int, int], ...]
UNIT: Monomial = ()

DEFAULT_MAX_CELLS = 200_000


def max_cells() -> int:
    raw = os.environ.get("SULLIVAN_MAX_CELLS")
    return int(raw) if raw else DEFAULT_MAX_CELLS


class Generator(NamedTuple):
    name: str
    degree: int
    stage: int | None = None


@dataclass(frozen=True)
class GeneratorTable:
    """Ordered generator list; the order is the canonical order on generators."""

    entries: tuple = ()

    def __post_init__(self):
        entries = tuple(Generator(*e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        seen = set()
        for g in entries:
            if g.name in seen:
                raise ValueError(f"duplicate generator name {g.name!r}")
            if g.degree < 1:
                raise ValueError(f"generator {g.name!r} must have positive degree")
            seen.add(g.name)
        object.__setattr__(self, "_index", {g.name: i for i, g in enumerate(entries)})

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i) -> Generator:
        return self.entries[i]

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name) -> bool:
        return name in self._index

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.entries]

    def degree(self, i: int) -> int:
        return self.entries[i].degree

    def is_odd(self, i: int) -> bool:
        return self.entries[i].degree % 2 == 1

    def indices_of_degree(self, n: int) -> list[int]:
        return [i for i, g in enumerate(self.entries) if g.degree == n]

    def extend(self, new: Iterable) -> GeneratorTable:
        return GeneratorTable(self.entries + tuple(Generator(*g) for g in new))

    def max_generator_degree(self) -> int:
        return max((g.degree for g in self.entries), default=0)


# ---------- monomials ----------

def monomial_degree(table: GeneratorTable, m: Monomial) -> int:
    return sum(e * table.entries[i].degree for i, e in m)


def wordlength(m: Monomial) -> int:
    return sum(e for _, e in m)


def mul_monomials(table: GeneratorTable, a: Monomial, b: Monomial):
    """Return ``(sign, product)`` or ``None`` when the product vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    sign = 1
    odd_a_after = sum(1 for i, _ in a if table.entries[i].degree % 2)
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        ga, ea = a[ia]
        gb, eb = b[ib]
        if ga < gb:
            out.append(a[ia])
            if table.entries[ga].degree % 2:
                odd_a_after -= 1
            ia += 1
        elif gb < ga:
            if table.entries[gb].degree % 2 and odd_a_after % 2:
                sign = -sign
            out.append(b[ib])
            ib += 1
        else:
            if table.entries[ga].degree % 2:
                return None
            out.append((ga, ea + eb))
            ia += 1
            ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    return sign, tuple(out)


def basis_of_degree(table: GeneratorTable, n: int, max_wordlength: int | None = None) -> list:
    if n < 0:
        raise ValueError("degree must be non-negative")
    return list(_basis(table, n, max_wordlength, max_cells()))


@lru_cache(maxsize=4096)
def _basis(table: GeneratorTable, n: int, cap, limit: int) -> tuple:
    degs = [g.degree for g in table.entries]
    odd = [d % 2 == 1 for d in degs]
    out = []

    def rec(i, remaining, length, acc):
        if remaining == 0:
            out.append(tuple(acc))
            if len(out) > limit:
                raise CapExceeded(
                    f"basis of degree {n} exceeds SULLIVAN_MAX_CELLS={limit} monomials"
                )
            return
        for j in range(i, len(degs)):
            d = degs[j]
            if d > remaining:
                continue
            top = 1 if odd[j] else remaining // d
            for e in range(1, top + 1):
                if cap is not None and length + e > cap:
                    break
                acc.append((j, e))
                rec(j + 1, remaining - e * d, length + e, acc)
                acc.pop()

    rec(0, n, 0, [])
    out.sort()
    return tuple(out)


# ---------- polynomials ----------

class Poly:
    """Element of the free graded-commutative algebra over a fixed table."""

    __slots__ = ("table", "terms")

    def __init__(self, table: GeneratorTable, terms=None):
        self.table = table
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def zero(cls, table: GeneratorTable) -> Poly:
        return cls(table)

    @classmethod
    def one(cls, table: GeneratorTable) -> Poly:
        return cls(table, {UNIT: 1})

    @classmethod
    def constant(cls, table: GeneratorTable, c) -> Poly:
        return cls(table, {UNIT: c})

    @classmethod
    def gen(cls, table: GeneratorTable, name_or_index) -> Poly:
        i = table.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return cls(table, {((i, 1),): 1})

    @classmethod
    def monomial(cls, table: GeneratorTable, m: Monomial, c=1) -> Poly:
        return cls(table, {m: c})

    def _check(self, other: Poly):
        if other.table is not self.table and other.table != self.table:
            raise AlgebraMismatch("polynomials live over different generator tables")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.table == other.table and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.table, other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(self.table, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(self.table, other)
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def scale(self, c) -> Poly:
        c = Fraction(c)
        return Poly(self.table, {m: c * a for m, a in self.terms.items()})

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> Poly:
        out = Poly.one(self.table)
        for _ in range(k):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {monomial_degree(self.table, m) for m in self.terms}

    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero; error if mixed."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous element {self}")
        return ds.pop()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def generators_used(self) -> set[int]:
        return {i for m in self.terms for i, _ in m}

    def coords(self, basis: list) -> tuple:
        """Coordinates in ``basis``; every term must appear in it."""
        pos = {m: j for j, m in enumerate(basis)}
        out = [Fraction(0)] * len(basis)
        for m, c in self.terms.items():
            if m not in pos:
                raise ValueError(f"monomial {m} not in the supplied basis")
            out[pos[m]] = c
        return tuple(out)

    @classmethod
    def from_coords(cls, table: GeneratorTable, basis: list, vec) -> Poly:
        return cls(table, {m: c for m, c in zip(basis, vec) if c})

    def render(self) -> str:
        return render_poly(self)

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"Poly({render_poly(self)!r})"


def mul(a: Poly, b: Poly) -> Poly:
    a._check(b)
    table = a.table
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = mul_monomials(table, ma, mb)
            if r is None:
                continue
            s, m = r
            out[m] = out.get(m, 0) + s * ca * cb
    return Poly(table, out)


def wordlength_component(p: Poly, k: int) -> Poly:
    return Poly(p.table, {m: c for m, c in p.terms.items() if wordlength(m) == k})


def render_monomial(table: GeneratorTable, m: Monomial) -> str:
    parts = []
    for i, e in m:
        name = table.entries[i].name
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def render_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for m in sorted(p.terms, key=lambda m: (monomial_degree(p.table, m), m)):
        c = p.terms[m]
        if not m:
            out.append(render_rational(c))
        elif c == 1:
            out.append(render_monomial(p.table, m))
        else:
            out.append(f"{render_rational(c)}*{render_monomial(p.table, m)}")
    return " + ".join(out)


# ---------- parsing ----------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str, line):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}", line)
        kind = mt.lastgroup
        tokens.append((kind, mt.group(kind)))
        pos = mt.end()
    return tokens


def parse_poly(text: str, table: GeneratorTable, line: int | None = None) -> Poly:
    """Parse ``t1 + t2 + ...`` with terms ``[<int>[/<int>]*]<name>[^<int>]*...``.

    A leading or infix ``-`` is accepted as well as negative coefficients.
    """
    tokens = _tokenize(text, line)
    if not tokens:
        raise ParseError("empty polynomial", line)
    pos = 0
    result = Poly.zero(table)

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def rational():
        kind, num = take()
        if kind != "num":
            raise ParseError(f"malformed rational in {text!r}", line)
        if peek() == ("op", "/"):
            take()
            kind, den = take()
            if kind != "num" or int(den) == 0:
                raise ParseError(f"malformed rational in {text!r}", line)
            return Fraction(int(num), int(den))
        return Fraction(int(num))

    def factor():
        kind, name = take()
        if kind != "name":
            raise ParseError(f"expected generator name in {text!r}", line)
        if name not in table:
            raise ParseError(f"unknown generator {name!r}", line)
        exp = 1
        if peek() == ("op", "^"):
            take()
            kind, e = take()
            if kind != "num" or int(e) < 0:
                raise ParseError(f"malformed exponent in {text!r}", line)
            exp = int(e)
        return Poly.gen(table, name) ** exp

    sign = 1
    expect_term = True
    while pos < len(tokens):
        if expect_term:
            while peek()[0] == "op" and peek()[1] in "+-":
                if take()[1] == "-":
                    sign = -sign
            coef = Fraction(1)
            term = None
            if peek()[0] == "num":
                coef = rational()
                if peek() == ("op", "*"):
                    take()
                    term = factor()
                else:
                    term = Poly.one(table)
            else:
                term = factor()
            while peek() == ("op", "*"):
                take()
                term = term * factor()
            result = result + term.scale(sign * coef)
            sign = 1
            expect_term = False
        else:
            kind, op = take()
            if kind != "op" or op not in "+-":
                raise ParseError(f"expected '+' between terms in {text!r}", line)
            if op == "-":
                sign = -1
            expect_term = True
    if expect_term:
        raise ParseError(f"dangling operator in {text!r}", line)
    return result
