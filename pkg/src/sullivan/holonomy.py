"""Relative Sullivan algebras ΛZ⊗ΛW and the algebraic holonomy action.

For a fiber cocycle Φ, the differential of 1⊗Φ in the total algebra is split
as ``Σ z_i⊗Θ_i + Ψ`` with ``z_i`` base generators and Ψ of base word length
at least two.  A dual element x of the degree-1 base generators acts by
``x·[Φ] = [Σ sx(z_i) Θ_i]``, and its exponential ``Σ x^i/i!`` is the
corresponding group element.  Base generators of degree ≥ 2 are invisible
to ``sx``.

Holonomy matrices use the row convention: row i holds the coordinates of
``x·b_i`` for the i-th basis class ``b_i``.  Equivalently they are the
column-convention matrices of the dual (right) action on homology.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import GeneratorTable, Poly, wordlength_component
from .cdga import CdgaPresentation, generator_filtration, parse_lines, validate
from .cohomology import cohomology
from .errors import FiltrationError, NotCocycle, SullivanError
from .linalg import QMatrix, nullspace_basis


class RelativeSullivan:
    """Total presentation whose table lists base generators, then fiber ones."""

    def __init__(self, total: CdgaPresentation, n_base: int):
        self.total = total
        self.n_base = n_base
        table = total.table
        for i in range(n_base):
            if any(j >= n_base for j in total.differential_of(i).generators_used()):
                raise SullivanError(
                    f"base generator {table[i].name} has a differential involving fiber generators")
        base_table = GeneratorTable(table.entries[:n_base])
        self.base = CdgaPresentation(
            base_table, {i: Poly(base_table, total.diff[i].terms) for i in range(n_base)
                         if i in total.diff}, total.max_degree)
        fiber_table = GeneratorTable(table.entries[n_base:])
        fdiff = {}
        for i in range(n_base, len(table)):
            fdiff[i - n_base] = self.to_fiber(total.differential_of(i), fiber_table)
        self.fiber = CdgaPresentation(fiber_table, fdiff, total.max_degree)
        self.filtration = fiber_filtration(self)

    @property
    def max_degree(self) -> int:
        return self.total.max_degree

    @property
    def fiber_gens(self) -> GeneratorTable:
        return self.fiber.table

    def base_degree1(self) -> list[int]:
        return [i for i in range(self.n_base) if self.total.table.degree(i) == 1]

    def to_total(self, x: Poly) -> Poly:
        nb = self.n_base
        return Poly(self.total.table,
                    {tuple((i + nb, e) for i, e in m): c for m, c in x.terms.items()})

    def to_fiber(self, x: Poly, fiber_table=None) -> Poly:
        """Fiber-only terms of a total element (the quotient by Λ^{≥1}Z⊗ΛW)."""
        nb = self.n_base
        ft = fiber_table if fiber_table is not None else self.fiber.table
        return Poly(ft, {tuple((i - nb, e) for i, e in m): c for m, c in x.terms.items()
                         if all(i >= nb for i, _ in m)})

    def dual(self, x) -> dict[int, Fraction]:
        """Normalise a dual element: dict by base name/index, or tuple over degree-1 base gens."""
        deg1 = self.base_degree1()
        if isinstance(x, dict):
            out = {}
            for k, v in x.items():
                i = self.total.table.index(k) if isinstance(k, str) else k
                if i not in deg1:
                    raise SullivanError(f"{k!r} is not a degree-1 base generator")
                if v:
                    out[i] = Fraction(v)
            return out
        if len(x) != len(deg1):
            raise SullivanError("dual vector length must equal the number of degree-1 base generators")
        return {i: Fraction(v) for i, v in zip(deg1, x) if v}

    def fiber_cohomology(self, n: int):
        return cohomology(self.fiber, n)


def parse_relative(text: str) -> RelativeSullivan:
    table, diff, max_degree, fiber_names = parse_lines(text, allow_fiber=True)
    total = CdgaPresentation(table, diff, max_degree)
    return RelativeSullivan(total, len(table) - len(fiber_names))


# ---------- filtration ----------

@dataclass
class FiberFiltration:
    assignment: dict  # fiber generator name -> level

    @property
    def max_level(self) -> int:
        return max(self.assignment.values(), default=-1)

    def to_dict(self) -> dict:
        return dict(self.assignment)


def fiber_filtration(rs: RelativeSullivan) -> FiberFiltration:
    table = rs.total.table
    fib = range(rs.n_base, len(table))
    level = generator_filtration(table, rs.total.diff, fib)
    missing = [table[i].name for i in fib if i not in level]
    if missing:
        raise FiltrationError(
            "no fiber filtration; these generators never reach a finite level: " + ", ".join(missing))
    return FiberFiltration({table[i].name: level[i] for i in fib})


def validate_relative(rs: RelativeSullivan) -> dict:
    total = validate(rs.total)
    base = validate(rs.base)
    linear = []
    for i, g in enumerate(rs.fiber.table):
        lin = wordlength_component(rs.fiber.differential_of(i), 1)
        if not lin.is_zero():
            linear.append(f"fiber differential of {g.name} has linear part {lin}")
    return {
        "d_squared_zero": total.d_squared_zero,
        "base_minimal": base.minimal,
        "minimal_relative": not linear,
        "filtration": rs.filtration.to_dict(),
        "violations": [v for v in total.violations if "d(d(" in v] + linear,
        "verified_up_to": total.verified_up_to,
    }


# ---------- the action ----------

def _theta(rs: RelativeSullivan, sx: dict, total_elem: Poly) -> Poly:
    """Σ sx(z_i) Θ_i read off d(total_elem)."""
    nb = rs.n_base
    out: dict = {}
    for m, c in rs.total.d(total_elem).terms.items():
        base = [(i, e) for i, e in m if i < nb]
        if len(base) != 1 or base[0][1] != 1:
            continue
        z = base[0][0]
        s = sx.get(z)
        if not s:
            continue
        fm = tuple((i - nb, e) for i, e in m if i >= nb)
        out[fm] = out.get(fm, 0) + c * s
    return Poly(rs.fiber.table, out)


def l0_action(rs: RelativeSullivan, x, phi: Poly) -> Poly:
    """Canonical representative of ``x·[phi]`` in fiber cohomology."""
    if phi.is_zero():
        return Poly.zero(rs.fiber.table)
    n = phi.degree()
    if not rs.fiber.d(phi).is_zero():
        raise NotCocycle(f"{phi} is not a cocycle of the fiber")
    theta = _theta(rs, rs.dual(x), rs.to_total(phi))
    if n == 0:
        return Poly.zero(rs.fiber.table)
    return rs.fiber_cohomology(n).normal_form(theta)


def exp_action(rs: RelativeSullivan, x, phi: Poly) -> Poly:
    """``Σ_i (1/i!) x^i·[phi]`` as a canonical representative."""
    if phi.is_zero():
        return phi
    n = phi.degree()
    if not rs.fiber.d(phi).is_zero():
        raise NotCocycle(f"{phi} is not a cocycle of the fiber")
    term = rs.fiber_cohomology(n).normal_form(phi) if n > 0 else phi
    total = term
    guard = (rs.filtration.max_level + 1) * max(n, 1) + 1
    i = 1
    while True:
        term = l0_action(rs, x, term).scale(Fraction(1, i))
        if term.is_zero():
            return total
        total = total + term
        i += 1
        if i > guard:
            raise FiltrationError("the action failed to terminate; filtration is not respected")


def action_on_generators(rs: RelativeSullivan, x) -> QMatrix:
    """Column-convention matrix of x on W (indecomposable part of x·w)."""
    sx = rs.dual(x)
    k = len(rs.fiber.table)
    cols = []
    for j in range(k):
        theta = _theta(rs, sx, Poly.gen(rs.total.table, rs.n_base + j))
        col = [Fraction(0)] * k
        for m, c in theta.terms.items():
            if len(m) == 1 and m[0][1] == 1:
                col[m[0][0]] = c
        cols.append(col)
    return QMatrix.from_columns(cols, k) if cols else QMatrix(0, 0)


def theta_generators(rs: RelativeSullivan, x, j: int) -> set[int]:
    """Fiber generators occurring in the action of x on the j-th fiber generator."""
    theta = _theta(rs, rs.dual(x), Poly.gen(rs.total.table, rs.n_base + j))
    return theta.generators_used()


def nilpotency_index(m: QMatrix) -> int | None:
    p = m
    for k in range(1, m.rows + 2):
        if p.is_zero():
            return k
        p = p @ m
    return None


@dataclass
class HolonomyReport:
    degree: int
    basis: list
    matrices: dict  # dual element name -> QMatrix (row convention)
    nilpotency: dict
    nilpotent: bool

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "basis": [str(b) for b in self.basis],
            "matrices": {k: [[str(c) for c in row] for row in m.to_rows()]
                         for k, m in self.matrices.items()},
            "nilpotency": self.nilpotency,
            "nilpotent": self.nilpotent,
        }


def action_matrix(rs: RelativeSullivan, x, n: int) -> QMatrix:
    h = rs.fiber_cohomology(n)
    rows = [h.class_coords(l0_action(rs, x, rep)) for rep in h.representatives]
    return QMatrix.from_rows(rows, h.dim)


def exp_matrix(rs: RelativeSullivan, x, n: int) -> QMatrix:
    h = rs.fiber_cohomology(n)
    rows = [h.class_coords(exp_action(rs, x, rep)) for rep in h.representatives]
    return QMatrix.from_rows(rows, h.dim)


def holonomy_matrices(rs: RelativeSullivan, n: int) -> HolonomyReport:
    h = rs.fiber_cohomology(n)
    mats, nil = {}, {}
    for i in rs.base_degree1():
        name = rs.total.table[i].name
        m = action_matrix(rs, {i: 1}, n)
        mats[name] = m
        nil[name] = nilpotency_index(m)
    return HolonomyReport(n, h.representatives, mats, nil,
                          all(v is not None for v in nil.values()))


# ---------- the cancellation lemma ----------

def _exp_nilpotent(a: QMatrix) -> QMatrix:
    out = QMatrix.identity(a.rows)
    term = QMatrix.identity(a.rows)
    for i in range(1, a.rows + 2):
        term = (term @ a).scale(Fraction(1, i))
        if term.is_zero():
            return out
        out = out + term
    raise FiltrationError("action on W is not nilpotent")


def _rand_q(rng: random.Random, lo=-3, hi=3, zero_ok=True) -> Fraction:
    while True:
        q = Fraction(rng.randint(lo, hi), rng.randint(1, 3))
        if q or zero_ok:
            return q


@dataclass
class Lemma31Report:
    trials: int
    passed: int
    hypothesis_hits: int
    witness_checks: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "passed": self.passed,
            "hypothesis_hits": self.hypothesis_hits,
            "witness_checks": self.witness_checks,
            "violations": self.violations[:10],
        }


def lemma31_witness(rs: RelativeSullivan, f: tuple) -> tuple[int, int]:
    """Minimal filtration level r0 where f is nonzero and a generator there."""
    names = rs.fiber.table.names
    levels = [rs.filtration.assignment[nm] for nm in names]
    support = [j for j, a in enumerate(f) if a]
    if not support:
        raise SullivanError("the functional must be nonzero")
    r0 = min(levels[j] for j in support)
    w = min(j for j in support if levels[j] == r0)
    return r0, w


def lemma31_check(rs: RelativeSullivan, trials: int, seed: int = 0) -> Lemma31Report:
    """If Σ c_i (f·α_i) = 0 for a nonzero functional f on W, then Σ c_i = 0.

    Each trial draws group elements α (exponentials of random dual elements,
    sometimes products of two), a random nonzero f, and coefficients c that
    are either random, drawn from the solution space of the hypothesis, or a
    cancelling pair.  The directed argument is replayed on every trial: with
    w a generator of minimal level r0 on which f is nonzero,
    (f·α_i)(w) = f(w) for all i, hence Σ c_i (f·α_i)(w) = (Σ c_i) f(w).
    """
    deg1 = rs.base_degree1()
    k_w = len(rs.fiber.table)
    basis_actions = [action_on_generators(rs, {i: 1}) for i in deg1]
    report = Lemma31Report(trials, 0, 0, 0)
    if k_w == 0:
        report.passed = trials
        return report

    def group_element(rng):
        mat = QMatrix.identity(k_w)
        for _ in range(rng.choice((1, 1, 2))):
            a = QMatrix(k_w, k_w)
            for m in basis_actions:
                r = _rand_q(rng)
                if r:
                    a = a + m.scale(r)
            mat = mat @ _exp_nilpotent(a)
        return mat

    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        f = tuple(_rand_q(rng) for _ in range(k_w))
        while not any(f):
            f = tuple(_rand_q(rng) for _ in range(k_w))
        mode = t % 3
        k = rng.randint(1, k_w + 2)
        alphas = [group_element(rng) for _ in range(k)]
        # f·α as a functional: (f·α)(w) = f(α·w), i.e. the row vector f^T E
        fa = [tuple(sum(f[r] * E[r, c] for r in range(k_w)) for c in range(k_w)) for E in alphas]
        if mode == 0:
            c = [_rand_q(rng) for _ in range(k)]
        elif mode == 1:
            sols = nullspace_basis(QMatrix.from_columns(fa, k_w))
            if sols:
                c = [sum((_rand_q(rng) * s[i] for s in sols), Fraction(0)) for i in range(k)]
            else:
                c = [Fraction(0)] * k
        else:
            alphas.append(alphas[0])
            fa.append(fa[0])
            q = _rand_q(rng, zero_ok=False)
            c = [q] + [Fraction(0)] * (k - 1) + [-q]
        g = [sum((ci * v[col] for ci, v in zip(c, fa)), Fraction(0)) for col in range(k_w)]
        ok = True
        if not any(g):
            report.hypothesis_hits += 1
            if sum(c) != 0:
                ok = False
                report.violations.append({"trial": t, "c": [str(x) for x in c],
                                          "f": [str(x) for x in f]})
        r0, w = lemma31_witness(rs, f)
        report.witness_checks += 1
        if any(v[w] != f[w] for v in fa) or g[w] != sum(c) * f[w]:
            ok = False
            report.violations.append({"trial": t, "witness": rs.fiber.table[w].name, "r0": r0})
        if ok:
            report.passed += 1
    return report
