import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from sullivan.apl import (
    FiniteSimplicialSet,
    PolyForm,
    apl_cochain_compare,
    check_simplex,
    circle,
    degeneracy,
    face,
    form_d,
    integrate,
    integration_sign,
    load_family,
    parse_form,
    restrict_to_faces,
    standard_simplex,
)
from sullivan.cdga import load, parse_presentation
from sullivan.errors import IncompatibleFamily, ParseError, SullivanError

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def F(text, n):
    return parse_form(text, n)


def random_form(rng, n, k=None, terms=3, max_exp=2):
    out = PolyForm.zero(n)
    for _ in range(terms):
        deg = rng.randint(0, n) if k is None else k
        exps = tuple(rng.randint(0, max_exp) for _ in range(n))
        dts = tuple(sorted(rng.sample(range(1, n + 1), deg)))
        out = out + PolyForm(n, {(exps, dts): Fraction(rng.randint(-3, 3), rng.randint(1, 2))})
    return out


def test_d_examples():
    assert form_d(F("t1", 1)) == F("dt1", 1)
    assert form_d(F("t1*t2 dt1", 2)) == F("-1*t1 dt1^dt2", 2)
    assert form_d(F("t1 dt2", 2)) == F("dt1^dt2", 2)


def test_face_examples():
    assert face(F("t1", 1), 0) == PolyForm.constant(0, 1)
    assert face(F("t1", 1), 1).is_zero()
    assert face(F("dt1", 1), 0).is_zero() and face(F("dt1", 1), 1).is_zero()
    assert face(F("t2", 2), 1) == F("t1", 1)
    with pytest.raises(SullivanError):
        face(F("t1", 1), 2)


def test_degeneracy_examples():
    assert degeneracy(PolyForm.constant(0, 1), 0) == PolyForm.constant(1, 1)
    assert degeneracy(F("t1", 1), 0) == F("t2", 2)
    assert degeneracy(F("t1", 1), 1) == F("t1 + t2", 2)
    with pytest.raises(SullivanError):
        degeneracy(F("t1", 1), 2)


def test_integration_examples():
    assert integrate(F("dt1", 1)) == -1
    assert integrate(F("t1 dt1", 1)) == Fraction(-1, 2)
    assert integrate(F("dt1^dt2", 2)) == integration_sign(2) * Fraction(1, 2)
    assert integrate(F("t1^2*t2 dt1^dt2^dt3", 3)) == integration_sign(3) * Fraction(2, 720)
    assert integrate(PolyForm.constant(0, 5)) == 5
    with pytest.raises(SullivanError):
        integrate(F("t1", 1))


def test_t0_elimination():
    assert F("t0", 2) == F("1 + -1*t1 + -1*t2", 2)
    assert F("dt0", 1) == F("-1 dt1", 1)
    assert F("dt1^dt1", 2).is_zero()
    assert F("dt2^dt1", 2) == F("-1 dt1^dt2", 2)


def test_parse_and_render():
    f = F("t1^2*t2 dt1^dt3 + -1/2 dt2", 3)
    assert parse_form(str(f), 3) == f
    with pytest.raises(ParseError):
        parse_form("t4", 3)
    with pytest.raises(ParseError):
        parse_form("x1 dt1", 1)
    with pytest.raises(ParseError):
        parse_form("", 1)


def test_simplicial_identities():
    rng = random.Random(0)
    for _ in range(60):
        n = rng.randint(2, 3)
        f = random_form(rng, n)
        for j in range(n + 1):
            for i in range(j):
                assert face(face(f, j), i) == face(face(f, i), j - 1)
        g = random_form(rng, n - 1)
        m = n - 1
        for j in range(m + 1):
            for i in range(m + 2):
                lhs = face(degeneracy(g, j), i)
                if i < j:
                    rhs = degeneracy(face(g, i), j - 1) if m >= 1 else None
                elif i in (j, j + 1):
                    rhs = g
                else:
                    rhs = degeneracy(face(g, i - 1), j)
                if rhs is not None:
                    assert lhs == rhs
        for j in range(m + 1):
            for i in range(j + 1):
                assert degeneracy(degeneracy(g, j), i) == degeneracy(degeneracy(g, i), j + 1)


def test_d_squared_and_chain_operators():
    rng = random.Random(1)
    for _ in range(100):
        n = rng.randint(1, 3)
        f = random_form(rng, n)
        assert form_d(form_d(f)).is_zero()
        i = rng.randint(0, n)
        assert face(form_d(f), i) == form_d(face(f, i))
        assert degeneracy(form_d(f), i) == form_d(degeneracy(f, i))


def test_integration_linear_and_degenerate():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randint(1, 3)
        a, b = random_form(rng, n, n), random_form(rng, n, n)
        c = Fraction(rng.randint(-4, 4), 3)
        assert integrate(a + b.scale(c)) == integrate(a) + c * integrate(b)
        g = random_form(rng, n - 1, terms=4)
        for j in range(n):
            # forms pulled back along a degeneracy have no top-degree part
            s = degeneracy(g, j)
            top = PolyForm(n, {k: v for k, v in s.terms.items() if len(k[1]) == n})
            assert integrate(top) == 0


def test_signs_pinned():
    assert [integration_sign(n) for n in range(5)] == [1, -1, -1, 1, 1]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stokes_on_standard_simplices(n):
    rng = random.Random(n)
    K = standard_simplex(n)
    for k in range(n):
        for _ in range(8):
            fam = restrict_to_faces(K, random_form(rng, n, k))
            assert apl_cochain_compare(K, fam).ok


def test_other_sign_sequences_fail():
    # flipping s_2 breaks the cochain map on Δ[2]
    import sullivan.apl as apl

    K = standard_simplex(2)
    fam = restrict_to_faces(K, F("t1^2 dt2", 2))
    assert apl_cochain_compare(K, fam).ok
    orig = apl.integration_sign
    try:
        apl.integration_sign = lambda n: -orig(n) if n == 2 else orig(n)
        assert not apl_cochain_compare(K, fam).ok
    finally:
        apl.integration_sign = orig


def test_circle_family():
    K = circle()
    rep = apl_cochain_compare(K, {"c0": PolyForm.zero(0), "c1": F("dt1", 1)})
    assert rep.ok and rep.cochain == {"c0": 0, "c1": -1}
    one = apl_cochain_compare(K, {"c0": PolyForm.constant(0, 1), "c1": PolyForm.constant(1, 1)})
    assert one.ok and one.cochain == {"c0": 1, "c1": 0}
    with pytest.raises(IncompatibleFamily):
        apl_cochain_compare(K, {"c0": PolyForm.zero(0), "c1": F("t1", 1)})


@pytest.mark.parametrize("name", ["circle_dt", "circle_one", "circle_bump", "boundary2",
                                  "boundary2_exact", "delta2", "delta3", "delta3_0form"])
def test_corpus_families(name):
    K, fam = load_family(json.loads((CORPUS / f"{name}.family.json").read_text()))
    assert not K.simplicial_identity_violations()
    assert apl_cochain_compare(K, fam).ok


def test_degenerate_faces():
    # Δ[2] with the edge v12 collapsed: its face list names a degenerate simplex
    K = FiniteSimplicialSet({0: ["a", "b"], 1: ["e", "f"], 2: ["s"]},
                            {"e": ["b", "a"], "f": ["b", "a"], "s": ["s0(b)", "f", "e"]})
    assert K.face_of("s0(b)", 0) == "b" and K.dimension("s0(b)") == 1
    assert not K.simplicial_identity_violations()
    # t0 vanishes on the collapsed edge, so it descends to K
    fam = {"a": PolyForm.constant(0, 1), "b": PolyForm.zero(0), "e": F("1 + -1*t1", 1),
           "f": F("1 + -1*t1", 1), "s": F("t0", 2)}
    rep = apl_cochain_compare(K, fam)
    assert rep.ok and rep.d_cochain["e"] == 1
    fam["s"] = F("t1", 2)
    with pytest.raises(IncompatibleFamily):
        apl_cochain_compare(K, fam)


def test_check_simplex_examples():
    p = parse_presentation("gen v 1\n")
    assert check_simplex(p, {"v": F("dt1", 1)}, 1).valid
    rep = check_simplex(p, {"v": F("t1", 1)}, 1)
    assert not rep.valid and rep.degree_mismatches
    heis = load(CORPUS / "heisenberg.cdga")
    rng = random.Random(4)
    for _ in range(20):
        a, b, c = (Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3))
        sigma = {"v1": F("dt1", 1).scale(a), "v2": F("dt1", 1).scale(b), "v3": F("dt1", 1).scale(c)}
        assert check_simplex(heis, sigma, 1).valid


def test_check_simplex_detects_violation():
    heis = load(CORPUS / "heisenberg.cdga")
    sigma = {"v1": F("dt1", 2), "v2": F("dt2", 2), "v3": PolyForm.zero(2)}
    rep = check_simplex(heis, sigma, 2)
    assert not rep.valid and rep.violations
    sigma["v3"] = F("t1 dt2", 2)
    assert check_simplex(heis, sigma, 2).valid
