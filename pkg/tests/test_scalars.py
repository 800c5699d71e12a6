import cmath
import random

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from qore import CyclotomicField, GenericField, cyclotomic_poly, evaluate_at_root, scalar_invert
from qore.errors import DomainError, ParseError
from qore.qarith import LaurentIntPoly
from qore.scalars import ScalarField, cyclotomic_with_sqrt, random_scalar

q, p, z, t = sp.symbols("q p zeta t")


def to_sympy(x):
    return sp.sympify(str(x).replace("^", "**"), locals={"q": q, "p": p, "zeta": z})


@pytest.mark.parametrize("r", range(1, 31))
def test_cyclotomic_matches_sympy(r):
    got = sum(c * t**e for e, c in cyclotomic_poly(r).terms.items())
    assert sp.expand(got - sp.cyclotomic_poly(r, t)) == 0


def test_cyclotomic_domain():
    with pytest.raises(DomainError):
        cyclotomic_poly(0)


small = st.integers(-3, 3)
poly_text = st.lists(st.tuples(small, st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=3).map(
    lambda ts: " + ".join(f"({c})*q^{a}*p^{b}" for c, a, b in ts)
)


@given(poly_text, poly_text, poly_text)
def test_generic_matches_sympy(a, b, c):
    G = GenericField(("q", "p"))
    A, B, C = G.parse(a), G.parse(b), G.parse(c)
    sa, sb, sc = (sp.sympify(x.replace("^", "**"), locals={"q": q, "p": p}) for x in (a, b, c))
    assert sp.simplify(to_sympy(A * B + C) - (sa * sb + sc)) == 0
    if not C.is_zero():
        assert sp.simplify(to_sympy((A - B) / C) - (sa - sb) / sc) == 0


def test_generic_canonical_form():
    G = GenericField(("q",))
    x = G.parse("(q^2 - 1)/(q - 1)")
    assert x == G.parse("q + 1")
    assert hash(x) == hash(G.parse("1 + q"))
    assert G.parse("2*q/(2*q^2)") == G.parse("q^-1")


def test_generic_laurent_flag():
    G = GenericField(("q",))
    assert G.parse("q^-3 + 1").is_laurent()
    assert not G.parse("1/(q - 1)").is_laurent()


def test_sqrt_mode():
    G = GenericField(("s",), sqrt=True)
    assert G.gen("q") == G.gen("s") ** 2
    assert G.parse("q^-1") * G.parse("s^2") == G.one()


cyclo_elt = st.lists(st.integers(-4, 4), min_size=1, max_size=6)


def _cyclo(F, coeffs):
    g = F.generator()
    out = F.zero()
    for k, c in enumerate(coeffs):
        out = out + c * g**k
    return out, sum(c * z**k for k, c in enumerate(coeffs))


@given(st.sampled_from([3, 4, 5, 7, 8, 12]), cyclo_elt, cyclo_elt)
def test_cyclotomic_matches_sympy_reduction(r, ca, cb):
    F = CyclotomicField(r)
    phi = sp.cyclotomic_poly(r, z)
    (a, sa), (b, sb) = _cyclo(F, ca), _cyclo(F, cb)
    got = sp.expand(to_sympy(a * b + a))
    want = sp.rem(sp.expand(sa * sb + sa), phi, z)
    assert sp.expand(got - want) == 0
    if not b.is_zero():
        assert (a / b) * b == a


@given(st.sampled_from([3, 5, 6, 8, 9]), cyclo_elt)
def test_cyclotomic_numeric(r, ca):
    # numerical check against the complex embedding zeta -> exp(2 pi i / r)
    F = CyclotomicField(r)
    a, sa = _cyclo(F, ca)
    w = cmath.exp(2j * cmath.pi / r)
    val = complex(sa.subs(z, w).evalf())
    got = complex(to_sympy(a).subs(z, w).evalf())
    assert abs(val - got) < 1e-9
    if not a.is_zero():
        inv = complex(to_sympy(scalar_invert(a)).subs(z, w).evalf())
        assert abs(inv * val - 1) < 1e-9


def test_zeta_powers_and_log():
    F = CyclotomicField(12)
    g = F.generator()
    assert g**12 == F.one()
    assert all(g**k != F.one() for k in range(1, 12))
    for k in range(12):
        assert F.log(g**k) == k
    assert F.log(F(2)) is None


def test_specialize_homomorphism():
    G = GenericField(("q", "p"))
    F = CyclotomicField(7, {"q": 1, "p": 3}, G)
    rng = random.Random(0)
    for _ in range(50):
        a, b = random_scalar(G, rng, 2), random_scalar(G, rng, 2)
        try:
            fa, fb = F.specialize(a), F.specialize(b)
            fab = F.specialize(a * b)
        except DomainError:
            continue
        assert fab == fa * fb
        assert F.specialize(a + b) == fa + fb


def test_specialize_pole():
    G = GenericField(("q",))
    F = CyclotomicField(3, {"q": 1}, G)
    with pytest.raises(DomainError):
        F.specialize(G.parse("1/(q^2 + q + 1)"))


def test_evaluate_at_root():
    from qore import t_binomial

    F = CyclotomicField(4)
    assert evaluate_at_root(t_binomial(4, 2), F).is_zero()
    assert evaluate_at_root(LaurentIntPoly({-1: 1}), F) == -F.generator()


def test_parse_errors():
    G = GenericField(("q",))
    for bad in ("q +", "(q", "x", "q^q", "1/0", ""):
        with pytest.raises((ParseError, DomainError)):
            G.parse(bad)


def test_division_by_zero():
    F = CyclotomicField(5)
    with pytest.raises((DomainError, ZeroDivisionError)):
        F.one() / F.zero()


@pytest.mark.parametrize(
    "field",
    [GenericField(("q", "p")), GenericField(("s",), sqrt=True), CyclotomicField(5), cyclotomic_with_sqrt(3)],
)
def test_field_json_roundtrip(field):
    assert ScalarField.from_json(field.to_json()) == field


@given(st.sampled_from([5, 7]), st.integers(0, 10**6))
def test_field_axioms_cyclotomic(r, seed):
    F = CyclotomicField(r)
    rng = random.Random(seed)
    a, b, c = (random_scalar(F, rng, 3) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if not a.is_zero():
        assert a * a.inverse() == F.one()
