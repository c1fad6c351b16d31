from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from fermatflats.fields import QQ, CyclotomicField, PrimeField
from fermatflats.poly import (GREVLEX, LEX, EXP_CAP, MonomialOrder, PolyRing, RingMismatch,
                              coefficient_of, elimination_order, from_json, from_text,
                              linear_substitution, min_degree_in, partial_derivative,
                              substitute_var, to_cas, to_json, to_text)

R3 = PolyRing(3)
x0, x1, x2 = R3.gens()

# sympy expansion of (x0^3-x1^3)(x0^3-x2^3)(x1^3-x2^3)
F23_TERMS = {
    (0, 3, 6): -1, (0, 6, 3): 1, (3, 0, 6): 1,
    (3, 6, 0): -1, (6, 0, 3): -1, (6, 3, 0): 1,
}


def to_sympy(p, syms):
    return sympy.Integer(0) + sum(sympy.Rational(c) * sympy.prod(s**k for s, k in zip(syms, e)) for e, c in p.terms.items())


def from_sympy(expr, ring, syms):
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return ring.from_terms({e: Fraction(int(c.p), int(c.q)) for e, c in poly.terms()})


def test_difference_of_squares():
    assert (x0 + x1) * (x0 - x1) == x0**2 - x1**2


def test_multiply_by_zero():
    assert (x0 * 0).terms == {}
    assert (x0 * R3.zero()).is_zero()


def test_fermat_expansion_golden():
    F = (x0**3 - x1**3) * (x0**3 - x2**3) * (x1**3 - x2**3)
    assert F.terms == F23_TERMS
    assert F.degree() == 9 and F.is_homogeneous()


def test_substitute_var_examples():
    assert substitute_var(x0**2 + x0 * x1 + x2, 0, 0) == x2
    F = R3.from_terms(F23_TERMS)
    ft = substitute_var(F, 0, 0)
    # x0 := 0 leaves x1^3 x2^3 [x1 x2] with the sign of the two dropped factors
    assert ft == x1**3 * x2**3 * (x1**3 - x2**3)
    K = CyclotomicField(3)
    S = PolyRing(3, K)
    z = K.root_of_unity(1)
    y0, y1, _ = S.gens()
    assert substitute_var(y0 - y1 * z, 0, y1 * z).is_zero()


def test_partial_derivative_examples():
    assert partial_derivative(x0**3, 0) == 3 * x0**2
    assert partial_derivative(x0**5 - x1**5, 1) == -5 * x1**4
    assert partial_derivative(partial_derivative(x2**2 * x0, 2), 2) == 2 * x0


def test_coefficient_of_examples():
    F = R3.from_terms(F23_TERMS)
    assert coefficient_of(substitute_var(F, 0, 0), (0, 6, 3)) == 1
    assert coefficient_of(R3.zero(), (1, 2, 3)) == 0
    with pytest.raises(ValueError):
        coefficient_of(F, (1, 2))


def test_linear_substitution_examples():
    p = x0**2 * x1 - 3 * x2
    assert linear_substitution(p, R3.gens()) == p
    # u sits in slot 0
    assert linear_substitution(x0 - x1, [x0 + x1, x1, x2]) == x0
    F = R3.from_terms(F23_TERMS)
    assert min_degree_in(F, (1, 2)) == 3


def test_linear_substitution_truncation_is_exact_low_part():
    p = (x0 + x1 + x2) ** 5
    images = [x0 + x2, x1 - x2, x2]
    full = linear_substitution(p, images)
    low = linear_substitution(p, images, truncate=((0, 1), 2))
    assert low.terms == {e: c for e, c in full.terms.items() if e[0] + e[1] <= 2}


def test_linear_substitution_rejects_nonlinear():
    with pytest.raises(ValueError):
        linear_substitution(x0, [x0**2, x1, x2])


def test_min_degree_in_examples():
    assert min_degree_in(x0**2 * x1 + x0**3, [0]) == 2
    assert min_degree_in(1 + x0, [0]) == 0
    assert min_degree_in(x1**3 - x2**3, [1, 2]) == 3
    with pytest.raises(ValueError):
        min_degree_in(R3.zero(), [0])


def test_ring_mismatch():
    other = PolyRing(3, PrimeField(7))
    with pytest.raises(RingMismatch):
        x0 + other.gen(0)


def test_exponent_cap():
    with pytest.raises(OverflowError):
        R3.monomial((EXP_CAP + 1, 0, 0))
    big = R3.monomial((EXP_CAP - 1, 0, 0))
    with pytest.raises(OverflowError):
        big * big


@pytest.mark.parametrize("order, expected", [
    (LEX, [(2, 0, 0), (1, 1, 1), (0, 3, 0)]),
    (GREVLEX, [(0, 3, 0), (1, 1, 1), (2, 0, 0)]),
])
def test_orders(order, expected):
    mons = [(0, 3, 0), (2, 0, 0), (1, 1, 1)]
    assert sorted(mons, key=order.key, reverse=True) == expected


def test_grevlex_against_sympy():
    mons = [(a, b, c) for a in range(4) for b in range(4) for c in range(4)]
    ours = sorted(mons, key=GREVLEX.key)
    key = sympy.polys.orderings.grevlex
    theirs = sorted(mons, key=key)
    assert ours == theirs


def test_elimination_order():
    order = elimination_order(1)
    # anything involving x0 beats anything free of it
    assert order.key((1, 0, 0)) > order.key((0, 5, 5))


def test_order_pickles():
    import pickle
    order = MonomialOrder("block", block=2)
    assert pickle.loads(pickle.dumps(order)) == order


@pytest.mark.parametrize("field", [QQ, PrimeField(7), CyclotomicField(3)], ids=lambda f: f.spec())
def test_text_and_json_roundtrip(field):
    R = PolyRing(3, field)
    c = field(Fraction(-3, 2)) if not isinstance(field, CyclotomicField) else field.root_of_unity(2)
    p = R.gen(0) ** 3 * c + R.gen(1) * R.gen(2) - 5
    assert from_text(to_text(p), R) == p
    assert from_json(to_json(p)) == p


def test_text_format():
    p = x0**2 * x1 - Fraction(1, 2) * x2 + 3
    assert to_text(p) == "x0^2*x1 - 1/2*x2 + 3"


def test_cas_export():
    gens = [x0 * (x1**3 - x2**3)]
    assert to_cas(gens, "singular").startswith("ring r = 0,(x0,x1,x2),dp;")
    assert "ideal(" in to_cas(gens, "macaulay2")
    with pytest.raises(ValueError):
        to_cas(gens, "maple")


# -- ring axioms and sympy oracle --------------------------------------------

coeff = st.integers(-5, 5)
monomial = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monomial, coeff, max_size=6).map(R3.from_terms)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    assert a * R3.one() == a


@given(polys, polys)
def test_multiplication_matches_sympy(a, b):
    syms = sympy.symbols("x0:3")
    assert from_sympy(to_sympy(a, syms) * to_sympy(b, syms), R3, syms) == a * b


@given(polys, polys)
def test_substitution_matches_sympy(a, b):
    syms = sympy.symbols("x0:3")
    expected = to_sympy(a, syms).subs(syms[1], to_sympy(b, syms))
    assert from_sympy(expected, R3, syms) == substitute_var(a, 1, b)
