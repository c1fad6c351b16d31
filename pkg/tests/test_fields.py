from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from fermatflats.fields import (QQ, CyclotomicField, FieldError, PrimeField, cyclotomic_polynomial,
                                euler_phi, is_prime, parse_field, primes_congruent_one,
                                root_of_unity, supports_roots)


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_polynomial_matches_sympy(n):
    t = sympy.Symbol("t")
    expected = sympy.Poly(sympy.cyclotomic_poly(n, t), t).all_coeffs()[::-1]
    assert cyclotomic_polynomial(n) == [int(c) for c in expected]


@pytest.mark.parametrize("n, coeffs", [(1, [-1, 1]), (3, [1, 1, 1]), (4, [1, 0, 1])])
def test_cyclotomic_small(n, coeffs):
    assert cyclotomic_polynomial(n) == coeffs


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13, 31, 32003, 2**61 - 1])
def test_is_prime_true(p):
    assert is_prime(p)


@pytest.mark.parametrize("q", [0, 1, 4, 9, 561, 32001, 2**61 + 1])
def test_is_prime_false(q):
    assert not is_prime(q)


def test_euler_phi_against_sympy():
    for n in range(1, 200):
        assert euler_phi(n) == sympy.totient(n)


def test_rational_ops():
    assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert QQ.inv(4) == Fraction(1, 4)
    with pytest.raises(ZeroDivisionError):
        QQ.inv(0)


def test_prime_field_ops():
    F7 = PrimeField(7)
    assert F7.inv(3) == 5
    assert F7(Fraction(1, 2)) == 4
    with pytest.raises(ZeroDivisionError):
        F7.inv(0)


@pytest.mark.parametrize("bad", [1, 9, 2**64 + 13])
def test_prime_field_rejects(bad):
    with pytest.raises(FieldError):
        PrimeField(bad)


def test_root_of_unity_examples():
    K = CyclotomicField(3)
    assert root_of_unity(K, 3, 0) == 1
    assert root_of_unity(PrimeField(7), 3, 1) == 2
    z2 = root_of_unity(K, 3, 2)
    assert z2.coeffs == (-1, -1)
    z = K.root_of_unity(1)
    assert K.mul(1 + z, 1 + z * z) == 1
    assert K.pow(z, 3) == 1


def test_root_of_unity_mismatch():
    with pytest.raises(FieldError):
        root_of_unity(QQ, 3, 1)
    with pytest.raises(FieldError):
        root_of_unity(PrimeField(11), 3, 1)
    with pytest.raises(FieldError):
        root_of_unity(CyclotomicField(4), 3, 1)
    assert not supports_roots(PrimeField(11), 3)
    assert supports_roots(PrimeField(13), 3)


@pytest.mark.parametrize("p, n", [(7, 3), (13, 3), (13, 4), (31, 5), (32003, 1)])
def test_prime_root_has_exact_order(p, n):
    F = PrimeField(p)
    z = F.primitive_root_of_unity(n)
    orders = [k for k in range(1, n + 1) if pow(z, k, p) == 1]
    assert orders[0] == n


def test_primes_congruent_one():
    assert primes_congruent_one(3, 4) == [7, 13, 19, 31]
    assert primes_congruent_one(1, 2) == [2, 3]


@pytest.mark.parametrize("spec", ["rational", "prime:7", "cyclotomic:5"])
def test_parse_field_roundtrip(spec):
    assert parse_field(spec).spec() == spec


def test_parse_field_errors():
    with pytest.raises(FieldError):
        parse_field("cyclotomic")
    with pytest.raises(FieldError):
        parse_field("reals")
    assert parse_field("cyclotomic", n=4) == CyclotomicField(4)


def test_cyclotomic_serialization():
    K = CyclotomicField(5)
    z = K.root_of_unity(1)
    a = z * Fraction(3, 7) + 2
    assert K.from_str(K.to_str(a)) == a
    assert K.from_json(K.to_json(a)) == a


def test_cyclotomic_inverse_example():
    K = CyclotomicField(3)
    z = K.root_of_unity(1)
    assert K.inv(1 + z) == -z


# -- field axioms -------------------------------------------------------------

small = st.integers(-50, 50)
fractions = st.builds(Fraction, small, st.integers(1, 20))
FIELDS = [QQ, PrimeField(7), PrimeField(32003), CyclotomicField(3), CyclotomicField(5),
          CyclotomicField(12)]


def element(field, data):
    if isinstance(field, CyclotomicField):
        return field([data.draw(fractions) for _ in range(field.degree)])
    return field(data.draw(fractions)) if not isinstance(field, PrimeField) else field(data.draw(small))


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.spec())
@given(data=st.data())
def test_field_axioms(field, data):
    a, b, c = (element(field, data) for _ in range(3))
    add, mul = field.add, field.mul
    assert add(a, b) == add(b, a)
    assert mul(a, b) == mul(b, a)
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert add(a, field.zero) == a
    assert mul(a, field.one) == a
    assert field.is_zero(add(a, field.neg(a)))
    if not field.is_zero(a):
        assert field.is_one(mul(a, field.inv(a)))
