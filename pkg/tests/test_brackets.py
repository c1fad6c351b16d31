import pytest
import sympy
from sympy.combinatorics import Permutation
from hypothesis import given, strategies as st

from fermatflats.brackets import (Bracket, DuplicateIndex, expand, lemma_sweep, normalize,
                                  substitution_report, verify_expansion_rule, verify_laplace,
                                  verify_substitution, verify_useful_rule)
from fermatflats.poly import PolyRing

R = PolyRing(6)
x = R.gens()


def test_single_index_bracket_is_one():
    assert expand([0], R, 7) == R.one()


def test_pair_bracket():
    assert expand([0, 1], R, 3) == x[0] ** 3 - x[1] ** 3


def test_four_term_example():
    lhs = expand([0, 1, 2, 3], R, 3)
    rhs = expand([0, 1, 2], R, 3)
    for i in range(3):
        rhs = rhs * (x[i] ** 3 - x[3] ** 3)
    assert lhs == rhs


@pytest.mark.parametrize("indices, expected", [
    ((1, 0), ((0, 1), -1)),
    ((0, 1, 2), ((0, 1, 2), 1)),
    ((2, 0, 1), ((0, 1, 2), 1)),
    ((2, 1, 0), ((0, 1, 2), -1)),
])
def test_normalize(indices, expected):
    assert normalize(indices) == expected


@given(st.permutations(range(5)))
def test_normalize_sign_matches_expansion(perm):
    sorted_idx, sign = normalize(perm)
    assert expand(perm, R, 3) == expand(sorted_idx, R, 3) * sign


@given(st.permutations(range(5)))
def test_normalize_sign_matches_sympy(perm):
    assert normalize(perm)[1] == Permutation(list(perm)).signature()


def test_repeated_index():
    with pytest.raises(DuplicateIndex):
        expand([0, 1, 0], R, 3)
    assert expand([0, 1, 0], R, 3, strict=False).is_zero()
    with pytest.raises(DuplicateIndex):
        normalize([2, 2])


def test_bracket_literal():
    b = Bracket.parse("[0 2 1]", 4)
    assert b.indices == (0, 2, 1)
    assert b.degree() == 12
    assert str(b) == "[0 2 1]"
    nb, sign = b.normalize()
    assert nb.indices == (0, 1, 2) and sign == -1
    with pytest.raises(ValueError):
        Bracket.parse("0 1", 3)


def test_bracket_against_sympy():
    syms = sympy.symbols("x0:4")
    expected = sympy.expand(sympy.prod(syms[p] ** 4 - syms[q] ** 4
                                       for q in range(4) for p in range(q)))
    poly = sympy.Poly(expected, *syms)
    ring = PolyRing(4)
    assert expand(range(4), ring, 4).terms == {e: int(c) for e, c in poly.terms()}


@pytest.mark.parametrize("k, n", [(3, 3), (2, 3), (4, 5)])
def test_expansion_rule(k, n):
    assert verify_expansion_rule(k, n)


def test_expansion_rule_on_scrambled_indices():
    assert verify_expansion_rule(3, 3, indices=(3, 0, 4, 1))


@pytest.mark.parametrize("k, n", [(1, 3), (2, 3), (3, 4)])
def test_laplace(k, n):
    assert verify_laplace(k, n)


@pytest.mark.parametrize("k, n", [(2, 3), (3, 4)])
def test_substitution_fresh(k, n):
    assert verify_substitution(k, n)


def test_substitution_example_three_terms():
    ring = PolyRing(4)
    # [x y z] = [w y z] + [x w z] + [x y w] with w = x3
    lhs = expand([0, 1, 2], ring, 3)
    rhs = expand([3, 1, 2], ring, 3) + expand([0, 3, 2], ring, 3) + expand([0, 1, 3], ring, 3)
    assert lhs == rhs


def test_substitution_collision_degenerates():
    rep = substitution_report(2, 3)
    assert rep["fresh"]
    assert all(rep["collision"].values())


@pytest.mark.parametrize("k, n", [(2, 3), (3, 3)])
def test_useful_rule(k, n):
    assert verify_useful_rule(k, n)
    assert verify_useful_rule(k, n, specialize=True)


def test_lemma_sweep_small():
    results = lemma_sweep(3, [3])
    assert results and all(results.values())
    assert ("expansion", 1, 3) not in results


def test_lemma_sweep_parallel_matches_serial():
    assert lemma_sweep(2, [3, 4], jobs=2) == lemma_sweep(2, [3, 4])


def test_verify_rejects_small_k():
    with pytest.raises(ValueError):
        verify_laplace(0, 3)
