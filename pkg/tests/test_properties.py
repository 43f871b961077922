"""Randomised algebraic properties, seeded so failures reproduce."""
from __future__ import annotations

import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rankmetric.codes import Word, codeword_from_poly, contains, distance, find_eta, make_code, rank_weight
from rankmetric.fields import as_ints, parse_field_spec
from rankmetric.linearized import (
    SigmaPoly,
    Subspace,
    compose,
    evaluate,
    kernel_basis,
    reduce_mod_theta,
    right_divide,
)

BINARY = parse_field_spec("2:4:4")
TERNARY = parse_field_spec("3:4:4")
QUINTIC = parse_field_spec("2:5:5")
TWISTED_TOWER = parse_field_spec("3:6:6")

GAB42 = make_code(BINARY, "G", 2)
TWISTED = make_code(TWISTED_TOWER, "H", 3, eta=find_eta(TWISTED_TOWER, "H", 3), h=1)

SUITE = settings(max_examples=1000, derandomize=True, deadline=None)

towers = st.sampled_from([BINARY, TERNARY, QUINTIC])


def coefficients(tower, max_len):
    return st.lists(st.integers(0, tower.GFqm.order - 1), max_size=max_len)


@st.composite
def poly_pairs(draw):
    tower = draw(towers)
    s = draw(st.sampled_from([e for e in range(1, tower.m) if math.gcd(e, tower.m) == 1]))
    f = SigmaPoly(tower, s, tuple(draw(coefficients(tower, 8))))
    g = SigmaPoly(tower, s, tuple(draw(coefficients(tower, 5))))
    return f, g


@st.composite
def poly_and_subspace(draw):
    tower = draw(towers)
    nonzero = st.integers(1, tower.GFqm.order - 1)
    space = Subspace.span(tower, draw(st.lists(nonzero, min_size=1, max_size=tower.m)))
    f = SigmaPoly(tower, 1, tuple(draw(coefficients(tower, 2 * tower.m))))
    return f, space


@st.composite
def element_pairs(draw):
    tower = draw(towers)
    x = draw(st.integers(0, tower.GFqm.order - 1))
    y = draw(st.integers(0, tower.GFqm.order - 1))
    e = draw(st.integers(0, tower.m - 1))
    return tower, tower.GFqm(x), tower.GFqm(y), e


@SUITE
@given(poly_pairs())
def test_right_division_reconstructs(pair):
    f, g = pair
    assume(not g.is_zero)
    quotient, remainder = right_divide(f, g)
    assert compose(quotient, g, fold=False) + remainder == f
    assert remainder.degree < g.degree


@SUITE
@given(poly_and_subspace())
def test_reduction_modulo_annihilator(case):
    f, space = case
    reduced = reduce_mod_theta(f, space)
    points = space.elements()
    assert np.array_equal(as_ints(evaluate(reduced, points)), as_ints(evaluate(f, points)))
    assert reduced.degree < space.dim
    assert reduce_mod_theta(reduced, space) == reduced


@SUITE
@given(coefficients(BINARY, 2))
def test_rank_is_length_minus_kernel(coeffs):
    poly = SigmaPoly(BINARY, 1, tuple(coeffs))
    word = codeword_from_poly(GAB42, poly)
    assert rank_weight(word) == GAB42.n - kernel_basis(poly, GAB42.evaluation_space).dim
    assert contains(GAB42, word)


@SUITE
@given(coefficients(BINARY, 2), coefficients(BINARY, 2))
def test_distinct_codewords_are_far_apart(a, b):
    u = codeword_from_poly(GAB42, SigmaPoly(BINARY, 1, tuple(a)))
    v = codeword_from_poly(GAB42, SigmaPoly(BINARY, 1, tuple(b)))
    assume(u != v)
    assert distance(u, v) >= GAB42.d


@SUITE
@given(
    st.integers(0, TWISTED_TOWER.GFqm.order - 1),
    st.lists(st.integers(0, TWISTED_TOWER.GFqm.order - 1), min_size=2, max_size=2),
)
def test_twisted_codewords_are_members(a, middle):
    tower = TWISTED_TOWER
    top = tower.GFqm(TWISTED.eta) * tower.frobenius(tower.GFqm(a), TWISTED.h)
    poly = SigmaPoly.from_terms(tower, 1, {0: a, 1: middle[0], 2: middle[1], 3: int(top)})
    word = codeword_from_poly(TWISTED, poly)
    assert contains(TWISTED, word)
    if any(word.entries):
        assert rank_weight(word) >= TWISTED.d


@SUITE
@given(element_pairs())
def test_norm_and_frobenius_are_homomorphisms(case):
    tower, x, y, e = case
    assert tower.norm(x * y) == tower.norm(x) * tower.norm(y)
    assert tower.frobenius(x + y, e) == tower.frobenius(x, e) + tower.frobenius(y, e)
    assert tower.frobenius(x * y, e) == tower.frobenius(x, e) * tower.frobenius(y, e)


@SUITE
@given(st.lists(st.integers(0, BINARY.GFqm.order - 1), min_size=4, max_size=4))
def test_distance_to_zero_is_rank_weight(entries):
    word = Word(BINARY, tuple(entries))
    zero = Word.zero(BINARY, 4)
    assert distance(word, zero) == rank_weight(word)
    assert distance(word, word) == 0
    assert rank_weight(word) <= 4


@SUITE
@given(st.lists(st.lists(st.integers(0, BINARY.GFqm.order - 1), min_size=4, max_size=4), min_size=3, max_size=3))
def test_rank_distance_is_a_metric(triple):
    u, v, w = (Word(BINARY, tuple(entries)) for entries in triple)
    assert distance(u, v) == distance(v, u)
    assert distance(u, w) <= distance(u, v) + distance(v, w)
    assert (distance(u, v) == 0) == (u == v)
