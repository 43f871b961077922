"""Tests for code families, membership and exhaustive distance scans."""
from __future__ import annotations

import numpy as np
import pytest

from rankmetric.codes import (
    RankCode,
    Word,
    code_from_descriptor,
    code_polynomials,
    code_to_descriptor,
    codeword_from_poly,
    contains,
    contains_poly,
    default_alpha,
    distance,
    enumerate_codewords,
    family_condition,
    find_eta,
    generator_words,
    make_code,
    min_distance_exhaustive,
    normalize_family,
    rank_weight,
    singleton_bound,
    singleton_size,
)
from rankmetric.errors import EnumerationGuardError, NormConditionError, ParameterError
from rankmetric.fields import FieldTower, as_ints, parse_field_spec
from rankmetric.linearized import SigmaPoly
from rankmetric.oracle import EnumGuard
from rankmetric.progress import EnumerationProgress


def test_normalize_family_aliases() -> None:
    assert normalize_family("gabidulin") == "G"
    assert normalize_family(" Twisted ") == "H"
    assert normalize_family("G_σ") == "G_sigma"
    with pytest.raises(ParameterError):
        normalize_family("reed-solomon")


def test_rank_weight_and_distance(f16: FieldTower) -> None:
    u = Word(f16, (1, 2, 3, 0))
    v = Word(f16, (1, 2, 0, 0))
    assert rank_weight(u) == 2
    assert u.rank == 2
    assert distance(u, v) == 1
    assert u.within(v, 1)
    assert not u.within(Word.zero(f16, 4), 1)
    with pytest.raises(ParameterError):
        u - Word(f16, (1, 2))


def test_gabidulin_parameters(gab42: RankCode) -> None:
    assert gab42.n == 4
    assert gab42.d == 3
    assert gab42.size == 256
    assert gab42.contains_g2
    assert gab42.gabidulin_index == 2
    assert gab42.alpha == default_alpha(gab42.tower)


def test_make_code_rejects_bad_parameters(f16: FieldTower) -> None:
    with pytest.raises(ParameterError):
        make_code(f16, "G", 5)
    with pytest.raises(ParameterError):
        make_code(f16, "G", 0)
    with pytest.raises(ParameterError):
        make_code(f16, "G", 2, 3)
    with pytest.raises(ParameterError):
        make_code(f16, "G_sigma", 2, 2)
    with pytest.raises(ParameterError):
        make_code(f16, "G", 2, alpha=[1, 2, 3])
    assert make_code(f16, "G_sigma", 2, 3).s == 3


def test_twisted_family_is_empty_over_f2(f16: FieldTower) -> None:
    assert "empty" in family_condition(f16, "H", 2, 1)
    with pytest.raises(NormConditionError):
        make_code(f16, "H", 2, eta=1)
    with pytest.raises(ParameterError):
        find_eta(f16, "H", 2)
    with pytest.raises(ParameterError):
        find_eta(f16, "G", 2)


def test_norm_condition_reports_the_norm(f81: FieldTower) -> None:
    # N(1) = 1 = (-1)^(mk) for m=4
    with pytest.raises(NormConditionError) as info:
        make_code(f81, "H", 2, eta=1)
    assert info.value.norm == 1
    eta = find_eta(f81, "H", 2)
    assert family_condition(f81, "H", 2, eta) is None
    assert int(f81.norm(f81.GFqm(eta))) == 2


def test_family_d_needs_even_m_and_odd_q(f16: FieldTower) -> None:
    odd = parse_field_spec("3:3:3")
    assert "even" in family_condition(odd, "D", 2, 1)
    assert "odd" in family_condition(f16, "D", 2, 1)
    with pytest.raises(NormConditionError):
        make_code(f16, "D", 2, eta=3)


def test_hbar_is_empty_in_characteristic_two(f64: FieldTower) -> None:
    assert "empty" in family_condition(f64, "Hbar", 3, 5)


def test_hbar_over_a_proper_extension_of_the_prime_field() -> None:
    tower = parse_field_spec("3^2:2:2")
    assert tower.q == 9
    eta = find_eta(tower, "Hbar", 1)
    assert int(tower.norm(tower.GFqm(eta), "p")) != 1
    code = make_code(tower, "Hbar", 1, eta=eta, h=1)
    assert code.d == 2
    assert min_distance_exhaustive(code) == 2

    a = tower.GFqm.primitive_element
    top = tower.GFqm(eta) * a**3
    member = SigmaPoly.from_terms(tower, 1, {0: int(a), 1: int(top)})
    assert contains_poly(code, member)
    assert contains(code, codeword_from_poly(code, member))
    # the top coefficient is η·a^p, not η·a^q
    wrong = SigmaPoly.from_terms(tower, 1, {0: int(a), 1: int(tower.GFqm(eta) * a**9)})
    assert a**3 != a**9
    assert not contains_poly(code, wrong)
    assert not contains(code, codeword_from_poly(code, wrong))


def test_membership_of_generated_words(gab42: RankCode) -> None:
    tower = gab42.tower
    f = SigmaPoly(tower, 1, (7, 13))
    word = codeword_from_poly(gab42, f)
    assert contains(gab42, word)
    assert contains_poly(gab42, f)
    assert contains(gab42, Word.zero(tower, 4))
    # a nonzero word of rank 1 < d cannot be a codeword
    assert not contains(gab42, Word(tower, (1, 0, 0, 0)))
    assert not contains_poly(gab42, SigmaPoly.monomial(tower, 1, 2))
    with pytest.raises(ParameterError):
        contains(gab42, Word(tower, (1, 0, 0)))


def test_twisted_membership_follows_the_top_coefficient(twisted63: RankCode) -> None:
    tower = twisted63.tower
    top = SigmaPoly.monomial(tower, 1, 3)
    assert not contains_poly(twisted63, top)
    assert not contains(twisted63, codeword_from_poly(twisted63, top))
    a = tower.GFqm(5)
    forced = int(tower.GFqm(twisted63.eta) * tower.frobenius(a, twisted63.h))
    member = SigmaPoly.from_terms(tower, 1, {0: 5, 1: 44, 3: forced})
    assert contains_poly(twisted63, member)
    assert contains(twisted63, codeword_from_poly(twisted63, member))
    assert not twisted63.contains_g2
    assert twisted63.gabidulin_index == 2


def test_enumerate_codewords_covers_the_code_once(gab42: RankCode) -> None:
    progress = EnumerationProgress(label="codewords")
    rows = np.concatenate(list(enumerate_codewords(gab42, progress=progress)))
    assert rows.shape == (256, 4)
    assert len({tuple(row) for row in rows.tolist()}) == 256
    assert all(contains(gab42, Word(gab42.tower, tuple(row))) for row in rows[:32].tolist())
    assert progress.processed == 256
    assert progress.state == "complete"


def test_generator_words_shape(gab42: RankCode) -> None:
    assert generator_words(gab42).shape == (8, 4)


def test_enumeration_guard_refuses(gab42: RankCode) -> None:
    with pytest.raises(EnumerationGuardError) as info:
        next(enumerate_codewords(gab42, EnumGuard(100)))
    assert info.value.requested == 256
    with pytest.raises(EnumerationGuardError):
        next(code_polynomials(gab42, EnumGuard(100)))


def test_code_polynomials_give_distinct_words(gab42: RankCode) -> None:
    words = {codeword_from_poly(gab42, poly).entries for poly in code_polynomials(gab42)}
    assert len(words) == 256


def test_min_distance_of_mrd_codes(gab42: RankCode, f81: FieldTower) -> None:
    assert min_distance_exhaustive(gab42) == 3
    d_code = make_code(f81, "D", 2, eta=find_eta(f81, "D", 2))
    assert min_distance_exhaustive(d_code) == 3


def test_min_distance_of_custom_code(f16: FieldTower) -> None:
    extra = SigmaPoly.monomial(f16, 1, 2)
    code = make_code(f16, "custom", 2, extra=[extra])
    assert not code.is_mrd_family
    assert contains_poly(code, extra)
    assert contains(code, codeword_from_poly(code, SigmaPoly(f16, 1, (1, 0, 1))))
    # x^4 + x vanishes on F_4, so the extra generator drops the distance
    assert min_distance_exhaustive(code) == 2
    with pytest.raises(ParameterError):
        make_code(f16, "custom", 1)


def test_singleton_size() -> None:
    assert singleton_size(4, 4, 2, 2) == 256
    assert singleton_bound(4, 4, 3, 2) == 256
    assert singleton_size(6, 4, 2, 3) == 3**12
    with pytest.raises(ParameterError):
        singleton_size(4, 5, 2, 2)


def test_descriptor_round_trip(gab42: RankCode, twisted63: RankCode) -> None:
    assert code_to_descriptor(gab42) == {
        "field": "2^1:4:4:13",
        "family": "G",
        "k": 2,
        "s": 1,
        "alpha": "default",
    }
    assert code_from_descriptor(code_to_descriptor(gab42)) == gab42
    descriptor = code_to_descriptor(twisted63)
    assert descriptor["eta"] == str(twisted63.eta)
    assert descriptor["h"] == 1
    assert code_from_descriptor(descriptor) == twisted63


def test_descriptor_with_automatic_eta(twisted63: RankCode) -> None:
    code = code_from_descriptor({"field": "3:6:6", "family": "H", "k": 3, "eta": "auto"})
    assert code == twisted63


def test_descriptor_with_explicit_alpha(f16: FieldTower) -> None:
    code = code_from_descriptor({"field": "2:4:4", "family": "G", "k": 2, "alpha": ["2", "1", "4", "8"]})
    assert code.alpha == (2, 1, 4, 8)
    assert code_to_descriptor(code)["alpha"] == ["2", "1", "4", "8"]
    with pytest.raises(ParameterError):
        code_from_descriptor({"family": "G", "k": 2})


def test_codeword_entries_are_evaluations(gab42: RankCode) -> None:
    f = SigmaPoly(gab42.tower, 1, (3, 1))
    word = codeword_from_poly(gab42, f)
    alpha = gab42.tower.GFqm(list(gab42.alpha))
    assert word.entries == tuple(as_ints(alpha**2 + gab42.tower.GFqm(3) * alpha).tolist())
