from __future__ import annotations

import pytest

from rankmetric.bounds import gaussian_binomial
from rankmetric.codes import RankCode, Word, codeword_from_poly
from rankmetric.errors import EnumerationGuardError, ParameterError
from rankmetric.fields import FieldTower, parse_field_spec
from rankmetric.linearized import SigmaPoly, Subspace
from rankmetric.oracle import (
    DEFAULT_MAX_STATES,
    EnumGuard,
    ball_intersection_count,
    enumerate_subspaces,
    parse_guard,
    root_count,
)


@pytest.mark.parametrize(
    "text,expected",
    [("16777216", 2**24), ("2^24", 2**24), ("2**20", 2**20), ("1_000", 1000)],
)
def test_parse_guard(text: str, expected: int) -> None:
    assert parse_guard(text) == expected


@pytest.mark.parametrize("text", ["", "lots", "2^x", "0", "-5"])
def test_parse_guard_rejects(text: str) -> None:
    with pytest.raises(ParameterError):
        parse_guard(text)


def test_guard_from_environment() -> None:
    assert EnumGuard.from_env({}).max_states == DEFAULT_MAX_STATES
    assert EnumGuard.from_env({"RANKMETRIC_GUARD": "2^10"}).max_states == 1024


def test_guard_from_process_environment(monkeypatch) -> None:
    monkeypatch.setenv("RANKMETRIC_GUARD", "500")
    guard = EnumGuard.from_env()
    assert guard.allows(500)
    assert not guard.allows(501)
    with pytest.raises(EnumerationGuardError) as info:
        guard.check(501, "codewords")
    assert info.value.what == "codewords"
    assert "501" in str(info.value)


@pytest.mark.parametrize("r,expected", [(0, 1), (1, 15), (2, 35), (3, 15), (4, 1)])
def test_enumerate_subspaces_counts(f16: FieldTower, r: int, expected: int) -> None:
    found = list(enumerate_subspaces(Subspace.full(f16), r))
    assert len(found) == expected == gaussian_binomial(4, r, 2)
    assert len(set(found)) == expected
    assert all(space.dim == r for space in found)


def test_enumerate_subspaces_inside_a_subspace(f81: FieldTower) -> None:
    space = Subspace(f81, (1, 3, 9))
    for r, expected in ((1, 13), (2, 13)):
        found = list(enumerate_subspaces(space, r))
        assert len(set(found)) == expected
        assert all(sub.issubspace(space) for sub in found)
    with pytest.raises(ParameterError):
        list(enumerate_subspaces(space, 4))
    with pytest.raises(EnumerationGuardError):
        list(enumerate_subspaces(space, 1, EnumGuard(12)))


def test_root_count(f16: FieldTower) -> None:
    full = Subspace.full(f16)
    assert root_count(SigmaPoly(f16, 1, (1, 0, 1)), full) == 4
    assert root_count(SigmaPoly.monomial(f16, 1, 0), full) == 1
    assert root_count(SigmaPoly.zero(f16), full) == 16
    with pytest.raises(EnumerationGuardError):
        root_count(SigmaPoly.zero(f16), full, EnumGuard(15))


def test_ball_around_a_codeword(gab42: RankCode) -> None:
    tower = gab42.tower
    center = codeword_from_poly(gab42, SigmaPoly(tower, 1, (5, 9)))
    # radius below the unique-decoding bound sees only the center
    assert ball_intersection_count(gab42, center, 1) == 1
    assert ball_intersection_count(gab42, center, 4) == 256
    with pytest.raises(ParameterError):
        ball_intersection_count(gab42, Word.zero(tower, 3), 1)


def test_ball_count_matches_weight_distribution(gab42: RankCode) -> None:
    origin = Word.zero(gab42.tower, 4)
    # minimum-weight codewords of an MRD code: [n d]_q (q^m - 1)
    rank3 = gaussian_binomial(4, 3, 2) * (2**4 - 1)
    assert ball_intersection_count(gab42, origin, 2) == 1
    assert ball_intersection_count(gab42, origin, 3) == 1 + rank3


def test_ball_count_respects_guard(gab42: RankCode) -> None:
    with pytest.raises(EnumerationGuardError):
        ball_intersection_count(gab42, Word.zero(gab42.tower, 4), 2, EnumGuard(255))


def test_root_count_is_power_of_q_over_f3() -> None:
    tower = parse_field_spec("3:4:4")
    f = SigmaPoly(tower, 1, (2, 0, 1))
    # x^9 - x vanishes exactly on F_9
    assert root_count(f, Subspace.full(tower)) == 9
