from __future__ import annotations

import pytest

from rankmetric.codes import find_eta, make_code
from rankmetric.fields import FieldTower, parse_field_spec


@pytest.fixture(autouse=True)
def _isolated_environment(monkeypatch, tmp_path):
    monkeypatch.delenv("RANKMETRIC_GUARD", raising=False)
    monkeypatch.delenv("RANKMETRIC_CONFIG", raising=False)
    monkeypatch.setenv("HOME", str(tmp_path / "home"))


@pytest.fixture(scope="session")
def f16() -> FieldTower:
    return parse_field_spec("2:4:4")


@pytest.fixture(scope="session")
def f64() -> FieldTower:
    return parse_field_spec("2:6:6")


@pytest.fixture(scope="session")
def f128() -> FieldTower:
    return parse_field_spec("2:7:7")


@pytest.fixture(scope="session")
def f81() -> FieldTower:
    return parse_field_spec("3:4:4")


@pytest.fixture(scope="session")
def f729() -> FieldTower:
    return parse_field_spec("3:6:6")


@pytest.fixture(scope="session")
def f8_in_f64() -> FieldTower:
    return parse_field_spec("2:3:6")


@pytest.fixture(scope="session")
def gab42(f16):
    return make_code(f16, "G", 2)


@pytest.fixture(scope="session")
def twisted63(f729):
    return make_code(f729, "H", 3, eta=find_eta(f729, "H", 3), h=1)
