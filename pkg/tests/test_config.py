from __future__ import annotations

import json
from pathlib import Path

import pytest

from rankmetric.cli import build_parser
from rankmetric.config import (
    ExperimentConfig,
    RankMetricConfig,
    default_config_path,
    load_config_file,
    render_default_config_template,
)
from rankmetric.errors import ParameterError


def _make_args(arg_list: list[str] | None = None):
    parser = build_parser()
    return parser.parse_args(arg_list or ["selftest"])


def test_config_defaults_without_file():
    config = RankMetricConfig.from_sources(_make_args(), environ={})

    assert config.guard == 2**24
    assert config.pigeonhole_guard == 10**6
    assert config.log_level == "INFO"
    assert config.output_format == "json"
    assert config.jobs == 1
    assert config.radicand == "quarter"
    assert config.progress is False
    assert config.config_file is None


def test_config_file_values(tmp_path):
    config_path = tmp_path / "rankmetric.toml"
    config_path.write_text(
        'guard = "2^20"\njobs = 4\nradicand = "half"\nprogress = true\nlog_level = "debug"\n',
        encoding="utf-8",
    )

    data = load_config_file(config_path)
    config = RankMetricConfig.from_sources(
        _make_args(), file_options=data, config_path=config_path, environ={}
    )

    assert config.config_file == config_path.resolve()
    assert config.guard == 2**20
    assert config.jobs == 4
    assert config.radicand == "half"
    assert config.progress is True
    assert config.log_level == "DEBUG"


def test_cli_overrides_config(tmp_path):
    config_data = {"guard": 5, "output_format": "json", "log_level": "INFO", "jobs": 3}
    args = _make_args(
        ["--guard", "1000", "--log-level", "warning", "--progress", "attack", "--format", "csv"]
    )

    config = RankMetricConfig.from_sources(
        args,
        file_options=config_data,
        config_path=tmp_path / "config.toml",
        environ={"RANKMETRIC_GUARD": "2^10"},
    )

    assert config.guard == 1000
    assert config.log_level == "WARNING"
    assert config.output_format == "csv"
    assert config.progress is True
    # jobs comes from the file when the subcommand has no --jobs
    assert config.jobs == 3


def test_environment_guard_beats_file():
    config = RankMetricConfig.from_sources(
        _make_args(), file_options={"guard": 5}, environ={"RANKMETRIC_GUARD": "2**10"}
    )
    assert config.guard == 1024


def test_environment_guard_from_process(monkeypatch):
    monkeypatch.setenv("RANKMETRIC_GUARD", "4096")
    assert RankMetricConfig.from_sources(_make_args()).guard == 4096


@pytest.mark.parametrize(
    "options",
    [{"output_format": "xml"}, {"radicand": "third"}, {"guard": "many"}],
)
def test_invalid_file_values(options):
    with pytest.raises(ParameterError):
        RankMetricConfig.from_sources(_make_args(), file_options=options, environ={})


def test_default_config_path_pickup(monkeypatch, tmp_path):
    home = tmp_path / "home"
    monkeypatch.setenv("HOME", str(home))
    assert default_config_path({}) == home / ".rankmetric.toml"

    custom = tmp_path / "elsewhere.json"
    assert default_config_path({"RANKMETRIC_CONFIG": str(custom)}) == custom
    monkeypatch.setenv("RANKMETRIC_CONFIG", str(custom))
    assert default_config_path() == custom


def test_load_config_formats(tmp_path):
    json_path = tmp_path / "config.conf"
    json_path.write_text(json.dumps({"jobs": 2}), encoding="utf-8")
    assert load_config_file(json_path) == {"jobs": 2}

    with pytest.raises(FileNotFoundError):
        load_config_file(tmp_path / "missing.toml")


def test_load_yaml_config(tmp_path):
    pytest.importorskip("yaml")
    yaml_path = tmp_path / "config.yaml"
    yaml_path.write_text("guard: 2^12\nprogress: true\n", encoding="utf-8")
    data = load_config_file(yaml_path)
    config = RankMetricConfig.from_sources(_make_args(), file_options=data, environ={})
    assert config.guard == 4096
    assert config.progress is True

    empty = tmp_path / "empty.yml"
    empty.write_text("", encoding="utf-8")
    assert load_config_file(empty) == {}


def test_render_default_config_template(tmp_path):
    template = render_default_config_template()

    assert "guard = 16777216" in template
    assert 'radicand = "quarter"' in template
    assert "RANKMETRIC_GUARD" in template

    path = Path(tmp_path / "template.toml")
    path.write_text(template, encoding="utf-8")
    config = RankMetricConfig.from_sources(
        _make_args(), file_options=load_config_file(path), environ={}
    )
    assert config == RankMetricConfig()


def test_experiment_round_trip():
    experiment = ExperimentConfig(
        field_spec="2^1:4:4:13",
        code={"family": "G", "k": 2},
        strategy="trace",
        tau=2,
        oracle=True,
    )
    assert experiment.code["field"] == "2^1:4:4:13"
    assert experiment.to_dict()["tau"] == "2"
    assert ExperimentConfig.loads(experiment.dumps()) == experiment
    assert experiment.dumps() == ExperimentConfig.loads(experiment.dumps()).dumps()


def test_experiment_field_from_code():
    experiment = ExperimentConfig.from_dict({"code": {"field": "3:4:4", "family": "D", "k": 2}})
    assert experiment.field_spec == "3:4:4"
    assert experiment.tau == "auto"
    assert experiment.strategy == "trace"


@pytest.mark.parametrize(
    "text",
    [
        "{",
        "[]",
        '{"strategy": "trace"}',
        '{"field": "2:4:4", "code": {"field": "3:4:4"}}',
        '{"field": "2:4:4", "output_format": "xml"}',
    ],
)
def test_experiment_rejects_malformed(text):
    with pytest.raises(ParameterError):
        ExperimentConfig.loads(text)
