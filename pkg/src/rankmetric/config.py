"""Configuration helpers for rankmetric."""

from __future__ import annotations

import argparse
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from textwrap import dedent
from typing import Any, Mapping, Optional, Union

from .errors import ParameterError
from .oracle import DEFAULT_MAX_STATES, GUARD_ENV, parse_guard

CONFIG_ENV = "RANKMETRIC_CONFIG"
DEFAULT_CONFIG_PATH = Path("~/.rankmetric.toml")
OUTPUT_FORMATS = ("json", "csv")


def load_config_file(config_path: Path) -> Mapping[str, Any]:
    config_path = config_path.expanduser().resolve()
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")
    suffix = config_path.suffix.lower()
    text = config_path.read_text(encoding="utf-8")
    if suffix in {".toml", ".tml"}:
        try:
            import tomllib  # type: ignore[attr-defined]
        except ModuleNotFoundError:  # pragma: no cover - Python <3.11
            try:
                import tomli as tomllib  # type: ignore[import-not-found]
            except ModuleNotFoundError as fallback_exc:  # pragma: no cover
                raise RuntimeError(
                    "TOML configuration requested but neither tomllib nor tomli is available. "
                    "Install tomli or upgrade to Python 3.11+."
                ) from fallback_exc
        return tomllib.loads(text)
    if suffix in {".yaml", ".yml"}:
        try:
            import yaml
        except ModuleNotFoundError as exc:  # pragma: no cover - optional dep
            raise RuntimeError(
                "YAML configuration requested but PyYAML is not installed."
            ) from exc
        return yaml.safe_load(text) or {}
    # unknown suffixes are JSON
    return json.loads(text)


def default_config_path(environ: Optional[Mapping[str, str]] = None) -> Path:
    env = os.environ if environ is None else environ
    return Path(env.get(CONFIG_ENV) or DEFAULT_CONFIG_PATH).expanduser()


@dataclass
class RankMetricConfig:
    guard: int = DEFAULT_MAX_STATES
    pigeonhole_guard: int = 10**6
    log_level: str = "INFO"
    output_format: str = "json"
    jobs: int = 1
    radicand: str = "quarter"
    progress: bool = False
    config_file: Optional[Path] = None

    @classmethod
    def from_sources(
        cls,
        args: "argparse.Namespace",
        *,
        file_options: Optional[Mapping[str, Any]] = None,
        config_path: Optional[Path] = None,
        environ: Optional[Mapping[str, str]] = None,
    ) -> "RankMetricConfig":
        options = dict(file_options or {})
        env = os.environ if environ is None else environ

        def option(name: str, *aliases: str, default: Any = None) -> Any:
            for key in (name, *aliases):
                if key in options and options[key] is not None:
                    return options[key]
            return default

        def resolve(name: str, *aliases: str, default: Any = None) -> Any:
            value = getattr(args, name, None)
            if value is not None:
                return value
            return option(name, *aliases, default=default)

        guard_cli = getattr(args, "guard", None)
        if guard_cli is not None:
            guard = parse_guard(str(guard_cli))
        elif env.get(GUARD_ENV):
            guard = parse_guard(env[GUARD_ENV])
        else:
            guard = parse_guard(str(option("guard", "max_states", default=DEFAULT_MAX_STATES)))

        output_format = str(resolve("output_format", "format", default="json")).lower()
        if output_format not in OUTPUT_FORMATS:
            raise ParameterError(f"output_format must be one of {OUTPUT_FORMATS}, got {output_format!r}")
        radicand = str(resolve("radicand", default="quarter")).lower()
        if radicand not in {"quarter", "half"}:
            raise ParameterError(f"radicand must be 'quarter' or 'half', got {radicand!r}")

        progress = getattr(args, "progress", None)
        if progress is None:
            progress = bool(option("progress", default=False))

        return cls(
            guard=guard,
            pigeonhole_guard=parse_guard(str(resolve("pigeonhole_guard", default=10**6))),
            log_level=str(resolve("log_level", default="INFO")).upper(),
            output_format=output_format,
            jobs=max(1, int(resolve("jobs", default=1))),
            radicand=radicand,
            progress=bool(progress),
            config_file=config_path.expanduser().resolve() if config_path else None,
        )


@dataclass
class ExperimentConfig:
    """One replayable experiment: code, strategy, radius and output choices."""

    field_spec: str
    code: dict[str, Any] = field(default_factory=dict)
    strategy: str = "trace"
    tau: Union[int, str] = "auto"
    oracle: bool = False
    output_format: str = "json"

    def __post_init__(self) -> None:
        code = dict(self.code)
        code.setdefault("field", self.field_spec)
        if code["field"] != self.field_spec:
            raise ParameterError(
                f"code field {code['field']!r} differs from experiment field {self.field_spec!r}"
            )
        self.code = code
        if self.tau != "auto":
            self.tau = int(self.tau)
        if self.output_format not in OUTPUT_FORMATS:
            raise ParameterError(f"output format must be one of {OUTPUT_FORMATS}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "field": self.field_spec,
            "code": self.code,
            "strategy": self.strategy,
            "tau": str(self.tau),
            "oracle": self.oracle,
            "output_format": self.output_format,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        try:
            field_spec = str(data.get("field") or data["code"]["field"])
        except (KeyError, TypeError) as exc:
            raise ParameterError("experiment needs a field spec") from exc
        tau = str(data.get("tau", "auto"))
        return cls(
            field_spec=field_spec,
            code=dict(data.get("code") or {}),
            strategy=str(data.get("strategy", "trace")),
            tau=tau if tau == "auto" else int(tau),
            oracle=bool(data.get("oracle", False)),
            output_format=str(data.get("output_format", "json")),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"experiment is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ParameterError("experiment JSON must be an object")
        return cls.from_dict(data)


def render_default_config_template() -> str:
    """Return an annotated TOML configuration template."""
    return dedent(
        f"""\
        # rankmetric configuration template
        # Save as ~/.rankmetric.toml or point --config / {CONFIG_ENV} here.

        # --- Exhaustive enumeration -------------------------------------------
        # Largest number of states any brute-force loop may visit.
        # {GUARD_ENV} and --guard take precedence.
        guard = {DEFAULT_MAX_STATES}
        # Subspace polynomials enumerated by the pigeonhole strategies.
        pigeonhole_guard = 1000000

        # --- Output ------------------------------------------------------------
        output_format = "json"  # or "csv" for table sweeps
        log_level = "INFO"
        progress = false

        # --- Table sweeps ------------------------------------------------------
        jobs = 1

        # --- Radius threshold ---------------------------------------------------
        radicand = "quarter"  # or "half" for the (m+n)^2/2 variant
        """
    )
