from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import TYPE_CHECKING, Any, Mapping, Optional, Sequence

from .config import (
    ExperimentConfig,
    RankMetricConfig,
    default_config_path,
    load_config_file,
    render_default_config_template,
)
from .errors import ConstructionError, EnumerationGuardError, MRDViolation, ParameterError

if TYPE_CHECKING:
    from .adversary import AdversaryReport

LOGGER = logging.getLogger(__name__)

TABLE_COLUMNS = (
    "family",
    "q",
    "n",
    "m",
    "k",
    "d",
    "tau",
    "claimed_bound",
    "achieved_list",
    "oracle_count",
    "valid",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankmetric",
        description="Rank-metric MRD codes and explicit list-decoding adversaries",
    )
    parser.add_argument("--config", help="Path to a TOML/JSON/YAML config file")
    parser.add_argument(
        "--print-config",
        action="store_true",
        help="Print an annotated configuration template and exit",
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default: INFO)")
    parser.add_argument(
        "--guard",
        default=None,
        help="Largest number of states an exhaustive loop may visit (e.g. 2^24)",
    )
    parser.add_argument(
        "--progress",
        action="store_true",
        default=None,
        help="Show a progress line on stderr during exhaustive scans",
    )
    sub = parser.add_subparsers(dest="command")

    construct = sub.add_parser("construct", help="Build a polynomial family or validate a code")
    construct.add_argument("--family", choices=("trace", "trinomial", "pigeonhole"))
    construct.add_argument("--field", help="Field spec p^ell:n:m[:modulus_hex]")
    construct.add_argument("--t", type=int, default=None)
    construct.add_argument("--s", type=int, default=1)
    construct.add_argument("--r", type=int, default=None)
    construct.add_argument("--g", type=int, default=None)
    construct.add_argument("--code", help="Code descriptor JSON (or @file)")

    attack = sub.add_parser("attack", help="Build an adversarial word for a code")
    attack.add_argument("--code", help="Code descriptor JSON (or @file)")
    attack.add_argument("--experiment", help="Experiment JSON (or @file) replaying a report config")
    attack.add_argument("--strategy", default=None)
    attack.add_argument("--tau", default=None, help="Radius parameter or 'auto'")
    attack.add_argument("--oracle", action="store_true", help="Count the true ball by enumeration")
    attack.add_argument("--output", help="Write the report to this file as well")
    attack.add_argument(
        "--format",
        dest="output_format",
        choices=("json", "csv"),
        default=None,
        help="Report format (default: json, or output_format from the config)",
    )

    verify = sub.add_parser("verify", help="Re-check a saved adversary report")
    verify.add_argument("--report", required=True, help="Report JSON file ('-' for stdin)")
    verify.add_argument("--oracle", action="store_true")

    table = sub.add_parser("table", help="Sweep parameters and emit CSV rows")
    table.add_argument("--family", required=True)
    table.add_argument("--q", type=int, required=True)
    table.add_argument("--n", required=True, help="Comma separated lengths")
    table.add_argument("--m", default=None, help="Comma separated extension degrees (default: m=n)")
    table.add_argument("--k", default="auto", help="Comma separated dimensions or 'auto'")
    table.add_argument("--tau", default="auto")
    table.add_argument("--s", type=int, default=1)
    table.add_argument("--strategy", required=True)
    table.add_argument("--oracle", action="store_true")
    table.add_argument("--jobs", type=int, default=None)

    selftest = sub.add_parser("selftest", help="Run the acceptance checks")
    selftest.add_argument("--cases", type=int, default=1000, help="Random cases per property suite")
    selftest.add_argument("--seed", type=int, default=0)
    return parser


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="[%(asctime)s] %(levelname)s %(name)s: %(message)s",
    )


def _load_json_argument(value: str) -> Any:
    if value == "-":
        text = sys.stdin.read()
    elif value.startswith("@"):
        text = Path(value[1:]).expanduser().read_text(encoding="utf-8")
    else:
        text = value
    return json.loads(text)


def _emit(data: Any, output: Optional[str] = None) -> None:
    text = json.dumps(data, indent=2, ensure_ascii=False)
    print(text)
    if output:
        Path(output).expanduser().write_text(text + "\n", encoding="utf-8")


def _emit_rows(rows: Sequence[Sequence[str]], output: Optional[str] = None) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    writer.writerows(rows)
    sys.stdout.write(buffer.getvalue())
    sys.stdout.flush()
    if output:
        Path(output).expanduser().write_text(buffer.getvalue(), encoding="utf-8")


def _report_row(report: "AdversaryReport") -> list[str]:
    code = report.code
    return [
        code.family,
        str(code.q),
        str(code.n),
        str(code.m),
        str(code.k),
        str(code.d),
        str(report.tau),
        str(report.claimed_bound),
        str(len(report.words)),
        "-" if report.oracle_count is None else str(report.oracle_count),
        "true" if report.valid else "false",
    ]


def _split_ints(value: str) -> list[int]:
    try:
        return [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise ParameterError(f"expected a comma separated list of integers, got {value!r}") from None


# -- subcommands -------------------------------------------------------------


def _cmd_construct(args: argparse.Namespace, config: RankMetricConfig) -> int:
    from .bounds import bound_wz_radius
    from .codes import code_from_descriptor, code_to_descriptor, singleton_size
    from .constructions import EMBEDDED_KINDS, build_family
    from .fields import parse_field_spec
    from .linearized import poly_to_json
    from .oracle import EnumGuard

    if args.code:
        code = code_from_descriptor(_load_json_argument(args.code))
        info = {
            "code": code_to_descriptor(code),
            "n": str(code.n),
            "m": str(code.m),
            "k": str(code.k),
            "d": str(code.d),
            "size": str(singleton_size(code.m, code.n, code.k, code.q)),
            "gabidulin_index": str(code.gabidulin_index),
        }
        try:
            radius = bound_wz_radius(
                code.m,
                code.n,
                code.d,
                radicand=config.radicand,
                twisted=code.family not in {"G", "G_sigma"},
            )
        except ParameterError as exc:
            LOGGER.info("no radius threshold: %s", exc, extra={"code": code.label})
        else:
            info["wz_threshold"] = f"{radius.threshold:.6f}"
            info["wz_first_radius"] = str(radius.first_integer)
        _emit(info)
        return 0
    if not args.family or not args.field:
        raise ParameterError("construct needs --code, or --family together with --field")
    tower = parse_field_spec(args.field, require_embedding=args.family in EMBEDDED_KINDS)
    family = build_family(
        tower,
        args.family,
        t=args.t,
        s=args.s,
        r=args.r,
        g=args.g,
        guard=EnumGuard(config.pigeonhole_guard),
    )
    _emit(
        {
            "kind": family.kind,
            "field": tower.spec,
            "s": str(family.s),
            "sigma_degree": str(family.sigma_degree),
            "kernel_dim": str(family.kernel_dim),
            "agreed": [str(i) for i in family.agreed],
            "shared_top": [str(c) for c in family.shared_top],
            "size": str(len(family)),
            "classes": str(family.classes),
            "members": [poly_to_json(member) for member in family.members],
        }
    )
    return 0


def _experiment_from_args(args: argparse.Namespace, config: RankMetricConfig) -> ExperimentConfig:
    if args.experiment:
        experiment = ExperimentConfig.from_dict(_load_json_argument(args.experiment))
        overrides = {}
        if args.strategy:
            overrides["strategy"] = args.strategy
        if args.tau:
            overrides["tau"] = args.tau
        if args.oracle:
            overrides["oracle"] = True
        if args.output_format:
            overrides["output_format"] = args.output_format
        if overrides:
            data = experiment.to_dict()
            data.update(overrides)
            experiment = ExperimentConfig.from_dict(data)
        return experiment
    if not args.code:
        raise ParameterError("attack needs --code or --experiment")
    descriptor = _load_json_argument(args.code)
    if not isinstance(descriptor, Mapping) or "field" not in descriptor:
        raise ParameterError("code descriptor must be a JSON object with a field spec")
    tau = args.tau or "auto"
    return ExperimentConfig(
        field_spec=str(descriptor["field"]),
        code=dict(descriptor),
        strategy=args.strategy or "trace",
        tau=tau if tau == "auto" else int(tau),
        oracle=bool(args.oracle),
        output_format=config.output_format,
    )


def _cmd_attack(args: argparse.Namespace, config: RankMetricConfig) -> int:
    from dataclasses import replace

    from .adversary import build_adversary, normalize_strategy, report_to_json, verify_adversary
    from .codes import code_from_descriptor
    from .oracle import EnumGuard
    from .progress import reporting

    experiment = _experiment_from_args(args, config)
    experiment.strategy = normalize_strategy(experiment.strategy)
    code = code_from_descriptor(experiment.code)
    report = build_adversary(
        code, experiment.strategy, experiment.tau, guard=EnumGuard(config.pigeonhole_guard)
    )
    if experiment.oracle:
        with reporting("Ball scan", enabled=config.progress) as progress:
            report = verify_adversary(
                code, report, oracle=True, guard=EnumGuard(config.guard), progress=progress
            )
    report = replace(report, config=experiment.to_dict())
    if experiment.output_format == "csv":
        _emit_rows([_report_row(report)], args.output)
    else:
        _emit(report_to_json(report), args.output)
    if not report.valid:
        LOGGER.error("report invalid: %s", "; ".join(report.failures()))
        return 1
    return 0


def _cmd_verify(args: argparse.Namespace, config: RankMetricConfig) -> int:
    from .adversary import report_from_json, report_to_json, verify_adversary
    from .oracle import EnumGuard
    from .progress import reporting

    data = _load_json_argument("-" if args.report == "-" else f"@{args.report}")
    report = report_from_json(data)
    with reporting("Ball scan", enabled=config.progress and args.oracle) as progress:
        verified = verify_adversary(
            report.code, report, oracle=args.oracle, guard=EnumGuard(config.guard), progress=progress
        )
    _emit(report_to_json(verified))
    if not verified.valid:
        LOGGER.error("report invalid: %s", "; ".join(verified.failures()))
        return 1
    return 0


def _table_cell(cell: Mapping[str, Any], config: RankMetricConfig) -> list[str]:
    from .adversary import EMBEDDED_STRATEGIES, build_adversary, verify_adversary
    from .codes import find_eta, make_code, normalize_family
    from .fields import FieldTower, split_prime_power
    from .oracle import EnumGuard

    row = [cell["family"], str(cell["q"]), str(cell["n"]), str(cell["m"]), str(cell["k"])]
    try:
        p, ell = split_prime_power(cell["q"])
        tower = FieldTower.create(
            p, ell, cell["n"], cell["m"], require_embedding=cell["strategy"] in EMBEDDED_STRATEGIES
        )
        family = normalize_family(cell["family"])
        eta = find_eta(tower, family, cell["k"]) if family in {"H", "Hbar", "D"} else None
        code = make_code(tower, family, cell["k"], cell["s"], eta=eta)
        report = build_adversary(
            code, cell["strategy"], cell["tau"], guard=EnumGuard(config.pigeonhole_guard)
        )
        if cell["oracle"]:
            report = verify_adversary(code, report, oracle=True, guard=EnumGuard(config.guard))
    except (ParameterError, EnumerationGuardError) as exc:
        LOGGER.warning("table cell skipped: %s", exc, extra={"cell": dict(cell)})
        d = cell["n"] - cell["k"] + 1
        return row + [str(d), str(cell["tau"]), "-", "-", "-", "false"]
    return _report_row(report)


def _table_cells(args: argparse.Namespace) -> list[dict[str, Any]]:
    from .adversary import auto_parameters, normalize_strategy

    strategy = normalize_strategy(args.strategy)
    cells = []
    for n in _split_ints(args.n):
        for m in _split_ints(args.m) if args.m else [n]:
            if args.k == "auto":
                k, tau = auto_parameters(n, strategy)
                plans = [(k, tau if args.tau == "auto" else int(args.tau))]
            else:
                tau_value = args.tau if args.tau == "auto" else int(args.tau)
                plans = [(k, tau_value) for k in _split_ints(args.k)]
            for k, tau in plans:
                cells.append(
                    {
                        "family": args.family,
                        "q": args.q,
                        "n": n,
                        "m": m,
                        "k": k,
                        "s": args.s,
                        "tau": tau,
                        "strategy": strategy,
                        "oracle": bool(args.oracle),
                    }
                )
    return cells


def _cmd_table(args: argparse.Namespace, config: RankMetricConfig) -> int:
    cells = _table_cells(args)
    jobs = args.jobs or config.jobs
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        rows = list(pool.map(lambda cell: _table_cell(cell, config), cells))
    _emit_rows(rows)
    LOGGER.info("table finished", extra={"rows": len(rows)})
    return 0 if all(row[-1] == "true" for row in rows) else 1


def _cmd_selftest(args: argparse.Namespace, config: RankMetricConfig) -> int:
    from .oracle import EnumGuard
    from .selftest import run_selftest

    results = run_selftest(cases=args.cases, seed=args.seed, guard=EnumGuard(config.guard))
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail} ({result.seconds:.1f}s)")
    return 0 if all(result.passed for result in results) else 1


COMMANDS = {
    "construct": _cmd_construct,
    "attack": _cmd_attack,
    "verify": _cmd_verify,
    "table": _cmd_table,
    "selftest": _cmd_selftest,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)

    if getattr(args, "print_config", False):
        print(render_default_config_template())
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        LOGGER.error("a subcommand is required: %s", ", ".join(COMMANDS))
        return 2

    config_path: Optional[Path] = None
    config_data = None
    if args.config:
        config_path = Path(args.config).expanduser()
    else:
        candidate = default_config_path()
        if candidate.exists():
            config_path = candidate
    if config_path is not None:
        try:
            config_data = load_config_file(config_path)
        except FileNotFoundError:
            LOGGER.error("Configuration file not found: %s", config_path)
            return 2
        except Exception as exc:
            LOGGER.error("Failed to load configuration %s: %s", config_path, exc)
            return 2
        if config_data is None:
            config_data = {}
        elif not isinstance(config_data, Mapping):
            LOGGER.error(
                "Configuration root must be a mapping; got %s", type(config_data).__name__
            )
            return 2

    try:
        config = RankMetricConfig.from_sources(
            args, file_options=config_data, config_path=config_path
        )
    except ParameterError as exc:
        LOGGER.error("Invalid configuration: %s", exc)
        return 2
    setup_logging(config.log_level)
    LOGGER.debug(
        "rankmetric starting",
        extra={"command": args.command, "guard": config.guard, "config": str(config_path)},
    )

    try:
        return COMMANDS[args.command](args, config)
    except (MRDViolation, ConstructionError) as exc:
        LOGGER.error("%s", exc)
        return 1
    except (ParameterError, EnumerationGuardError) as exc:
        LOGGER.error("%s", exc)
        return 2
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        LOGGER.error("%s: %s", type(exc).__name__, exc)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
