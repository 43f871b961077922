"""Adversarial received words: centers with many codewords in a small rank ball."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional, Sequence, Union

from .bounds import (
    bound_thm_gab,
    bound_thm_gen,
    bound_wz_radius,
    feasible_tau,
    gaussian_binomial,
    smallest_divisor,
    unique_radius,
)
from .codes import (
    RankCode,
    Word,
    code_from_descriptor,
    code_to_descriptor,
    codeword_from_poly,
    contains,
    contains_poly,
    distance,
    rank_weight,
)
from .constructions import PolyFamily, pigeonhole_family, shift_compose, trace_family, trinomial_family
from .errors import EnumerationGuardError, ParameterError
from .fields import is_power_of
from .linearized import Subspace
from .oracle import EnumGuard, ball_intersection_count
from .progress import EnumerationProgress

__all__ = [
    "AdversaryReport",
    "CHECKS",
    "EMBEDDED_STRATEGIES",
    "STRATEGIES",
    "auto_parameters",
    "bound_thm_gab",
    "bound_thm_gen",
    "bound_wz_radius",
    "build_adversary",
    "feasible_tau",
    "gaussian_binomial",
    "normalize_strategy",
    "radius_plan",
    "report_from_json",
    "report_to_json",
    "unique_radius",
    "verify_adversary",
]

LOGGER = logging.getLogger(__name__)

STRATEGIES = ("trace", "trace-gen", "trinomial", "pigeonhole", "pigeonhole-gen")
EMBEDDED_STRATEGIES = ("trace", "trace-gen", "trinomial")

_STRATEGY_ALIASES = {
    "trace-gab": "trace",
    "pigeonhole-gab": "pigeonhole",
}

CHECKS = ("center_outside", "all_members_in_code", "all_within_radius", "all_distinct")

_GABIDULIN = {"G", "G_sigma"}


def normalize_strategy(name: str) -> str:
    key = name.strip().lower()
    key = _STRATEGY_ALIASES.get(key, key)
    if key not in STRATEGIES:
        raise ParameterError(f"unknown strategy {name!r}; expected one of {', '.join(STRATEGIES)}")
    return key


@dataclass(frozen=True)
class AdversaryReport:
    strategy: str
    code: RankCode
    tau: int
    radius: int
    center: Word
    words: tuple[Word, ...]
    claimed_bound: int
    checks: dict[str, bool]
    distances: tuple[int, ...] = ()
    witnesses: dict[str, int] = field(default_factory=dict)
    family_size: int = 0
    center_rank: int = 0
    alternate_bound: Optional[int] = None
    oracle_count: Optional[int] = None
    config: Optional[dict[str, Any]] = None

    @property
    def valid(self) -> bool:
        if not all(self.checks.get(name, False) for name in CHECKS):
            return False
        if len(self.words) < self.claimed_bound:
            return False
        return self.oracle_count is None or self.oracle_count >= self.claimed_bound

    @property
    def gap(self) -> int:
        """How far the achieved list exceeds the claimed bound."""
        return len(self.words) - self.claimed_bound

    def failures(self) -> list[str]:
        messages = []
        for name in CHECKS:
            if not self.checks.get(name, False):
                index = self.witnesses.get(name)
                where = "" if index is None else f" (witness index {index})"
                messages.append(f"{name} failed{where}")
        if len(self.words) < self.claimed_bound:
            messages.append(f"list size {len(self.words)} below claimed bound {self.claimed_bound}")
        if self.oracle_count is not None and self.oracle_count < self.claimed_bound:
            messages.append(f"oracle count {self.oracle_count} below claimed bound {self.claimed_bound}")
        return messages

    def with_radius(self, radius: int) -> "AdversaryReport":
        """The same center and list judged against a ball of another radius."""
        checks = dict(self.checks)
        witnesses = dict(self.witnesses)
        outside = _first_failure(d <= radius for d in self.distances)
        checks["all_within_radius"] = outside is None
        witnesses.pop("all_within_radius", None)
        if outside is not None:
            witnesses["all_within_radius"] = outside
        return replace(self, radius=radius, checks=checks, witnesses=witnesses, oracle_count=None)


def _first_failure(flags) -> Optional[int]:
    for index, ok in enumerate(flags):
        if not ok:
            return index
    return None


def _first_duplicate(keys: Sequence[Any]) -> Optional[int]:
    seen = set()
    for index, key in enumerate(keys):
        if key in seen:
            return index
        seen.add(key)
    return None


# -- parameter planning ----------------------------------------------------


def radius_plan(code: RankCode, strategy: str) -> int:
    """τ used when the caller asks for ``auto``."""
    strategy = normalize_strategy(strategy)
    if strategy == "trinomial":
        tau = feasible_tau(code.n)
        if tau is None:
            raise ParameterError(f"n={code.n} admits no τ with n = (n-τ)(n-τ-1)+1")
        return tau
    return unique_radius(code.d) + 1


def auto_parameters(n: int, strategy: str) -> tuple[int, int]:
    """(k, τ) at which a strategy applies for length n, used by table sweeps."""
    strategy = normalize_strategy(strategy)
    if strategy == "trace":
        tau = smallest_divisor(n)
        if tau is None:
            raise ParameterError(f"n={n} has no divisor > 1")
        return max(n - 2 * tau + 2, 1), tau
    if strategy == "trace-gen":
        t = smallest_divisor(n)
        if t is None:
            raise ParameterError(f"n={n} has no divisor > 1")
        tau = t - 1
        return max(n - 2 * tau + 1, 1), tau
    if strategy == "trinomial":
        tau = feasible_tau(n)
        if tau is None:
            raise ParameterError(f"n={n} admits no τ with n = (n-τ)(n-τ-1)+1")
        return 2, tau
    k = -(-n // 2)
    return k, unique_radius(n - k + 1) + 1


def _require_embedded_evaluation(code: RankCode) -> None:
    tower = code.tower
    if not tower.has_embedding:
        raise ParameterError(f"n={tower.n} does not divide m={tower.m}")
    if code.evaluation_space != Subspace.embedded(tower):
        raise ParameterError("evaluation points must span the embedded F_{q^n}")


def _require_tau_range(code: RankCode, tau: int) -> None:
    low = unique_radius(code.d) + 1
    if not low <= tau <= code.d - 1:
        raise ParameterError(f"τ={tau} outside [{low}, {code.d - 1}] for d={code.d}")


def _optional(bound, *args) -> Optional[int]:
    try:
        return bound(*args)
    except ParameterError:
        return None


def _plan_family(
    code: RankCode, strategy: str, tau: int, guard: Optional[EnumGuard]
) -> tuple[PolyFamily, int, int, Optional[int]]:
    """Return (family, ball radius, claimed bound, alternate bound)."""
    tower, n, m, k, q, s = code.tower, code.n, code.m, code.k, code.q, code.s
    d = code.d
    if strategy == "trace":
        if code.family not in _GABIDULIN:
            raise ParameterError(f"strategy trace needs a Gabidulin code, got family {code.family}")
        if n % tau:
            raise ParameterError(f"τ={tau} does not divide n={n}")
        _require_embedded_evaluation(code)
        if tau <= unique_radius(d):
            raise ParameterError(f"τ={tau} is within the unique decoding radius {unique_radius(d)}")
        family = trace_family(tower, tau, s)
        return family, tau, (q**n - 1) // (q**tau - 1), _optional(bound_thm_gab, n, m, k, tau, q)
    if strategy == "trace-gen":
        if n % (tau + 1):
            raise ParameterError(f"τ+1={tau + 1} does not divide n={n}")
        _require_embedded_evaluation(code)
        family = shift_compose(trace_family(tower, tau + 1, s, inverse=True))
        return family, tau + 1, (q**n - 1) // (q ** (tau + 1) - 1), _optional(bound_thm_gen, n, m, d, tau, q)
    if strategy == "trinomial":
        if s != 1:
            raise ParameterError(f"strategy trinomial needs σ = q (s=1), got s={s}")
        if not code.contains_g2:
            raise ParameterError(f"family {code.family} (k={k}, s={s}) does not contain G_{{n,2}}")
        if feasible_tau(n) != tau:
            raise ParameterError(f"τ={tau} does not satisfy n = (n-τ)(n-τ-1)+1 for n={n}")
        if not is_power_of(n - tau - 1, tower.p):
            raise ParameterError(f"n-τ-1={n - tau - 1} is not a power of the characteristic {tower.p}")
        _require_embedded_evaluation(code)
        if code.family != "custom":
            _require_tau_range(code, tau)
        family = trinomial_family(tower, n - tau)
        return family, tau, (q**n - 1) // (q - 1), None
    if strategy == "pigeonhole":
        if code.family not in _GABIDULIN:
            raise ParameterError(
                f"strategy pigeonhole needs a Gabidulin code, got family {code.family}; use pigeonhole-gen"
            )
        _require_tau_range(code, tau)
        family = pigeonhole_family(code.evaluation_space, n - tau, n - tau - k + 1, s, guard=guard)
        return family, tau, bound_thm_gab(n, m, k, tau, q), bound_thm_gen(n, m, d, tau, q)
    if strategy == "pigeonhole-gen":
        if k < 2:
            raise ParameterError("strategy pigeonhole-gen needs k >= 2")
        _require_tau_range(code, tau)
        base = pigeonhole_family(
            code.evaluation_space.frobenius_image(s), n - tau, d - tau + 1, s, guard=guard
        )
        family = shift_compose(base)
        return family, tau, bound_thm_gen(n, m, d, tau, q), bound_thm_gab(n, m, k, tau, q)
    raise ParameterError(f"unknown strategy {strategy!r}")


# -- building and verifying ------------------------------------------------


def build_adversary(
    code: RankCode,
    strategy: str,
    tau: Union[int, str],
    *,
    guard: Optional[EnumGuard] = None,
) -> AdversaryReport:
    """Center c_R and list {c_(R-P)} from the strategy's polynomial family."""
    strategy = normalize_strategy(strategy)
    tau = radius_plan(code, strategy) if tau == "auto" else int(tau)
    if tau < 1:
        raise ParameterError(f"τ must be positive, got {tau}")
    family, radius, claimed, alternate = _plan_family(code, strategy, tau, guard)
    pivot = family.members[0]
    differences = [pivot - member for member in family.members]
    center = codeword_from_poly(code, pivot)
    words = tuple(codeword_from_poly(code, poly) for poly in differences)
    distances = tuple(distance(center, word) for word in words)

    outside = not contains(code, center)
    not_member = _first_failure(contains_poly(code, poly) for poly in differences)
    too_far = _first_failure(dist <= radius for dist in distances)
    duplicate = _first_duplicate([poly.coeffs for poly in differences])
    if duplicate is None:
        duplicate = _first_duplicate([word.entries for word in words])

    checks = {
        "center_outside": outside,
        "all_members_in_code": not_member is None,
        "all_within_radius": too_far is None,
        "all_distinct": duplicate is None,
    }
    witnesses = {
        name: index
        for name, index in (
            ("all_members_in_code", not_member),
            ("all_within_radius", too_far),
            ("all_distinct", duplicate),
        )
        if index is not None
    }
    report = AdversaryReport(
        strategy=strategy,
        code=code,
        tau=tau,
        radius=radius,
        center=center,
        words=words,
        claimed_bound=claimed,
        checks=checks,
        distances=distances,
        witnesses=witnesses,
        family_size=len(family),
        center_rank=rank_weight(center),
        alternate_bound=alternate,
    )
    LOGGER.info(
        "adversary built",
        extra={
            "strategy": strategy,
            "code": code.label,
            "tau": tau,
            "list_size": len(words),
            "claimed": claimed,
            "valid": report.valid,
        },
    )
    return report


def verify_adversary(
    code: RankCode,
    report: AdversaryReport,
    *,
    oracle: bool = False,
    guard: Optional[EnumGuard] = None,
    progress: Optional[EnumerationProgress] = None,
) -> AdversaryReport:
    """Recompute every check on the words alone, optionally counting the true ball."""
    for word in (report.center, *report.words):
        if len(word) != code.n or word.tower != code.tower:
            raise ParameterError("report words do not match the code's length or field")
    distances = tuple(distance(report.center, word) for word in report.words)
    not_member = _first_failure(contains(code, word) for word in report.words)
    too_far = _first_failure(dist <= report.radius for dist in distances)
    duplicate = _first_duplicate([word.entries for word in report.words])
    checks = {
        "center_outside": not contains(code, report.center),
        "all_members_in_code": not_member is None,
        "all_within_radius": too_far is None,
        "all_distinct": duplicate is None,
    }
    witnesses = {
        name: index
        for name, index in (
            ("all_members_in_code", not_member),
            ("all_within_radius", too_far),
            ("all_distinct", duplicate),
        )
        if index is not None
    }
    oracle_count = None
    if oracle:
        guard = guard or EnumGuard.from_env()
        try:
            oracle_count = ball_intersection_count(code, report.center, report.radius, guard, progress)
        except EnumerationGuardError as exc:
            LOGGER.warning("oracle skipped: %s", exc, extra={"code": code.label})
    verified = replace(
        report,
        code=code,
        checks=checks,
        witnesses=witnesses,
        distances=distances,
        center_rank=rank_weight(report.center),
        oracle_count=oracle_count,
    )
    if not verified.valid:
        LOGGER.warning("report failed verification: %s", "; ".join(verified.failures()))
    return verified


# -- JSON ------------------------------------------------------------------


def _word_json(word: Word) -> list[str]:
    return [str(e) for e in word.entries]


def _optional_str(value: Optional[int]) -> Optional[str]:
    return None if value is None else str(value)


def report_to_json(report: AdversaryReport) -> dict[str, Any]:
    """JSON form; every number is a decimal string."""
    data: dict[str, Any] = {
        "strategy": report.strategy,
        "code": code_to_descriptor(report.code),
        "tau": str(report.tau),
        "radius": str(report.radius),
        "claimed_bound": str(report.claimed_bound),
        "alternate_bound": _optional_str(report.alternate_bound),
        "family_size": str(report.family_size),
        "list_size": str(len(report.words)),
        "oracle_count": _optional_str(report.oracle_count),
        "center_rank": str(report.center_rank),
        "valid": report.valid,
        "checks": {name: bool(report.checks.get(name, False)) for name in CHECKS},
        "witnesses": {name: str(index) for name, index in sorted(report.witnesses.items())},
        "center": _word_json(report.center),
        "list": [_word_json(word) for word in report.words],
        "distances": [str(d) for d in report.distances],
    }
    if report.config is not None:
        data["config"] = report.config
    return data


def report_from_json(data: Mapping[str, Any]) -> AdversaryReport:
    try:
        code = code_from_descriptor(data["code"])
        tower = code.tower
        center = Word(tower, tuple(int(str(e)) for e in data["center"]))
        words = tuple(Word(tower, tuple(int(str(e)) for e in row)) for row in data["list"])
        checks = {name: bool(data.get("checks", {}).get(name, False)) for name in CHECKS}
        witnesses = {name: int(str(v)) for name, v in data.get("witnesses", {}).items()}
        optional = {
            key: None if data.get(key) is None else int(str(data[key]))
            for key in ("alternate_bound", "oracle_count")
        }
        return AdversaryReport(
            strategy=normalize_strategy(str(data["strategy"])),
            code=code,
            tau=int(str(data["tau"])),
            radius=int(str(data["radius"])),
            center=center,
            words=words,
            claimed_bound=int(str(data["claimed_bound"])),
            checks=checks,
            distances=tuple(int(str(d)) for d in data.get("distances", [])),
            witnesses=witnesses,
            family_size=int(str(data.get("family_size", len(words)))),
            center_rank=int(str(data.get("center_rank", 0))),
            alternate_bound=optional["alternate_bound"],
            oracle_count=optional["oracle_count"],
            config=data.get("config"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"malformed adversary report: {exc}") from exc
