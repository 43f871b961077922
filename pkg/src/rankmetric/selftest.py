"""Acceptance checks run by ``rankmetric selftest``."""

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .adversary import build_adversary, verify_adversary
from .bounds import bound_wz_radius, gaussian_binomial
from .codes import (
    code_polynomials,
    codeword_from_poly,
    find_eta,
    make_code,
    min_distance_exhaustive,
    rank_weight,
)
from .constructions import pigeonhole_family, trinomial_family
from .errors import RankMetricError
from .fields import FieldTower, as_ints, parse_field_spec
from .linearized import (
    SigmaPoly,
    Subspace,
    compose,
    evaluate,
    kernel_basis,
    reduce_mod_theta,
    right_divide,
)
from .oracle import EnumGuard, ball_intersection_count, enumerate_subspaces, root_count

LOGGER = logging.getLogger(__name__)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _random_poly(rng: random.Random, tower: FieldTower, s: int, max_degree: int) -> SigmaPoly:
    degree = rng.randint(0, max_degree)
    order = tower.GFqm.order
    return SigmaPoly(tower, s, tuple(rng.randrange(order) for _ in range(degree + 1)))


def _random_subspace(rng: random.Random, tower: FieldTower, dim: int) -> Subspace:
    order = tower.GFqm.order
    while True:
        space = Subspace.span(tower, (rng.randrange(1, order) for _ in range(dim)))
        if space.dim == dim:
            return space


def check_min_distance(guard: EnumGuard) -> str:
    g42 = make_code(parse_field_spec("2:4:4"), "G", 2)
    g63 = make_code(parse_field_spec("2:6:6"), "G", 3)
    tower = parse_field_spec("3:4:4")
    d42 = make_code(tower, "D", 2, eta=find_eta(tower, "D", 2))
    found = [min_distance_exhaustive(code, guard) for code in (g42, g63, d42)]
    if found != [3, 4, 3]:
        raise AssertionError(f"minimum distances {found}, expected [3, 4, 3]")
    return "G_{4,2}: 3, G_{6,3}: 4, D_{4,2}: 3"


def _attack_with_oracle(spec: str, k: int, strategy: str, tau: int, expected: int, guard: EnumGuard) -> str:
    code = make_code(parse_field_spec(spec), "G", k)
    report = build_adversary(code, strategy, tau)
    if len(report.words) != expected or not report.valid:
        raise AssertionError(f"list of {len(report.words)}, valid={report.valid}: {report.failures()}")
    count = ball_intersection_count(code, report.center, report.radius, guard)
    if count < expected:
        raise AssertionError(f"ball holds {count} codewords, fewer than {expected}")
    return f"{len(report.words)} codewords in the ball, oracle count {count}"


def check_trace_gabidulin(guard: EnumGuard) -> str:
    return _attack_with_oracle("2:4:4", 2, "trace", 2, 5, guard)


def check_trinomial_attack(guard: EnumGuard) -> str:
    return _attack_with_oracle("2:7:7", 2, "trinomial", 4, 127, guard)


def check_trinomial_roots(guard: EnumGuard) -> str:
    counts = []
    for spec, t, roots in (("2:7:7", 3, 8), ("2:3:3", 2, 4)):
        tower = parse_field_spec(spec)
        family = trinomial_family(tower, t)
        ambient = Subspace.embedded(tower)
        bad = [i for i, f in enumerate(family.members) if root_count(f, ambient, guard) != roots]
        if bad:
            raise AssertionError(f"{spec}: members {bad[:5]} do not have {roots} roots")
        counts.append(f"{len(family)} x {roots} roots")
    return ", ".join(counts)


def check_trace_general() -> str:
    tower = parse_field_spec("3:6:6")
    code = make_code(tower, "H", 3, eta=find_eta(tower, "H", 3), h=1)
    report = verify_adversary(code, build_adversary(code, "trace-gen", 2))
    if len(report.words) != 28 or not report.valid or report.radius != 3:
        raise AssertionError(f"list of {len(report.words)}, valid={report.valid}: {report.failures()}")
    return "28 codewords of H(η,1) in a rank ball of radius 3"


def check_pigeonhole(guard: EnumGuard) -> str:
    tower = parse_field_spec("2:4:4")
    space = Subspace.full(tower)
    family = pigeonhole_family(space, 2, 1)
    subspaces = sum(1 for _ in enumerate_subspaces(space, 2, guard))
    expected = gaussian_binomial(4, 2, 2)
    if len(family) < 3 or family.total != expected or subspaces != expected:
        raise AssertionError(
            f"largest class {len(family)}, union {family.total}, enumerated {subspaces}"
        )
    return f"largest class {len(family)}, union {family.total} = [4 2]_2"


def check_properties(cases: int, seed: int) -> str:
    rng = random.Random(seed)
    binary = parse_field_spec("2:4:4")
    ternary = parse_field_spec("3:4:4")
    towers = (binary, ternary, parse_field_spec("2:5:5"))

    for _ in range(cases):
        tower = rng.choice(towers)
        s = rng.choice([e for e in range(1, tower.m) if math.gcd(e, tower.m) == 1])
        f = _random_poly(rng, tower, s, 7)
        g = _random_poly(rng, tower, s, 4)
        if g.is_zero:
            continue
        quotient, remainder = right_divide(f, g)
        if compose(quotient, g, fold=False) + remainder != f or remainder.degree >= g.degree:
            raise AssertionError(f"right division failed for f={f.coeffs}, g={g.coeffs}")

    for _ in range(cases):
        tower = rng.choice(towers)
        space = _random_subspace(rng, tower, rng.randint(1, tower.m))
        f = _random_poly(rng, tower, 1, 2 * tower.m)
        reduced = reduce_mod_theta(f, space)
        points = space.elements()
        if as_ints(evaluate(reduced, points)).tolist() != as_ints(evaluate(f, points)).tolist():
            raise AssertionError("reduction mod θ changed values on U_S")
        if reduce_mod_theta(reduced, space) != reduced or reduced.degree >= space.dim:
            raise AssertionError("reduction mod θ is not idempotent")

    code = make_code(binary, "G", 2)
    for _ in range(cases):
        poly = _random_poly(rng, binary, 1, code.n - 1)
        word = codeword_from_poly(code, poly)
        kernel = kernel_basis(poly, code.evaluation_space)
        if rank_weight(word) != code.n - kernel.dim:
            raise AssertionError(f"rank/kernel mismatch for {poly.coeffs}")

    images = {codeword_from_poly(code, poly).entries for poly in code_polynomials(code)}
    if len(images) != code.size:
        raise AssertionError(f"{len(images)} distinct words for {code.size} polynomials")

    for _ in range(cases):
        tower = rng.choice(towers)
        gf = tower.GFqm
        x, y = gf(rng.randrange(gf.order)), gf(rng.randrange(gf.order))
        e = rng.randrange(tower.m)
        if tower.norm(x * y) != tower.norm(x) * tower.norm(y):
            raise AssertionError("norm is not multiplicative")
        if tower.frobenius(x + y, e) != tower.frobenius(x, e) + tower.frobenius(y, e):
            raise AssertionError("frobenius is not additive")
    return f"{cases} random cases per suite, seed {seed}"


def check_wz_radius() -> str:
    radius = bound_wz_radius(7, 7, 5, 0)
    if not 3.25 < radius.threshold < 3.27 or radius.first_integer != 4:
        raise AssertionError(f"threshold {radius.threshold}, first integer {radius.first_integer}")
    return f"threshold {radius.threshold:.6f}, first integer radius {radius.first_integer}"


def run_selftest(
    *, cases: int = 1000, seed: int = 0, guard: Optional[EnumGuard] = None
) -> list[CriterionResult]:
    guard = guard or EnumGuard.from_env()
    checks: list[tuple[str, Callable[[], str]]] = [
        ("mrd-minimum-distance", lambda: check_min_distance(guard)),
        ("trace-gabidulin", lambda: check_trace_gabidulin(guard)),
        ("trinomial-attack", lambda: check_trinomial_attack(guard)),
        ("trinomial-roots", lambda: check_trinomial_roots(guard)),
        ("trace-general", check_trace_general),
        ("pigeonhole-classes", lambda: check_pigeonhole(guard)),
        ("property-suites", lambda: check_properties(cases, seed)),
        ("radius-threshold", check_wz_radius),
    ]
    results = []
    for name, check in checks:
        started = time.perf_counter()
        try:
            detail = check()
            passed = True
        except (AssertionError, RankMetricError, ArithmeticError) as exc:
            detail = str(exc)
            passed = False
        elapsed = time.perf_counter() - started
        LOGGER.info("criterion finished", extra={"criterion": name, "passed": passed})
        results.append(CriterionResult(name, passed, detail, elapsed))
    return results
