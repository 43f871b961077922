"""Brute-force ground truth: ball intersections, subspace enumeration, root counts."""

from __future__ import annotations

import itertools
import logging
import os
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

import numpy as np

from .bounds import gaussian_binomial
from .codes import RankCode, Word, enumerate_codewords
from .errors import EnumerationGuardError, ParameterError
from .fields import as_ints, is_power_of
from .linearized import SigmaPoly, Subspace, evaluate
from .progress import EnumerationProgress

LOGGER = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 2**24
GUARD_ENV = "RANKMETRIC_GUARD"


def parse_guard(value: str) -> int:
    """Accept ``16777216``, ``2^24`` or ``2**24``."""
    text = value.strip().replace("**", "^").replace("_", "")
    try:
        if "^" in text:
            base, exponent = text.split("^", 1)
            result = int(base) ** int(exponent)
        else:
            result = int(text)
    except ValueError:
        raise ParameterError(f"invalid enumeration guard {value!r}") from None
    if result < 1:
        raise ParameterError(f"enumeration guard must be positive, got {value!r}")
    return result


@dataclass(frozen=True)
class EnumGuard:
    max_states: int = DEFAULT_MAX_STATES

    def allows(self, requested: int) -> bool:
        return requested <= self.max_states

    def check(self, requested: int, what: str = "states") -> None:
        if requested > self.max_states:
            raise EnumerationGuardError(what, requested, self.max_states)

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "EnumGuard":
        env = os.environ if environ is None else environ
        raw = env.get(GUARD_ENV)
        if not raw:
            return cls()
        return cls(parse_guard(raw))


def ball_intersection_count(
    code: RankCode,
    center: Word,
    tau: int,
    guard: Optional[EnumGuard] = None,
    progress: Optional[EnumerationProgress] = None,
) -> int:
    """|{c in code : rank(center - c) <= τ}| by scanning every codeword."""
    if len(center) != code.n:
        raise ParameterError(f"center has length {len(center)}, code has length {code.n}")
    tower = code.tower
    origin = center.array
    count = 0
    for block in enumerate_codewords(code, guard, progress):
        ranks = tower.fq_ranks(origin - tower.GFqm(block))
        count += int(np.count_nonzero(ranks <= tau))
    LOGGER.debug("ball scanned", extra={"code": code.label, "tau": tau, "count": count})
    return count


def enumerate_subspaces(
    space: Subspace, r: int, guard: Optional[EnumGuard] = None
) -> Iterator[Subspace]:
    """Every r-dimensional subspace of ``space`` once, as reduced echelon bases.

    Coordinates are taken with respect to ``space.basis``; each subspace is
    produced by its pivot set and the F_q entries in the free positions.
    """
    tower = space.tower
    dim = space.dim
    if not 0 <= r <= dim:
        raise ParameterError(f"need 0 <= r <= {dim}, got r={r}")
    (guard or EnumGuard.from_env()).check(gaussian_binomial(dim, r, tower.q), "subspaces")
    if r == 0:
        yield Subspace.zero(tower)
        return
    gf = tower.GFqm
    basis = space.array
    scalars = tower.fq_elements
    for pivots in itertools.combinations(range(dim), r):
        free = [
            (row, col)
            for row, pivot in enumerate(pivots)
            for col in range(pivot + 1, dim)
            if col not in pivots
        ]
        for entries in itertools.product(range(tower.q), repeat=len(free)):
            coords = gf.Zeros((r, dim))
            for row, pivot in enumerate(pivots):
                coords[row, pivot] = 1
            for (row, col), index in zip(free, entries):
                coords[row, col] = scalars[index]
            yield Subspace(tower, tuple(as_ints(coords @ basis)))


def root_count(
    f: SigmaPoly, ambient: Subspace, guard: Optional[EnumGuard] = None
) -> int:
    """Number of zeros of f in ``ambient`` by evaluating at every point."""
    tower = f.tower
    (guard or EnumGuard.from_env()).check(tower.q**ambient.dim, "evaluation points")
    values = as_ints(evaluate(f, ambient.elements()))
    count = int(np.count_nonzero(values == 0))
    if not is_power_of(count, tower.q):
        raise ArithmeticError(
            f"root count {count} of an F_q-linear map is not a power of q={tower.q}"
        )
    return count
