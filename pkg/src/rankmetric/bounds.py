"""Exact counting formulas and list-size bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError

RADICANDS = ("quarter", "half")


def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of an n-dimensional F_q-space."""
    if not 0 <= r <= n:
        raise ParameterError(f"need 0 <= r <= n, got r={r}, n={n}")
    num = 1
    denom = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        denom *= q ** (i + 1) - 1
    return num // denom


def unique_radius(d: int) -> int:
    return (d - 1) // 2


@dataclass(frozen=True)
class WZRadius:
    threshold: float
    first_integer: int
    radicand: float


def bound_wz_radius(
    m: int,
    n: int,
    d: int,
    epsilon: float = 0.0,
    *,
    radicand: str = "quarter",
    twisted: bool = False,
) -> WZRadius:
    """Radius beyond which the rank-metric Johnson-type argument gives exponential lists.

    ``radicand="half"`` uses (m+n)^2/2 in place of (m+n)^2/4; ``twisted`` shifts
    d to d+1 as stated for the non-Gabidulin members of the twisted families.
    """
    if not 0 <= epsilon < 1:
        raise ParameterError(f"epsilon must lie in [0, 1), got {epsilon}")
    if radicand not in RADICANDS:
        raise ParameterError(f"radicand must be one of {RADICANDS}, got {radicand!r}")
    divisor = 4 if radicand == "quarter" else 2
    dist = d + 1 if twisted else d
    value = (m + n) ** 2 / divisor - m * (dist - epsilon)
    if value < 0:
        raise ParameterError("no exponential regime at these parameters")
    threshold = (m + n) / 2 - math.sqrt(value)
    return WZRadius(threshold, math.ceil(threshold - 1e-9), value)


def _check_tau(d: int, tau: int) -> None:
    low = unique_radius(d) + 1
    if not low <= tau <= d - 1:
        raise ParameterError(f"τ={tau} outside [{low}, {d - 1}] for d={d}")


def bound_thm_gab(n: int, m: int, k: int, tau: int, q: int) -> int:
    """⌊[n, n-τ]_q / q^(m(n-τ-k))⌋ for Gabidulin codes."""
    _check_tau(n - k + 1, tau)
    return gaussian_binomial(n, n - tau, q) // q ** (m * (n - tau - k))


def bound_thm_gen(n: int, m: int, d: int, tau: int, q: int) -> int:
    """⌊[n, n-τ]_q / q^(m(d-τ))⌋ for any code containing the shifted differences."""
    _check_tau(d, tau)
    return gaussian_binomial(n, n - tau, q) // q ** (m * (d - tau))


def feasible_tau(n: int) -> Optional[int]:
    """τ with n = (n-τ)(n-τ-1) + 1, if it is a positive integer."""
    if n < 1:
        return None
    disc = 4 * n - 3
    root = math.isqrt(disc)
    if root * root != disc or (2 * n - 1 - root) % 2:
        return None
    tau = (2 * n - 1 - root) // 2
    if tau < 1 or (n - tau) * (n - tau - 1) + 1 != n:
        return None
    return tau


def smallest_divisor(n: int, above: int = 1) -> Optional[int]:
    for candidate in range(above + 1, n + 1):
        if n % candidate == 0:
            return candidate
    return None
