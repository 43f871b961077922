"""Explicit families of σ-subspace polynomials agreeing on their top coefficients."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import gaussian_binomial
from .errors import ConstructionError, ParameterError
from .fields import FieldTower, as_ints, is_power_of, power
from .linearized import SigmaPoly, Subspace, compose, kernel_basis, subspace_polynomial
from .oracle import EnumGuard, enumerate_subspaces

LOGGER = logging.getLogger(__name__)

KINDS = ("pigeonhole", "trace", "trinomial")
EMBEDDED_KINDS = ("trace", "trinomial")

DEFAULT_PIGEONHOLE_GUARD = 10**6


@dataclass(frozen=True)
class PolyFamily:
    """Monic polynomials of one σ-degree whose kernels lie in ``ambient``.

    ``agreed`` lists the coefficient indices on which all members coincide and
    ``shared_top`` their common values.  ``shifted`` marks a family composed on
    the right with x^σ: its members are no longer subspace polynomials and the
    kernel dimension refers to the kernel inside ``ambient``.
    """

    kind: str
    members: tuple[SigmaPoly, ...]
    sigma_degree: int
    kernel_dim: int
    agreed: tuple[int, ...]
    shared_top: tuple[int, ...]
    ambient: Subspace
    s: int
    classes: int = 1
    total: int = 0
    shifted: bool = False

    def __len__(self) -> int:
        return len(self.members)

    @property
    def tower(self) -> FieldTower:
        return self.ambient.tower

    @property
    def size(self) -> int:
        return len(self.members)

    def check_agreement(self) -> bool:
        return all(
            tuple(member.coefficient(i) for i in self.agreed) == self.shared_top
            for member in self.members
        )

    def check_kernels(self) -> bool:
        """Every member has a kernel of the declared dimension inside ``ambient``."""
        return all(kernel_basis(member, self.ambient).dim == self.kernel_dim for member in self.members)


def _agreed_range(top: int, count: int) -> tuple[int, ...]:
    return tuple(range(max(top - count + 1, 0), top + 1))


def _family(
    kind: str,
    members: list[SigmaPoly],
    degree: int,
    kernel_dim: int,
    agreed: tuple[int, ...],
    ambient: Subspace,
    s: int,
    *,
    classes: int = 1,
    total: Optional[int] = None,
) -> PolyFamily:
    shared = tuple(members[0].coefficient(i) for i in agreed) if members else ()
    return PolyFamily(
        kind=kind,
        members=tuple(members),
        sigma_degree=degree,
        kernel_dim=kernel_dim,
        agreed=agreed,
        shared_top=shared,
        ambient=ambient,
        s=s,
        classes=classes,
        total=len(members) if total is None else total,
    )


def pigeonhole_family(
    space: Subspace,
    r: int,
    g: int,
    s: int = 1,
    *,
    guard: Optional[EnumGuard] = None,
) -> PolyFamily:
    """Largest class of subspace polynomials of r-subspaces agreeing on the top g coefficients.

    The leading coefficient counts among the g, so classes are keyed by
    c_{r-g+1}..c_{r-1}; the largest has at least ⌈[n r]_q / q^(m(g-1))⌉ members.
    """
    tower = space.tower
    n = space.dim
    if not 1 <= g <= r < n <= tower.m:
        raise ParameterError(f"need 1 <= g <= r < n <= m, got g={g}, r={r}, n={n}, m={tower.m}")
    guard = guard or EnumGuard(DEFAULT_PIGEONHOLE_GUARD)
    count = gaussian_binomial(n, r, tower.q)
    guard.check(count, "subspace polynomials")
    classes: dict[tuple[int, ...], list[SigmaPoly]] = {}
    for subspace in enumerate_subspaces(space, r, guard):
        poly = subspace_polynomial(subspace, s)
        classes.setdefault(poly.coeffs[r - g + 1 : r], []).append(poly)
    best = max(classes.values(), key=len)
    LOGGER.debug(
        "pigeonhole classes",
        extra={"subspaces": count, "classes": len(classes), "largest": len(best)},
    )
    return _family(
        "pigeonhole",
        best,
        r,
        r,
        _agreed_range(r, g),
        space,
        s,
        classes=len(classes),
        total=sum(len(members) for members in classes.values()),
    )


def pigeonhole_lower_bound(n: int, r: int, g: int, m: int, q: int) -> int:
    denominator = q ** (m * (g - 1))
    return -(-gaussian_binomial(n, r, q) // denominator)


def trace_family(tower: FieldTower, t: int, s: int = 1, *, inverse: bool = False) -> PolyFamily:
    """The polynomials Σ_i β^(σ^(it) - σ^(n-t)) x^(σ^(it)), one per class of β mod F_{q^t}^*.

    With ``inverse`` the coefficients are β^(σ^(n-t) - σ^(it)); the set is the
    same, listed in a different order.
    """
    n, m = tower.n, tower.m
    if t < 1 or n % t:
        raise ParameterError(f"t={t} does not divide n={n}")
    if not tower.has_embedding:
        raise ParameterError(f"n={n} does not divide m={m}")
    SigmaPoly.zero(tower, s)
    betas = tower.embed(np.arange(1, tower.GFqn.order))
    keys = as_ints(tower.frobenius(betas, s * t) / betas)
    _, first = np.unique(keys, return_index=True)
    chosen = betas[np.sort(first)]
    top = tower.frobenius(chosen, s * (n - t))
    columns = {}
    for i in range(n // t):
        shifted = tower.frobenius(chosen, s * i * t)
        columns[i * t] = as_ints(top / shifted if inverse else shifted / top)
    members = [
        SigmaPoly.from_terms(tower, s, {index: int(values[row]) for index, values in columns.items()})
        for row in range(len(chosen))
    ]
    degree = n - t
    LOGGER.debug("trace family", extra={"n": n, "t": t, "size": len(members)})
    return _family("trace", members, degree, degree, _agreed_range(degree, t), Subspace.embedded(tower), s)


def trinomial_family(tower: FieldTower, t: int) -> PolyFamily:
    """Subspace trinomials x^(q^t) - b x^q - a x with q^t roots in F_{q^n}.

    a runs over the elements of norm (-1)^(t-1) and b = -a^(e+1) with
    e = (q^n - q)/(q^t - 1); every member is checked to split in F_{q^n}.
    """
    n, m, p, q = tower.n, tower.m, tower.p, tower.q
    if t < 2 or (t - 1) * t + 1 != n:
        raise ParameterError(f"n={n} is not (t-1)t+1 for t={t}")
    if not is_power_of(t - 1, p):
        raise ParameterError(f"t-1={t - 1} is not a power of the characteristic {p}")
    if not tower.has_embedding:
        raise ParameterError(f"n={n} does not divide m={m}")
    gf = tower.GFqn
    candidates = gf.elements[1:]
    target = tower.minus_one_power(t - 1)
    norms = as_ints(tower.norm(candidates, "q"))
    a = candidates[norms == target]
    b = -power(a, (q**n - q) // (q**t - 1) + 1)
    neg_a = as_ints(-tower.embed(a))
    neg_b = as_ints(-tower.embed(b))
    members = [
        SigmaPoly.from_terms(tower, 1, {0: int(neg_a[i]), 1: int(neg_b[i]), t: 1})
        for i in range(len(a))
    ]
    LOGGER.debug("trinomial family", extra={"n": n, "t": t, "size": len(members)})
    family = _family("trinomial", members, t, t, _agreed_range(t, t - 1), Subspace.embedded(tower), 1)
    if not family.check_kernels():
        raise ConstructionError(f"trinomials for n={n}, t={t} do not all have {q}^{t} roots in F_{{q^n}}")
    return family


def shift_compose(family: PolyFamily, s: Optional[int] = None) -> PolyFamily:
    """F ∘ x^σ: every member composed on the right with x^σ.

    Kernels move to σ^(-1) of the original kernels, so the ambient space is
    pulled back accordingly.
    """
    s = family.s if s is None else s
    if s != family.s:
        raise ParameterError(f"family has twist s={family.s}, asked to shift by s={s}")
    tower = family.tower
    x_sigma = SigmaPoly.monomial(tower, s, 1)
    members = [compose(member, x_sigma, fold=False) for member in family.members]
    return PolyFamily(
        kind=family.kind,
        members=tuple(members),
        sigma_degree=family.sigma_degree + 1,
        kernel_dim=family.kernel_dim,
        agreed=tuple(i + 1 for i in family.agreed),
        shared_top=family.shared_top,
        ambient=family.ambient.frobenius_image(-s),
        s=s,
        classes=family.classes,
        total=family.total,
        shifted=True,
    )


def build_family(
    tower: FieldTower,
    kind: str,
    *,
    t: Optional[int] = None,
    s: int = 1,
    r: Optional[int] = None,
    g: Optional[int] = None,
    guard: Optional[EnumGuard] = None,
) -> PolyFamily:
    """Dispatch used by the ``construct`` command."""
    if kind == "trace":
        if t is None:
            raise ParameterError("trace family needs --t")
        return trace_family(tower, t, s)
    if kind == "trinomial":
        if t is None:
            raise ParameterError("trinomial family needs --t")
        return trinomial_family(tower, t)
    if kind == "pigeonhole":
        if r is None or g is None:
            raise ParameterError("pigeonhole family needs --r and --g")
        space = Subspace.embedded(tower) if tower.has_embedding else Subspace.full(tower)
        return pigeonhole_family(space, r, g, s, guard=guard)
    raise ParameterError(f"unknown family kind {kind!r}; expected one of {', '.join(KINDS)}")
