"""σ-linearized polynomials over F_{q^m} and F_q-subspaces of F_{q^m}."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

import galois
import numpy as np

from .errors import ParameterError
from .fields import FieldTower, as_ints, digit_matrix

LOGGER = logging.getLogger(__name__)


def _trim(values: Iterable[int]) -> tuple[int, ...]:
    coeffs = [int(v) for v in values]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class SigmaPoly:
    """c_0 x + c_1 x^σ + ... + c_l x^(σ^l) with σ = x ↦ x^(q^s).

    Coefficients are integer-encoded elements of F_{q^m}; trailing zeros are
    dropped so equal polynomials compare equal.
    """

    tower: FieldTower
    s: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.s < 1 or math.gcd(self.s, self.tower.m) != 1:
            raise ParameterError(f"twist s={self.s} is not coprime to m={self.tower.m}")
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def from_terms(cls, tower: FieldTower, s: int, terms: Mapping[int, Any]) -> "SigmaPoly":
        size = max(terms, default=-1) + 1
        coeffs = [0] * size
        for index, value in terms.items():
            if index < 0:
                raise ParameterError(f"negative σ-exponent {index}")
            coeffs[index] = int(value)
        return cls(tower, s, tuple(coeffs))

    @classmethod
    def monomial(cls, tower: FieldTower, s: int, index: int = 0, coeff: Any = 1) -> "SigmaPoly":
        return cls.from_terms(tower, s, {index: coeff})

    @classmethod
    def zero(cls, tower: FieldTower, s: int = 1) -> "SigmaPoly":
        return cls(tower, s, ())

    @property
    def degree(self) -> int:
        """σ-degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coefficient(self, index: int) -> int:
        return self.coeffs[index] if 0 <= index < len(self.coeffs) else 0

    def array(self, length: Optional[int] = None) -> galois.FieldArray:
        size = len(self.coeffs) if length is None else length
        if size == 0:
            return self.tower.GFqm.Zeros(0)
        padded = list(self.coeffs[:size]) + [0] * max(0, size - len(self.coeffs))
        return self.tower.GFqm(padded)

    def _check_twist(self, other: "SigmaPoly") -> None:
        if self.tower != other.tower:
            raise ParameterError("polynomials live over different field towers")
        if self.s != other.s:
            raise ParameterError(f"twist mismatch: s={self.s} vs s={other.s}")

    def __add__(self, other: "SigmaPoly") -> "SigmaPoly":
        self._check_twist(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return SigmaPoly(self.tower, self.s, tuple(as_ints(self.array(size) + other.array(size))))

    def __sub__(self, other: "SigmaPoly") -> "SigmaPoly":
        self._check_twist(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return SigmaPoly(self.tower, self.s, tuple(as_ints(self.array(size) - other.array(size))))

    def __neg__(self) -> "SigmaPoly":
        return SigmaPoly(self.tower, self.s, tuple(as_ints(-self.array())))

    def scale(self, c: Any) -> "SigmaPoly":
        """Left multiplication by a constant: c · f."""
        constant = self.tower.element(c)
        return SigmaPoly(self.tower, self.s, tuple(as_ints(constant * self.array())))

    def __call__(self, x: Any) -> galois.FieldArray:
        return evaluate(self, x)


def evaluate(f: SigmaPoly, x: Any) -> galois.FieldArray:
    """Σ c_i x^(σ^i), vectorised over array arguments."""
    tower = f.tower
    points = tower.element(x)
    result = tower.GFqm.Zeros(np.shape(points))
    for index, c in enumerate(f.coeffs):
        if c:
            result = result + tower.GFqm(c) * tower.sigma(points, f.s, index)
    return result


def _compose_formal(f: SigmaPoly, g: SigmaPoly) -> galois.FieldArray:
    gf = f.tower.GFqm
    size = max(f.degree + g.degree + 1, 0)
    product = gf.Zeros(size)
    if size == 0:
        return product
    g_coeffs = g.array()
    for i, a in enumerate(f.coeffs):
        if a:
            product[i : i + len(g_coeffs)] += gf(a) * f.tower.sigma(g_coeffs, f.s, i)
    return product


def compose(f: SigmaPoly, g: SigmaPoly, *, fold: bool = True) -> SigmaPoly:
    """f ∘ g.  With ``fold`` the σ-exponents are reduced mod m (x^(σ^m) = x)."""
    f._check_twist(g)
    product = _compose_formal(f, g)
    m = f.tower.m
    if fold and len(product) > m:
        folded = f.tower.GFqm.Zeros(m)
        for index in range(len(product)):
            folded[index % m] += product[index]
        product = folded
    return SigmaPoly(f.tower, f.s, tuple(as_ints(product)))


def right_divide(f: SigmaPoly, g: SigmaPoly) -> tuple[SigmaPoly, SigmaPoly]:
    """Return ``(quot, rem)`` with f = quot ∘ g + rem and deg rem < deg g."""
    if g.is_zero:
        raise ZeroDivisionError("right division by the zero polynomial")
    f._check_twist(g)
    tower, s = f.tower, f.s
    gf = tower.GFqm
    d = g.degree
    if f.degree < d:
        return SigmaPoly.zero(tower, s), f
    remainder = f.array()
    quotient = gf.Zeros(f.degree - d + 1)
    g_coeffs = g.array()
    for top in range(f.degree, d - 1, -1):
        if int(remainder[top]) == 0:
            continue
        shift = top - d
        shifted = tower.sigma(g_coeffs, s, shift)
        factor = remainder[top] / shifted[d]
        quotient[shift] = factor
        remainder[shift : top + 1] -= factor * shifted
    return (
        SigmaPoly(tower, s, tuple(as_ints(quotient))),
        SigmaPoly(tower, s, tuple(as_ints(remainder[:d]))),
    )


def moore_matrix(
    tower: FieldTower, elems: Union[Sequence[int], galois.FieldArray], s: int, cols: int
) -> galois.FieldArray:
    """Matrix with entry (i, j) = elems[i]^(σ^j)."""
    points = tower.element(as_ints(elems).reshape(-1))
    if points.size == 0:
        raise ParameterError("moore_matrix needs at least one element")
    columns = [as_ints(tower.sigma(points, s, j)) for j in range(cols)]
    return tower.GFqm(np.stack(columns, axis=1))


@dataclass(frozen=True)
class Subspace:
    """An F_q-subspace of F_{q^m} given by an independent basis."""

    tower: FieldTower
    basis: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(int(b) for b in self.basis))
        if self.basis and self.tower.fq_rank(self.basis) != len(self.basis):
            raise ParameterError("basis elements are linearly dependent over F_q")

    @classmethod
    def span(cls, tower: FieldTower, values: Iterable[int]) -> "Subspace":
        """Greedy independent subset of ``values`` in the given order."""
        chosen: list[int] = []
        for value in (int(v) for v in values):
            if value and tower.fq_rank(chosen + [value]) == len(chosen) + 1:
                chosen.append(value)
                if len(chosen) == tower.m:
                    break
        return cls(tower, tuple(chosen))

    @classmethod
    def zero(cls, tower: FieldTower) -> "Subspace":
        return cls(tower, ())

    @classmethod
    def full(cls, tower: FieldTower) -> "Subspace":
        return cls.span(tower, (tower.p**i for i in range(tower.ell * tower.m)))

    @classmethod
    def subfield(cls, tower: FieldTower, j: int) -> "Subspace":
        return cls.span(tower, as_ints(tower.subfield_fp_basis(j)))

    @classmethod
    def embedded(cls, tower: FieldTower) -> "Subspace":
        """The image of F_{q^n}, spanned by the embedded polynomial basis."""
        images = tower.embed([tower.p**i for i in range(tower.ell * tower.n)])
        return cls.span(tower, as_ints(images))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def array(self) -> galois.FieldArray:
        if not self.basis:
            return self.tower.GFqm.Zeros(0)
        return self.tower.GFqm(list(self.basis))

    def __len__(self) -> int:
        return self.dim

    def fp_basis(self) -> galois.FieldArray:
        """F_p-basis of the subspace: γ^j · b_i for the F_p-basis γ^j of F_q."""
        if not self.basis:
            return self.tower.GFqm.Zeros(0)
        return (self.array[:, None] * self.tower.fq_basis[None, :]).reshape(-1)

    def elements(self) -> galois.FieldArray:
        """All q^dim elements."""
        gf = self.tower.GFqm
        fq = self.tower.fq_elements
        points = gf.Zeros(1)
        for b in self.basis:
            points = (points[:, None] + fq[None, :] * gf(b)).reshape(-1)
        return points

    def contains(self, x: Any) -> bool:
        value = int(self.tower.element(x))
        return self.tower.fq_rank(list(self.basis) + [value]) == self.dim

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.tower == other.tower
            and self.dim == other.dim
            and self.issubspace(other)
        )

    def __hash__(self) -> int:
        return hash((self.tower, self.dim))

    def frobenius_image(self, e: int) -> "Subspace":
        """{x^(q^e) : x in U}; σ-images are taken with e = s."""
        return Subspace(self.tower, tuple(as_ints(self.tower.frobenius(self.array, e))))


def kernel_basis(f: SigmaPoly, ambient: Subspace) -> Subspace:
    """F_q-basis of {x in ambient : f(x) = 0}."""
    tower = f.tower
    if ambient.dim == 0:
        return Subspace.zero(tower)
    spanning = ambient.fp_basis()
    images = as_ints(evaluate(f, spanning))
    gf_p = galois.GF(tower.p)
    matrix = gf_p(digit_matrix(images, tower.p, tower.ell * tower.m))
    null = matrix.left_null_space()
    if null.size == 0:
        return Subspace.zero(tower)
    combos = tower.GFqm(as_ints(null)) @ spanning
    return Subspace.span(tower, as_ints(combos))


def subspace_polynomial(space: Subspace, s: int = 1) -> SigmaPoly:
    """Monic σ-polynomial of σ-degree dim U whose roots are exactly U."""
    tower = space.tower
    r = space.dim
    if r == 0:
        return SigmaPoly.monomial(tower, s, 0)
    points = space.array
    matrix = moore_matrix(tower, points, s, r)
    rhs = -tower.sigma(points, s, r)
    try:
        lower = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise ParameterError("Moore matrix is singular; basis is dependent") from exc
    return SigmaPoly(tower, s, tuple(as_ints(lower)) + (1,))


def moore_determinant_polynomial(space: Subspace, s: int = 1) -> SigmaPoly:
    """Cofactor expansion of the (r+1)x(r+1) Moore determinant, made monic.

    Exponential in r; only meant as an independent check for r <= 3.
    """
    tower = space.tower
    r = space.dim
    if not 1 <= r <= 3:
        raise ParameterError("determinant expansion is limited to dimensions 1..3")
    matrix = moore_matrix(tower, space.array, s, r + 1)
    coeffs = []
    for j in range(r + 1):
        keep = [c for c in range(r + 1) if c != j]
        minor = matrix[:, keep]
        cofactor = np.linalg.det(minor)
        coeffs.append(cofactor if j % 2 == 0 else -cofactor)
    poly = SigmaPoly(tower, s, tuple(int(c) for c in coeffs))
    return poly.scale(tower.GFqm(1) / tower.GFqm(poly.coeffs[-1]))


def annihilator_theta(space: Subspace, s: int = 1) -> SigmaPoly:
    """θ_S = ∏_{u in U_S} (x - u), as a monic σ-polynomial."""
    return subspace_polynomial(space, s)


def interpolate(
    tower: FieldTower,
    points: Union[Sequence[int], galois.FieldArray],
    values: Union[Sequence[int], galois.FieldArray],
    s: int = 1,
) -> SigmaPoly:
    """Unique σ-polynomial of σ-degree < len(points) with f(points[i]) = values[i]."""
    nodes = as_ints(points).reshape(-1)
    targets = tower.element(as_ints(values).reshape(-1))
    if nodes.size != targets.size:
        raise ParameterError(f"{nodes.size} points but {targets.size} values")
    if nodes.size == 0:
        return SigmaPoly.zero(tower, s)
    matrix = moore_matrix(tower, nodes, s, nodes.size)
    try:
        solution = np.linalg.solve(matrix, targets)
    except np.linalg.LinAlgError as exc:
        raise ParameterError("interpolation points are dependent over F_q") from exc
    return SigmaPoly(tower, s, tuple(as_ints(solution)))


def reduce_mod_theta(f: SigmaPoly, space: Subspace) -> SigmaPoly:
    """π_S(f): the representative of f modulo θ_S of σ-degree < dim S."""
    theta = annihilator_theta(space, f.s)
    _, remainder = right_divide(f, theta)
    check = interpolate(space.tower, space.basis, evaluate(f, space.array), f.s)
    if check != remainder:
        raise ArithmeticError("right division by θ_S disagrees with Moore interpolation")
    return remainder


def poly_to_json(f: SigmaPoly) -> dict[str, Any]:
    return {
        "s": f.s,
        "terms": [[index, str(c)] for index, c in enumerate(f.coeffs) if c],
    }


def poly_from_json(tower: FieldTower, data: Mapping[str, Any]) -> SigmaPoly:
    try:
        s = int(data.get("s", 1))
        terms = {int(index): int(str(value)) for index, value in data["terms"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed polynomial {data!r}") from exc
    for value in terms.values():
        if not 0 <= value < tower.GFqm.order:
            raise ParameterError(f"coefficient {value} is not an element of F_{tower.GFqm.order}")
    return SigmaPoly.from_terms(tower, s, terms)
