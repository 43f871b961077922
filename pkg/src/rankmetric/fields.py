"""Finite-field towers F_p ⊆ F_q ⊆ F_{q^n} ⊆ F_{q^m} built on galois.

Elements are galois ``FieldArray`` scalars or arrays.  Their integer
representation is the little-endian base-p encoding of the coefficient
vector over F_p, which is also the total order used whenever a
deterministic choice (smallest root, smallest irreducible) is needed.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import galois
import numpy as np

from .errors import ParameterError

LOGGER = logging.getLogger(__name__)

MAX_FIELD_ORDER = 2**32

_SPEC_PATTERN = re.compile(
    r"^\s*(?P<p>\d+)(?:\^(?P<ell>\d+))?:(?P<n>\d+):(?P<m>\d+)(?::(?:0x)?(?P<mod>[0-9a-fA-F]+))?\s*$"
)

ElementLike = Union[int, galois.FieldArray]


def digit_matrix(values: Union[int, Sequence[int], np.ndarray], p: int, width: int) -> np.ndarray:
    """Little-endian base-p digits of ``values`` along a new trailing axis."""
    array = np.asarray(values, dtype=np.int64)
    weights = np.int64(p) ** np.arange(width, dtype=np.int64)
    return (array[..., None] // weights) % p


def coefficients(x: galois.FieldArray) -> tuple[int, ...]:
    """Coefficient vector of a scalar element over F_p (little-endian)."""
    gf = type(x)
    digits = digit_matrix(int(x), gf.characteristic, gf.degree)
    return tuple(int(d) for d in digits)


def as_ints(x: ElementLike) -> np.ndarray:
    if isinstance(x, galois.FieldArray):
        return x.view(np.ndarray).astype(np.int64, copy=False)
    return np.asarray(x, dtype=np.int64)


def require_same_level(x: galois.FieldArray, y: galois.FieldArray) -> None:
    if type(x) is not type(y):
        raise TypeError(
            f"cross-level operation between {type(x).name} and {type(y).name}; embed first"
        )


def power(x: galois.FieldArray, exponent: int) -> galois.FieldArray:
    """``x ** exponent`` for arbitrary Python integers (negative means inverse)."""
    gf = type(x)
    group_order = gf.order - 1
    if exponent == 0:
        return gf.Ones(np.shape(x))
    if exponent < 0:
        if np.any(as_ints(x) == 0):
            raise ZeroDivisionError("negative power of zero")
        exponent %= group_order
        if exponent == 0:
            return gf.Ones(np.shape(x))
        return x**exponent
    # keeps 0 ** e == 0 while staying inside machine words
    return x ** ((exponent - 1) % group_order + 1)


def inverse(x: galois.FieldArray) -> galois.FieldArray:
    if np.any(as_ints(x) == 0):
        raise ZeroDivisionError("inverse of zero")
    return power(x, -1)


def split_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, ell)`` with ``q == p ** ell``."""
    if q < 2 or not galois.is_prime_power(q):
        raise ParameterError(f"q={q} is not a prime power")
    primes, exponents = galois.factors(q)
    return int(primes[0]), int(exponents[0])


def fp_rank(values: Iterable[int], p: int, width: int) -> int:
    """Rank over F_p of integer-encoded vectors of ``width`` base-p digits."""
    ints = [int(v) for v in values]
    if not ints:
        return 0
    if p == 2:
        return _gf2_rank(ints)
    matrix = galois.GF(p)(digit_matrix(ints, p, width))
    return int(np.linalg.matrix_rank(matrix))


def _gf2_rank(values: Iterable[int]) -> int:
    basis: list[int] = []
    for value in values:
        for vector in basis:
            value = min(value, value ^ vector)
        if value:
            basis.append(value)
            basis.sort(reverse=True)
    return len(basis)


def _build_field(p: int, degree: int, modulus: int) -> type[galois.FieldArray]:
    if degree == 1:
        return galois.GF(p)
    return galois.GF(p**degree, irreducible_poly=galois.Poly.Int(modulus, field=galois.GF(p)))


def _default_modulus(p: int, degree: int) -> int:
    if degree == 1:
        return p
    return int(galois.irreducible_poly(p, degree, method="min"))


def _check_modulus(p: int, degree: int, modulus: Optional[int]) -> int:
    if modulus is None:
        return _default_modulus(p, degree)
    poly = galois.Poly.Int(int(modulus), field=galois.GF(p))
    if poly.degree != degree:
        raise ParameterError(
            f"modulus {int(modulus):#x} has degree {poly.degree}, expected {degree}"
        )
    if int(poly.coeffs[0]) != 1:
        raise ParameterError(f"modulus {int(modulus):#x} is not monic")
    if degree > 1 and not poly.is_irreducible():
        raise ParameterError(f"modulus {int(modulus):#x} is reducible over F_{p}")
    return int(modulus)


def _smallest_root(gf: type[galois.FieldArray], p: int, modulus: int) -> int:
    digits = [int(d) for d in digit_matrix(modulus, p, _int_degree(modulus, p) + 1)]
    poly = galois.Poly(digits[::-1], field=gf)
    roots = as_ints(poly.roots())
    if roots.size == 0:
        raise ParameterError(f"modulus {modulus:#x} has no root in F_{gf.order}")
    return int(roots.min())


def _int_degree(value: int, p: int) -> int:
    degree = 0
    while value >= p:
        value //= p
        degree += 1
    return degree


@dataclass(frozen=True)
class FieldTower:
    """The chain F_p ⊆ F_q ⊆ F_{q^n} ⊆ F_{q^m}, immutable and shareable."""

    p: int
    ell: int
    n: int
    m: int
    modulus_qn: int
    modulus_qm: int
    theta: Optional[int]
    GFqn: type = field(compare=False, repr=False, hash=False)
    GFqm: type = field(compare=False, repr=False, hash=False)

    @classmethod
    def create(
        cls,
        p: int,
        ell: int,
        n: int,
        m: int,
        *,
        modulus_qn: Optional[int] = None,
        modulus_qm: Optional[int] = None,
        require_embedding: bool = False,
    ) -> "FieldTower":
        if not galois.is_prime(p):
            raise ParameterError(f"characteristic {p} is not prime")
        if min(ell, n, m) < 1:
            raise ParameterError("ell, n and m must be positive")
        if p ** (ell * m) > MAX_FIELD_ORDER:
            raise ParameterError(f"F_{{{p}^{ell * m}}} exceeds the supported field size 2^32")
        divides = m % n == 0
        if require_embedding and not divides:
            raise ParameterError(f"n={n} does not divide m={m}; no embedding of F_q^n")
        mod_qm = _check_modulus(p, ell * m, modulus_qm)
        if modulus_qn is None and n == m:
            modulus_qn = mod_qm
        mod_qn = _check_modulus(p, ell * n, modulus_qn)
        gf_qm = _build_field(p, ell * m, mod_qm)
        gf_qn = gf_qm if (n == m and mod_qn == mod_qm) else _build_field(p, ell * n, mod_qn)
        theta = _smallest_root(gf_qm, p, mod_qn) if divides else None
        LOGGER.debug(
            "field tower built",
            extra={"p": p, "ell": ell, "n": n, "m": m, "modulus_qm": mod_qm, "theta": theta},
        )
        return cls(p, ell, n, m, mod_qn, mod_qm, theta, gf_qn, gf_qm)

    @property
    def q(self) -> int:
        return self.p**self.ell

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.ell}:{self.n}:{self.m}:{self.modulus_qm:x}"

    @property
    def has_embedding(self) -> bool:
        return self.theta is not None

    def level_degree(self, gf: type) -> int:
        """Degree over F_q of a tower level."""
        return gf.degree // self.ell

    def minus_one_power(self, exponent: int) -> int:
        """(-1)^exponent as an integer-encoded element of F_p."""
        return 1 if exponent % 2 == 0 else (self.p - 1) % self.p

    # -- element helpers -------------------------------------------------

    def element(self, value: ElementLike, *, level: str = "qm") -> galois.FieldArray:
        gf = self.GFqm if level == "qm" else self.GFqn
        if isinstance(value, galois.FieldArray):
            if type(value) is not gf:
                raise TypeError(f"element lives in {type(value).name}, expected {gf.name}")
            return value
        return gf(value)

    def elements(self, *, level: str = "qm") -> galois.FieldArray:
        gf = self.GFqm if level == "qm" else self.GFqn
        return gf.elements

    def frobenius(self, x: galois.FieldArray, e: int) -> galois.FieldArray:
        """x^(q^e) with ``e`` reduced modulo the degree of x's level."""
        e %= self.level_degree(type(x))
        if e == 0:
            return x
        return x ** (self.q**e)

    def sigma(self, x: galois.FieldArray, s: int, j: int = 1) -> galois.FieldArray:
        """x^(σ^j) for the twist σ = q^s."""
        return self.frobenius(x, s * j)

    def norm(self, x: galois.FieldArray, down_to: str = "q") -> galois.FieldArray:
        if down_to not in {"q", "p"}:
            raise ParameterError(f"norm target must be 'q' or 'p', not {down_to!r}")
        base = self.q if down_to == "q" else self.p
        order = type(x).order
        return power(x, (order - 1) // (base - 1))

    # -- embedding -------------------------------------------------------

    @cached_property
    def _embedding_table(self) -> Optional[np.ndarray]:
        if self.GFqn is self.GFqm:
            return None
        degree = self.ell * self.n
        theta = self.GFqm(self.theta)
        powers = [self.GFqm(1)]
        for _ in range(degree - 1):
            powers.append(powers[-1] * theta)
        basis = self.GFqm([int(x) for x in powers])
        digits = self.GFqm(digit_matrix(np.arange(self.GFqn.order), self.p, degree))
        return as_ints(digits @ basis)

    def embed(self, x: ElementLike) -> galois.FieldArray:
        """Image of an F_{q^n} element (or integer code) in F_{q^m}."""
        if self.theta is None:
            raise ParameterError(f"n={self.n} does not divide m={self.m}; no embedding")
        if isinstance(x, galois.FieldArray) and type(x) is not self.GFqn:
            raise TypeError(f"embed expects an element of {self.GFqn.name}")
        table = self._embedding_table
        codes = as_ints(x)
        if table is None:
            return self.GFqm(codes)
        return self.GFqm(table[codes])

    # -- subfields of F_{q^m} --------------------------------------------

    def subfield_generator(self, j: int) -> galois.FieldArray:
        """Generator of the multiplicative group of F_{q^j} inside F_{q^m}."""
        if j < 1 or self.m % j:
            raise ParameterError(f"F_q^{j} is not a subfield of F_q^{self.m}")
        order = self.GFqm.order
        return power(self.GFqm.primitive_element, (order - 1) // (self.q**j - 1))

    def subfield_fp_basis(self, j: int) -> galois.FieldArray:
        """An F_p-basis of F_{q^j} ⊆ F_{q^m}: the powers of its generator."""
        zeta = self.subfield_generator(j)
        values = [self.GFqm(1)]
        for _ in range(self.ell * j - 1):
            values.append(values[-1] * zeta)
        return self.GFqm([int(v) for v in values])

    def in_subfield(self, x: galois.FieldArray, j: int) -> Union[bool, np.ndarray]:
        result = as_ints(self.frobenius(x, j)) == as_ints(x)
        return bool(result) if np.ndim(result) == 0 else result

    @cached_property
    def fq_basis(self) -> galois.FieldArray:
        return self.subfield_fp_basis(1)

    @cached_property
    def fq_elements(self) -> galois.FieldArray:
        """Embedded F_q in integer order."""
        gamma = self.subfield_generator(1)
        values = {0}
        current = self.GFqm(1)
        for _ in range(self.q - 1):
            values.add(int(current))
            current = current * gamma
        return self.GFqm(sorted(values))

    # -- F_q-linear algebra ----------------------------------------------

    def _expand(self, values: galois.FieldArray) -> np.ndarray:
        if self.ell == 1:
            return as_ints(values)
        return as_ints(values[..., None] * self.fq_basis).reshape(*values.shape[:-1], -1)

    def fq_rank(self, values: Union[Sequence[int], galois.FieldArray]) -> int:
        """Dimension over the embedded F_q of the span of ``values``."""
        array = self.element(as_ints(values).reshape(-1))
        if array.size == 0:
            return 0
        expanded = self._expand(array)
        return fp_rank(expanded.tolist(), self.p, self.ell * self.m) // self.ell

    def fq_ranks(self, words: Union[np.ndarray, galois.FieldArray]) -> np.ndarray:
        """Row-wise F_q-rank of a 2-D array of F_{q^m} elements."""
        ints = as_ints(words)
        if ints.ndim != 2:
            raise ValueError("fq_ranks expects a 2-D array")
        if ints.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        expanded = self._expand(self.GFqm(ints)) if self.ell > 1 else ints
        width = self.ell * self.m
        if self.p == 2:
            ranks = [_gf2_rank(row) for row in expanded.tolist()]
        else:
            ranks = [fp_rank(row, self.p, width) for row in expanded.tolist()]
        return np.asarray(ranks, dtype=np.int64) // self.ell


def parse_field_spec(spec: str, *, require_embedding: bool = False) -> FieldTower:
    """Build a tower from ``"p^ell:n:m[:modulus_qm_hex]"``."""
    match = _SPEC_PATTERN.match(spec)
    if not match:
        raise ParameterError(f"malformed field spec {spec!r}; expected p^ell:n:m[:modulus_hex]")
    modulus = match.group("mod")
    return FieldTower.create(
        int(match.group("p")),
        int(match.group("ell") or 1),
        int(match.group("n")),
        int(match.group("m")),
        modulus_qm=int(modulus, 16) if modulus else None,
        require_embedding=require_embedding,
    )


def is_power_of(value: int, base: int) -> bool:
    """True when value == base**e for some e >= 0."""
    if value < 1:
        return False
    while value % base == 0:
        value //= base
    return value == 1
