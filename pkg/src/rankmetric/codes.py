"""MRD code families as σ-polynomial sets and their evaluation codes."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Iterator, Mapping, Optional, Sequence

import galois
import numpy as np

from .errors import MRDViolation, NormConditionError, ParameterError
from .fields import FieldTower, as_ints, digit_matrix, fp_rank, parse_field_spec, power
from .linearized import (
    SigmaPoly,
    Subspace,
    evaluate,
    interpolate,
    poly_from_json,
    poly_to_json,
)

if TYPE_CHECKING:
    from .oracle import EnumGuard
    from .progress import EnumerationProgress

LOGGER = logging.getLogger(__name__)

FAMILIES = ("G", "G_sigma", "H", "Hbar", "D", "custom")

_FAMILY_ALIASES = {
    "g": "G",
    "gabidulin": "G",
    "g_sigma": "G_sigma",
    "g_σ": "G_sigma",
    "gsigma": "G_sigma",
    "h": "H",
    "twisted": "H",
    "hbar": "Hbar",
    "d": "D",
    "custom": "custom",
    "custom-containing-g2": "custom",
}

# generator blocks are materialised up to this many codewords at a time
_BLOCK_STATES = 1 << 16


def normalize_family(name: str) -> str:
    try:
        return _FAMILY_ALIASES[name.strip().lower()]
    except KeyError:
        raise ParameterError(
            f"unknown code family {name!r}; expected one of {', '.join(FAMILIES)}"
        ) from None


@dataclass(frozen=True)
class Word:
    """A vector of F_{q^m}^n."""

    tower: FieldTower
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))

    @classmethod
    def from_array(cls, tower: FieldTower, values: Any) -> "Word":
        return cls(tower, tuple(as_ints(values).reshape(-1)))

    @classmethod
    def zero(cls, tower: FieldTower, n: int) -> "Word":
        return cls(tower, (0,) * n)

    @property
    def array(self) -> galois.FieldArray:
        return self.tower.GFqm(list(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def _check(self, other: "Word") -> None:
        if self.tower != other.tower or len(self) != len(other):
            raise ParameterError("words of different length or field")

    def __add__(self, other: "Word") -> "Word":
        self._check(other)
        return Word.from_array(self.tower, self.array + other.array)

    def __sub__(self, other: "Word") -> "Word":
        self._check(other)
        return Word.from_array(self.tower, self.array - other.array)

    @property
    def rank(self) -> int:
        return rank_weight(self)

    def within(self, center: "Word", radius: int) -> bool:
        """Membership in the rank ball B_radius(center)."""
        return distance(center, self) <= radius


def rank_weight(word: Word) -> int:
    return word.tower.fq_rank(word.entries)


def distance(u: Word, v: Word) -> int:
    return rank_weight(u - v)


@dataclass(frozen=True)
class RankCode:
    """Intensional description of an evaluation code {(g(α_1), ..., g(α_n))}."""

    tower: FieldTower
    family: str
    k: int
    s: int
    alpha: tuple[int, ...]
    eta: Optional[int] = None
    h: Optional[int] = None
    extra: tuple[SigmaPoly, ...] = ()
    gabidulin_index: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def m(self) -> int:
        return self.tower.m

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def d(self) -> int:
        return self.n - self.k + 1

    @property
    def size(self) -> int:
        return self.q ** (self.m * self.k)

    @property
    def evaluation_space(self) -> Subspace:
        return Subspace(self.tower, self.alpha)

    @property
    def contains_g2(self) -> bool:
        """Whether every q-polynomial of q-degree <= 1 is in the code."""
        if self.family == "custom":
            return True
        return self.family in {"G", "G_sigma"} and self.s == 1 and self.k >= 2

    @property
    def is_mrd_family(self) -> bool:
        return self.family != "custom"

    @property
    def label(self) -> str:
        return f"{self.family}[{self.tower.spec}]_{{n={self.n},k={self.k},s={self.s}}}"


def default_alpha(tower: FieldTower) -> tuple[int, ...]:
    """Embedded polynomial basis of F_{q^n}; first n basis vectors of F_{q^m} otherwise."""
    if tower.has_embedding:
        return Subspace.embedded(tower).basis
    return Subspace.full(tower).basis[: tower.n]


def family_condition(tower: FieldTower, family: str, k: int, eta: Optional[int]) -> Optional[str]:
    """Human-readable reason why η fails the family condition, or None."""
    family = normalize_family(family)
    if family in {"G", "G_sigma", "custom"}:
        return None
    if eta is None or int(eta) == 0:
        return f"family {family} needs a nonzero η"
    x = tower.element(int(eta))
    m = tower.m
    if family == "H":
        if tower.q == 2:
            return "the H family is empty over F_2: N(η) = 1 = (-1)^(mk) for every η ≠ 0"
        value = int(tower.norm(x, "q"))
        if value == tower.minus_one_power(m * k):
            return f"N_(q^m/q)(η) = {value} equals (-1)^(mk)"
        return None
    if family == "Hbar":
        if tower.p == 2:
            return "the Hbar family is empty in characteristic 2: N(η) = 1 = (-1)^(mk)"
        value = int(tower.norm(x, "p"))
        if value == tower.minus_one_power(m * k):
            return f"N_(q^m/p)(η) = {value} equals (-1)^(mk)"
        return None
    if family == "D":
        if m % 2:
            return f"family D needs m even, got m={m}"
        if tower.q % 2 == 0:
            return "family D needs q odd: every element of F_q is a square when q is even"
        value = tower.norm(x, "q")
        if int(power(value, (tower.q - 1) // 2)) == 1:
            return f"N_(q^m/q)(η) = {int(value)} is a square in F_q"
        return None
    return None


def find_eta(tower: FieldTower, family: str, k: int) -> int:
    """Smallest η (integer order) satisfying the family condition."""
    family = normalize_family(family)
    if family in {"G", "G_sigma", "custom"}:
        raise ParameterError(f"family {family} has no η parameter")
    first_reason = None
    for candidate in range(1, tower.GFqm.order):
        reason = family_condition(tower, family, k, candidate)
        if reason is None:
            return candidate
        first_reason = first_reason or reason
        if "empty" in reason or "needs" in reason:
            break
    raise ParameterError(f"no η satisfies the {family} condition: {first_reason}")


def make_code(
    tower: FieldTower,
    family: str,
    k: int,
    s: int = 1,
    *,
    eta: Optional[int] = None,
    h: Optional[int] = None,
    alpha: Optional[Sequence[int]] = None,
    extra: Sequence[SigmaPoly] = (),
) -> RankCode:
    """Validate family parameters and return the code descriptor."""
    family = normalize_family(family)
    m = tower.m
    SigmaPoly.zero(tower, s)  # validates gcd(s, m) = 1
    if family == "G" and s != 1:
        raise ParameterError(f"family G uses σ = q; use G_sigma for s={s}")
    points = tuple(int(a) for a in (alpha if alpha is not None else default_alpha(tower)))
    n = len(points)
    if not 1 <= k <= n <= m:
        raise ParameterError(f"need 1 <= k <= n <= m, got k={k}, n={n}, m={m}")
    if Subspace.span(tower, points).dim != n:
        raise ParameterError("evaluation points are linearly dependent over F_q")

    reason = family_condition(tower, family, k, eta)
    if reason is not None:
        norm_value = None
        if eta:
            target = "p" if family == "Hbar" else "q"
            norm_value = int(tower.norm(tower.element(int(eta)), target))
        raise NormConditionError(reason, norm=norm_value)

    if family in {"H", "Hbar"}:
        h = 1 if h is None else int(h)
    else:
        h = None
    if family in {"G", "G_sigma", "custom"}:
        eta = None

    extras: tuple[SigmaPoly, ...] = ()
    if family == "custom":
        if s != 1 or k < 2:
            raise ParameterError("custom codes contain G_{m,2}: they need s=1 and k >= 2")
        for poly in extra:
            if poly.tower != tower or poly.s != 1:
                raise ParameterError("custom generators must be q-polynomials over the code's tower")
        extras = tuple(extra)

    index = {"G": k, "G_sigma": k, "custom": 2}.get(family, k - 1)
    code = RankCode(
        tower=tower,
        family=family,
        k=k,
        s=s,
        alpha=points,
        eta=None if eta is None else int(eta),
        h=h,
        extra=extras,
        gabidulin_index=index,
    )
    LOGGER.debug("code constructed", extra={"code": code.label, "d": code.d})
    return code


# -- polynomial side -------------------------------------------------------


def _top_value(code: RankCode, a: galois.FieldArray) -> galois.FieldArray:
    """f_2(a), the coefficient forced at σ-exponent k by the constant term a."""
    tower = code.tower
    if code.family == "H":
        return tower.element(code.eta) * tower.frobenius(a, code.h)
    if code.family == "Hbar":
        return tower.element(code.eta) * power(a, tower.p**code.h)
    return tower.GFqm.Zeros(np.shape(a))


def generator_polys(code: RankCode) -> list[SigmaPoly]:
    """An F_p-spanning set of the code's polynomial set."""
    tower, s, k = code.tower, code.s, code.k
    fp_basis = [tower.p**i for i in range(tower.ell * tower.m)]
    gens: list[SigmaPoly] = []
    middle = range(1, k) if code.family in {"H", "Hbar", "D"} else range(k)
    if code.family == "custom":
        middle = range(2)
    if code.family in {"H", "Hbar"}:
        for e in fp_basis:
            top = int(_top_value(code, tower.element(e)))
            gens.append(SigmaPoly.from_terms(tower, s, {0: e, k: top}))
    elif code.family == "D":
        half = as_ints(tower.subfield_fp_basis(tower.m // 2))
        eta = tower.element(code.eta)
        for e in half:
            gens.append(SigmaPoly.monomial(tower, s, 0, int(e)))
        for e in half:
            gens.append(SigmaPoly.monomial(tower, s, k, int(eta * tower.element(int(e)))))
    for i in middle:
        for e in fp_basis:
            gens.append(SigmaPoly.monomial(tower, s, i, e))
    gens.extend(code.extra)
    return gens


def contains_poly(code: RankCode, g: SigmaPoly) -> bool:
    """Algebraic membership of a σ-polynomial in the code's polynomial set."""
    if g.is_zero:
        return True
    if g.tower != code.tower or g.s != code.s:
        raise ParameterError("polynomial twist or field differs from the code's")
    tower, k = code.tower, code.k
    if code.family == "custom":
        if g.degree <= 1:
            return True
        return _span_contains(code, codeword_from_poly(code, g))
    if g.degree > k:
        return False
    a = tower.element(g.coefficient(0))
    top = tower.element(g.coefficient(k))
    if code.family == "D":
        half = tower.m // 2
        b = top / tower.element(code.eta)
        return bool(tower.in_subfield(a, half)) and bool(tower.in_subfield(b, half))
    return int(top) == int(_top_value(code, a))


def code_polynomials(code: RankCode, guard: Optional["EnumGuard"] = None) -> Iterator[SigmaPoly]:
    """Every polynomial of the code (q^(mk) of them); oracle-side only."""
    from .oracle import EnumGuard

    gens = _independent_generators(code)
    (guard or EnumGuard.from_env()).check(code.tower.p ** len(gens), "code polynomials")
    zero = SigmaPoly.zero(code.tower, code.s)
    for combo in itertools.product(range(code.tower.p), repeat=len(gens)):
        poly = zero
        for c, gen in zip(combo, gens):
            if c:
                poly = poly + gen.scale(c)
        yield poly


# -- word side -------------------------------------------------------------


def codeword_from_poly(code: RankCode, g: SigmaPoly) -> Word:
    return Word.from_array(code.tower, evaluate(g, code.tower.GFqm(list(code.alpha))))


def _word_digits(tower: FieldTower, words: np.ndarray) -> np.ndarray:
    width = tower.ell * tower.m
    digits = digit_matrix(words, tower.p, width)
    return digits.reshape(*words.shape[:-1], -1)


def _independent_generators(code: RankCode) -> list[SigmaPoly]:
    gens = generator_polys(code)
    if code.family != "custom":
        return gens
    tower = code.tower
    chosen: list[SigmaPoly] = []
    rows: list[np.ndarray] = []
    for gen in gens:
        digits = _word_digits(tower, np.asarray(codeword_from_poly(code, gen).entries))
        candidate = rows + [digits]
        if _digit_rank(tower.p, candidate) == len(candidate):
            rows.append(digits)
            chosen.append(gen)
    return chosen


def _digit_rank(p: int, rows: Sequence[np.ndarray]) -> int:
    if not rows:
        return 0
    return int(np.linalg.matrix_rank(galois.GF(p)(np.stack(rows))))


def _span_contains(code: RankCode, word: Word) -> bool:
    tower = code.tower
    gens = _independent_generators(code)
    rows = [
        _word_digits(tower, np.asarray(codeword_from_poly(code, gen).entries)) for gen in gens
    ]
    target = _word_digits(tower, np.asarray(word.entries))
    return _digit_rank(tower.p, rows + [target]) == _digit_rank(tower.p, rows)


def contains(code: RankCode, word: Word) -> bool:
    """Membership by interpolation through (α_i, w_i) and a coefficient-pattern check."""
    if len(word) != code.n:
        raise ParameterError(f"word has length {len(word)}, code has length {code.n}")
    if word.tower != code.tower:
        raise ParameterError("word lives over a different field tower")
    if not any(word.entries):
        return True
    if code.family == "custom":
        return _span_contains(code, word)
    if code.k >= code.n:
        return True
    g = interpolate(code.tower, code.alpha, word.entries, code.s)
    return contains_poly(code, g)


def generator_words(code: RankCode) -> np.ndarray:
    gens = _independent_generators(code)
    alpha = code.tower.GFqm(list(code.alpha))
    if not gens:
        return np.zeros((0, code.n), dtype=np.int64)
    return np.stack([as_ints(evaluate(g, alpha)) for g in gens])


def enumerate_codewords(
    code: RankCode,
    guard: Optional["EnumGuard"] = None,
    progress: Optional["EnumerationProgress"] = None,
) -> Iterator[np.ndarray]:
    """Yield blocks (rows = codewords, integer encoded) covering the code once.

    The codes are closed under addition, so the code is the F_p-span of the
    generator words; the last generators are expanded into one vectorised block
    and the remaining ones index the block offsets.
    """
    from .oracle import EnumGuard

    tower = code.tower
    gf = tower.GFqm
    p = tower.p
    gens = generator_words(code)
    total = p ** len(gens)
    (guard or EnumGuard.from_env()).check(total, "codewords")
    inner = 0
    while inner < len(gens) and p ** (inner + 1) <= _BLOCK_STATES:
        inner += 1
    outer_rows, inner_rows = gens[: len(gens) - inner], gens[len(gens) - inner :]

    block = gf.Zeros((1, code.n))
    for row in inner_rows:
        vector = gf(row)
        block = gf(np.concatenate([as_ints(block + gf(c) * vector) for c in range(p)]))

    if progress is not None:
        progress.begin(total)
    for combo in itertools.product(range(p), repeat=len(outer_rows)):
        offset = gf.Zeros(code.n)
        for c, row in zip(combo, outer_rows):
            if c:
                offset = offset + gf(c) * gf(row)
        yield as_ints(block + offset)
        if progress is not None:
            progress.advance(block.shape[0])
    if progress is not None:
        progress.finish()


def min_distance_exhaustive(
    code: RankCode,
    guard: Optional["EnumGuard"] = None,
    progress: Optional["EnumerationProgress"] = None,
) -> int:
    """Smallest rank weight of a nonzero codeword, by full enumeration."""
    best: Optional[int] = None
    for block in enumerate_codewords(code, guard, progress):
        ranks = code.tower.fq_ranks(block)
        positive = ranks[ranks > 0]
        if positive.size:
            low = int(positive.min())
            best = low if best is None else min(best, low)
    if best is None:
        raise ParameterError("code has no nonzero codeword")
    if code.is_mrd_family and best != code.d:
        raise MRDViolation(
            f"{code.label}: minimum distance {best} differs from n-k+1 = {code.d}"
        )
    LOGGER.info("minimum distance scanned", extra={"code": code.label, "d": best})
    return best


def singleton_bound(m: int, n: int, d: int, q: int) -> int:
    return q ** (max(m, n) * (min(m, n) - d + 1))


def singleton_size(m: int, n: int, k: int, q: int) -> int:
    """q^(mk), checked against the rank-metric Singleton bound at d = n-k+1."""
    if not 1 <= k <= n <= m:
        raise ParameterError(f"need 1 <= k <= n <= m, got k={k}, n={n}, m={m}")
    size = q ** (m * k)
    if size != singleton_bound(m, n, n - k + 1, q):
        raise MRDViolation(f"q^(mk) = {size} does not attain the Singleton bound")
    return size


# -- descriptors -----------------------------------------------------------


def code_to_descriptor(code: RankCode) -> dict[str, Any]:
    descriptor: dict[str, Any] = {
        "field": code.tower.spec,
        "family": code.family,
        "k": code.k,
        "s": code.s,
        "alpha": "default"
        if code.alpha == default_alpha(code.tower)
        else [str(a) for a in code.alpha],
    }
    if code.eta is not None:
        descriptor["eta"] = str(code.eta)
    if code.h is not None:
        descriptor["h"] = code.h
    if code.extra:
        descriptor["extra"] = [poly_to_json(poly) for poly in code.extra]
    return descriptor


def code_from_descriptor(
    descriptor: Mapping[str, Any], tower: Optional[FieldTower] = None
) -> RankCode:
    try:
        field_spec = descriptor["field"]
        family = str(descriptor["family"])
        k = int(descriptor["k"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"code descriptor needs field, family and k: {exc}") from exc
    tower = tower or parse_field_spec(str(field_spec))
    alpha_value = descriptor.get("alpha", "default")
    alpha = None if alpha_value in (None, "default") else [int(str(a)) for a in alpha_value]
    eta = descriptor.get("eta")
    if normalize_family(family) in {"H", "Hbar", "D"} and eta in (None, "auto"):
        eta = find_eta(tower, family, k)
    h = descriptor.get("h")
    extra = [poly_from_json(tower, item) for item in descriptor.get("extra", [])]
    return make_code(
        tower,
        family,
        k,
        int(descriptor.get("s", 1)),
        eta=None if eta is None else int(str(eta)),
        h=None if h is None else int(h),
        alpha=alpha,
        extra=extra,
    )
