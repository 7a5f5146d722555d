"""Monomials as exponent vectors and monomial ideals with canonical minimal generators."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .errors import (
    DimensionError,
    ExponentOverflowError,
    NotEquigeneratedError,
    UnitIdealError,
    ZeroIdealError,
)

# Exponents are kept within a signed 32-bit range so the compiled kernels never wrap.
MAX_EXPONENT = 2**31 - 1


class Monomial(tuple):
    """Immutable exponent vector ``x^a``.

    A tuple subclass, so monomials hash and compare like plain tuples and can
    be used as dictionary keys without conversion.
    """

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int] = ()):
        exps = tuple(int(e) for e in exponents)
        for e in exps:
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            if e > MAX_EXPONENT:
                raise ExponentOverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")
        return super().__new__(cls, exps)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def degree(self) -> int:
        return sum(self)

    total_degree = degree

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self) if e)

    def is_unit(self) -> bool:
        return not any(self)

    def is_squarefree(self) -> bool:
        return all(e <= 1 for e in self)

    def to_string(self, var_names: Sequence[str] | None = None) -> str:
        names = var_names or [f"x{i + 1}" for i in range(len(self))]
        parts = []
        for name, e in zip(names, self):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"Monomial({tuple(self)!r})"


def _check_dims(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionError(f"monomials of length {len(a)} and {len(b)}")


def lcm_of(a: Monomial, b: Monomial) -> Monomial:
    _check_dims(a, b)
    return Monomial(map(max, a, b))


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    """True when ``x^a`` divides ``x^b``."""
    _check_dims(a, b)
    return all(x <= y for x, y in zip(a, b))


def times(a: Monomial, b: Monomial) -> Monomial:
    _check_dims(a, b)
    out = tuple(x + y for x, y in zip(a, b))
    if any(e > MAX_EXPONENT for e in out):
        raise ExponentOverflowError(f"product exponent exceeds {MAX_EXPONENT}")
    return Monomial(out)


def grlex_key(m: Sequence[int]):
    """Sort key: total degree first, then lexicographically larger vectors first."""
    return (sum(m), tuple(-e for e in m))


def _minimal_subset(gens: Iterable[Sequence[int]]) -> list[Monomial]:
    # Sorting by degree means only earlier (lower or equal degree) monomials can divide later ones.
    ordered = sorted({Monomial(g) for g in gens}, key=grlex_key)
    kept: list[Monomial] = []
    for m in ordered:
        if not any(all(x <= y for x, y in zip(g, m)) for g in kept):
            kept.append(m)
    return kept


@dataclass(frozen=True)
class MonomialIdeal:
    """A proper nonzero monomial ideal given by its minimal generators in grlex order."""

    ring_dim: int
    generators: tuple[Monomial, ...]
    var_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.ring_dim < 1:
            raise DimensionError("ring dimension must be positive")
        names = tuple(self.var_names) or tuple(f"x{i + 1}" for i in range(self.ring_dim))
        if len(names) != self.ring_dim or len(set(names)) != self.ring_dim:
            raise DimensionError("need exactly ring_dim distinct variable names")
        object.__setattr__(self, "var_names", names)
        gens = tuple(Monomial(g) for g in self.generators)
        if not gens:
            raise ZeroIdealError("zero ideal: empty generator list")
        for g in gens:
            if len(g) != self.ring_dim:
                raise DimensionError(f"generator {g!r} has length {len(g)}, expected {self.ring_dim}")
            if g.is_unit():
                raise UnitIdealError("unit ideal: the constant monomial 1 is a generator")
        if list(gens) != _minimal_subset(gens):
            raise ValueError("generators must be minimal and in canonical order; use minimalize()")
        object.__setattr__(self, "generators", gens)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        """Generator index bound: the ideal is ``(f_0, ..., f_k)``."""
        return len(self.generators) - 1

    def degrees(self) -> list[int]:
        return [g.degree for g in self.generators]

    def contains(self, m: Sequence[int]) -> bool:
        return any(all(x <= y for x, y in zip(g, m)) for g in self.generators)

    def is_squarefree(self) -> bool:
        return all(g.is_squarefree() for g in self.generators)

    def with_names(self, var_names: Sequence[str]) -> "MonomialIdeal":
        return MonomialIdeal(self.ring_dim, self.generators, tuple(var_names))

    def __str__(self) -> str:
        return "(" + ", ".join(g.to_string(self.var_names) for g in self.generators) + ")"


def minimalize(
    gens: Iterable[Sequence[int]], ring_dim: int, var_names: Sequence[str] = ()
) -> MonomialIdeal:
    gens = [Monomial(g) for g in gens]
    if not gens:
        raise ZeroIdealError("zero ideal: empty generator list")
    for g in gens:
        if len(g) != ring_dim:
            raise DimensionError(f"generator {g!r} has length {len(g)}, expected {ring_dim}")
        if g.is_unit():
            raise UnitIdealError("unit ideal: the constant monomial 1 is a generator")
    return MonomialIdeal(ring_dim, tuple(_minimal_subset(gens)), tuple(var_names))


def power(ideal: MonomialIdeal, d: int) -> MonomialIdeal:
    if d < 1:
        raise ValueError("power must be at least 1")
    if d == 1:
        return ideal
    # Every exponent of I^d is at most d times the largest exponent of I.
    if d * max(max(g) for g in ideal.generators) > MAX_EXPONENT:
        raise ExponentOverflowError(f"exponents of the {d}-th power exceed {MAX_EXPONENT}")
    products = set()
    for combo in combinations_with_replacement(ideal.generators, d):
        products.add(tuple(map(sum, zip(*combo))))
    return minimalize(products, ideal.ring_dim, ideal.var_names)


def equigenerated_degree(ideal: MonomialIdeal) -> int:
    degrees = ideal.degrees()
    if len(set(degrees)) != 1:
        raise NotEquigeneratedError(degrees)
    return degrees[0]


def degree_multiset(ideal: MonomialIdeal) -> Counter:
    return Counter(ideal.degrees())


def variable_ideal(n: int) -> MonomialIdeal:
    """The homogeneous maximal ideal ``(x_1, ..., x_n)``."""
    return minimalize([[int(i == j) for j in range(n)] for i in range(n)], n)
