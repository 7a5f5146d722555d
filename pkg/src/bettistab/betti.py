"""Multigraded and graded Betti numbers of monomial ideals.

Two independent routes are provided. :func:`multigraded_betti` reads
``beta_{i,b}(I)`` off the reduced homology ``H~_{i-1}`` of the upper Koszul
simplicial complex of ``b``; :func:`lcm_lattice_betti` reads it off the order
complex of the open interval below ``b`` in the lcm lattice. Both are indexed
in the ideal-as-module convention (``beta_{0,b}`` counts minimal generators).
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Iterable, Mapping

from . import _kernels
from .complexes import FieldConfig, SimplicialComplex, homology_of_chains, reduced_homology_ranks
from .errors import CutoffExceededError, DimensionError, MalformedInputError, ResourceLimitError
from .ideal import Monomial, MonomialIdeal, grlex_key, lcm_of

log = logging.getLogger(__name__)

DEFAULT_FIELD = FieldConfig()


@dataclass(frozen=True)
class GradedBettiTable:
    """``beta_{i,j}`` of an ideal, module convention; only nonzero entries are stored."""

    entries: Mapping[tuple[int, int], int]
    ring_dim: int
    characteristic: int = DEFAULT_FIELD.characteristic

    def __post_init__(self):
        cleaned = {}
        for (i, j), v in self.entries.items():
            if v < 0:
                raise MalformedInputError(f"negative Betti number at {(i, j)}")
            if v:
                cleaned[(int(i), int(j))] = int(v)
        object.__setattr__(self, "entries", dict(sorted(cleaned.items())))

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedBettiTable):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def support(self) -> set[tuple[int, int]]:
        return set(self.entries)

    def totals(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (i, _), v in self.entries.items():
            out[i] = out.get(i, 0) + v
        return dict(sorted(out.items()))

    def row(self, offset: int) -> dict[int, int]:
        """Entries with ``j - i == offset`` keyed by ``i``."""
        return {i: v for (i, j), v in self.entries.items() if j - i == offset}

    @property
    def projective_dimension(self) -> int:
        return max(i for i, _ in self.entries)


@dataclass(frozen=True)
class MultigradedBettiTable:
    """``beta_{i,b}`` keyed by ``(i, b)`` with ``b`` a multidegree."""

    entries: Mapping[tuple[int, Monomial], int]
    ring_dim: int
    characteristic: int = DEFAULT_FIELD.characteristic

    def __post_init__(self):
        items = [((int(i), Monomial(b)), int(v)) for (i, b), v in self.entries.items() if v]
        items.sort(key=lambda kv: (kv[0][0], grlex_key(kv[0][1])))
        object.__setattr__(self, "entries", dict(items))

    def __getitem__(self, key) -> int:
        i, b = key
        return self.entries.get((i, Monomial(b)), 0)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultigradedBettiTable):
            return NotImplemented
        return self.entries == other.entries and self.ring_dim == other.ring_dim

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def graded(self) -> GradedBettiTable:
        out: dict[tuple[int, int], int] = {}
        for (i, b), v in self.entries.items():
            key = (i, b.degree)
            out[key] = out.get(key, 0) + v
        return GradedBettiTable(out, self.ring_dim, self.characteristic)


def _closure(ideal: MonomialIdeal, max_size: int) -> list[tuple[int, ...]]:
    closure = _kernels.lcm_closure(ideal.generators, max_size)
    if closure is None:
        raise ResourceLimitError(f"lcm lattice has more than {max_size} elements")
    closure.sort()
    return closure


def lcm_lattice(ideal: MonomialIdeal, max_size: int = 0) -> list[Monomial]:
    """Nonbottom elements of the lcm lattice, in grlex order."""
    return sorted((Monomial(m) for m in _closure(ideal, max_size)), key=grlex_key)


def upper_koszul_complex(ideal: MonomialIdeal, b) -> SimplicialComplex:
    """Faces: squarefree ``sigma <= b`` with ``x^b / x^sigma`` in the ideal."""
    b = tuple(b)
    n = ideal.ring_dim
    if len(b) != n:
        raise DimensionError(f"multidegree of length {len(b)} in a ring of dimension {n}")
    support = [l for l in range(n) if b[l] > 0]
    faces = set()
    for size in range(len(support) + 1):
        for sigma in combinations(support, size):
            quotient = list(b)
            for l in sigma:
                quotient[l] -= 1
            if ideal.contains(quotient):
                faces.add(frozenset(sigma))
    return SimplicialComplex(n, frozenset(faces))


def _chunks(seq: list, n: int) -> list[list]:
    size = max(1, -(-len(seq) // n))
    return [seq[k:k + size] for k in range(0, len(seq), size)]


def multigraded_betti(
    ideal: MonomialIdeal,
    field: FieldConfig = DEFAULT_FIELD,
    workers: int = 1,
    max_lattice: int = 0,
) -> MultigradedBettiTable:
    """Betti numbers from upper Koszul complexes over every lcm-lattice element.

    ``workers > 1`` spreads the candidate multidegrees over processes; results
    are merged in candidate order so the table does not depend on scheduling.
    """
    candidates = _closure(ideal, max_lattice)
    gens = [tuple(g) for g in ideal.generators]
    if workers > 1 and len(candidates) > 1:
        parts = _chunks(candidates, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [
                r
                for chunk in pool.map(
                    _kernels.betti_batch, [gens] * len(parts), parts, [field.p] * len(parts)
                )
                for r in chunk
            ]
    else:
        results = _kernels.betti_batch(gens, candidates, field.p)
    entries = {}
    for b, ranks in zip(candidates, results):
        for i, v in ranks.items():
            entries[(i, b)] = v
    log.debug("multigraded_betti: %d candidates, %d nonzero entries", len(candidates), len(entries))
    return MultigradedBettiTable(entries, ideal.ring_dim, field.p)


# Above this many chains in one interval the crosscut complex is used instead.
DEFAULT_MAX_CHAINS = 20_000


def _interval_chains(elements: list[Monomial]) -> list[tuple[int, ...]]:
    """All chains (as index tuples, ascending) of the poset ``elements`` under divisibility."""
    n = len(elements)
    ups = [
        [k for k in range(n) if k != a and all(x <= y for x, y in zip(elements[a], elements[k]))]
        for a in range(n)
    ]
    chains: list[tuple[int, ...]] = [()]
    stack = [(a,) for a in range(n)]
    while stack:
        c = stack.pop()
        chains.append(c)
        stack.extend(c + (k,) for k in ups[c[-1]])
    return chains


def _count_chains(elements: list[Monomial]) -> int:
    # elements arrive sorted by degree, so every predecessor is counted first
    count = []
    for a, e in enumerate(elements):
        count.append(1 + sum(count[f] for f in range(a) if all(x <= y for x, y in zip(elements[f], e))))
    return sum(count)


def order_complex_homology(elements: list[Monomial], p: int) -> dict[int, int]:
    """Reduced homology of the order complex of a poset of monomials ordered by divisibility.

    An empty poset yields the irrelevant complex ``{()}`` (``H~_{-1} = 1``).
    """
    return homology_of_chains(_interval_chains(elements), p)


def crosscut_homology(atoms: list[Monomial], top: Monomial, p: int) -> dict[int, int]:
    """Reduced homology of the atom crosscut complex of the open interval ``(1, top)``.

    Faces are the atom sets whose lcm is strictly below ``top``; homotopy
    equivalent to the order complex of the interval.
    """
    faces = []
    n = len(atoms)
    for size in range(n + 1):
        for s in combinations(range(n), size):
            if not s:
                faces.append(s)
                continue
            join = reduce(lcm_of, (atoms[a] for a in s))
            if join != top:
                faces.append(s)
    return homology_of_chains(faces, p)


def lcm_lattice_betti(
    ideal: MonomialIdeal,
    field: FieldConfig = DEFAULT_FIELD,
    max_chains: int = DEFAULT_MAX_CHAINS,
) -> MultigradedBettiTable:
    """Betti numbers from open intervals of the lcm lattice.

    ``beta_{i,b} = dim H~_{i-1}`` of the order complex of ``(bottom, b)``. The
    empty interval below a minimal generator gives the irrelevant complex,
    which yields ``beta_{0,b} = 1``.
    """
    lattice = lcm_lattice(ideal)
    lattice.sort(key=lambda m: m.degree)
    atoms_all = set(ideal.generators)
    entries = {}
    for idx, b in enumerate(lattice):
        below = [e for e in lattice[:idx] if e != b and all(x <= y for x, y in zip(e, b))]
        if _count_chains(below) <= max_chains:
            ranks = order_complex_homology(below, field.p)
        else:
            atoms = sorted((a for a in below if a in atoms_all), key=grlex_key)
            ranks = crosscut_homology(atoms, b, field.p)
        for q, v in ranks.items():
            entries[(q + 1, b)] = v
    return MultigradedBettiTable(entries, ideal.ring_dim, field.p)


def graded_betti(
    ideal: MonomialIdeal,
    field: FieldConfig = DEFAULT_FIELD,
    workers: int = 1,
    max_lattice: int = 0,
) -> GradedBettiTable:
    return multigraded_betti(ideal, field, workers, max_lattice).graded()


def regularity(table: GradedBettiTable) -> int:
    """``max (j - i)`` over the table, module convention."""
    if not table.entries:
        raise MalformedInputError("regularity of an empty Betti table")
    return max(j - i for i, j in table.entries)


@dataclass(frozen=True)
class HilbertNumerator:
    """Numerator ``K(t)`` of the Hilbert series of ``R/I``, as ``{degree: coefficient}``.

    ``independent`` is False when it was derived from a Betti table rather
    than by inclusion-exclusion, so it cannot serve as a conservation oracle.
    """

    coefficients: Mapping[int, int]
    independent: bool = True

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", {d: c for d, c in sorted(self.coefficients.items()) if c}
        )

    def __str__(self) -> str:
        return format_polynomial(self.coefficients)


def format_polynomial(coeffs: Mapping[int, int], var: str = "t") -> str:
    terms = []
    for d, c in sorted(coeffs.items()):
        if not c:
            continue
        mag = abs(c)
        body = str(mag) if d == 0 else (("" if mag == 1 else str(mag)) + (var if d == 1 else f"{var}^{d}"))
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def numerator_from_table(table: GradedBettiTable) -> dict[int, int]:
    """``1 - sum_{i,j} (-1)^i beta_{i,j} t^j`` from an ideal's graded Betti table."""
    out = {0: 1}
    for (i, j), v in table.entries.items():
        out[j] = out.get(j, 0) - (-1) ** i * v
    return {d: c for d, c in sorted(out.items()) if c}


HILBERT_CUTOFF = 25


def hilbert_numerator(
    ideal: MonomialIdeal,
    cutoff: int = HILBERT_CUTOFF,
    allow_fallback: bool = True,
    field: FieldConfig = DEFAULT_FIELD,
) -> HilbertNumerator:
    """``sum_S (-1)^{|S|} t^{deg lcm(S)}`` over all subsets ``S`` of the minimal generators.

    Terms are aggregated by their lcm while generators are added one at a
    time, which gives the same sum without listing the subsets. Above
    ``cutoff`` generators the numerator is read off the Betti table instead
    (flagged non-independent) or, with ``allow_fallback=False``, refused.
    """
    if ideal.ngens > cutoff:
        if not allow_fallback:
            raise CutoffExceededError(
                f"{ideal.ngens} generators exceed the inclusion-exclusion cutoff {cutoff}"
            )
        return HilbertNumerator(numerator_from_table(graded_betti(ideal, field)), independent=False)
    one = Monomial((0,) * ideal.ring_dim)
    by_lcm: dict[Monomial, int] = {one: 1}
    for g in ideal.generators:
        update = dict(by_lcm)
        for m, c in by_lcm.items():
            key = lcm_of(m, g)
            update[key] = update.get(key, 0) - c
        by_lcm = {m: c for m, c in update.items() if c}
    coeffs: dict[int, int] = {}
    for m, c in by_lcm.items():
        coeffs[m.degree] = coeffs.get(m.degree, 0) + c
    return HilbertNumerator(coeffs, independent=True)
