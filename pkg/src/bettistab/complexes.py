"""Finite simplicial complexes and their reduced homology over a prime field."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from . import _kernels
from ._pykernels import rank_mod_p
from .errors import MalformedInputError

DEFAULT_CHARACTERISTIC = 32003


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldConfig:
    """The coefficient field GF(p)."""

    characteristic: int = DEFAULT_CHARACTERISTIC

    def __post_init__(self):
        if not is_prime(self.characteristic):
            raise ValueError(f"characteristic must be prime, got {self.characteristic}")

    @property
    def p(self) -> int:
        return self.characteristic


@dataclass(frozen=True)
class SimplicialComplex:
    """Subset-closed family of faces on vertices ``0 .. vertex_count - 1``.

    ``faces`` is empty for the void complex and ``{frozenset()}`` for the
    irrelevant complex.
    """

    vertex_count: int
    faces: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        faces = frozenset(frozenset(f) for f in self.faces)
        for f in faces:
            if any(v < 0 or v >= self.vertex_count for v in f):
                raise MalformedInputError(f"face {sorted(f)} uses a vertex outside 0..{self.vertex_count - 1}")
            for v in f:
                if f - {v} not in faces:
                    raise MalformedInputError(f"not subset-closed: {sorted(f)} present without {sorted(f - {v})}")
        object.__setattr__(self, "faces", faces)

    @classmethod
    def from_facets(cls, vertex_count: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        faces = set()
        for facet in facets:
            facet = sorted(facet)
            for size in range(len(facet) + 1):
                faces.update(frozenset(c) for c in combinations(facet, size))
        return cls(vertex_count, frozenset(faces))

    @classmethod
    def void(cls, vertex_count: int = 0) -> "SimplicialComplex":
        return cls(vertex_count, frozenset())

    @classmethod
    def irrelevant(cls, vertex_count: int = 0) -> "SimplicialComplex":
        return cls(vertex_count, frozenset([frozenset()]))

    @property
    def is_void(self) -> bool:
        return not self.faces

    @property
    def is_irrelevant(self) -> bool:
        return self.faces == {frozenset()}

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.faces), default=0) - 1

    def facets(self) -> list[frozenset]:
        return [f for f in self.faces if not any(f < g for g in self.faces)]

    def masks(self) -> list[int]:
        return [sum(1 << v for v in f) for f in self.faces]


def homology_of_chains(faces: Iterable[tuple], p: int) -> dict[int, int]:
    """Reduced homology ranks of a complex whose faces are given as sorted tuples.

    Used where vertex labels are arbitrary hashables (e.g. order complexes).
    """
    by_dim: dict[int, list[tuple]] = {}
    for f in set(faces):
        by_dim.setdefault(len(f) - 1, []).append(f)
    if not by_dim:
        return {}
    top = max(by_dim)
    index = {}
    for fs in by_dim.values():
        fs.sort()
        index.update((f, n) for n, f in enumerate(fs))
    ranks = {-1: 0, 0: 1 if by_dim.get(0) else 0, top + 1: 0}
    for q in range(1, top + 1):
        cols = []
        for f in by_dim.get(q, ()):
            cols.append({index[f[:t] + f[t + 1:]]: (-1) ** t for t in range(len(f))})
        ranks[q] = rank_mod_p(cols, p)
    out = {}
    for q in range(-1, top + 1):
        h = len(by_dim.get(q, ())) - ranks[q] - ranks[q + 1]
        if h:
            out[q] = h
    return out


def reduced_homology_ranks(
    cx: SimplicialComplex, field: FieldConfig = FieldConfig()
) -> dict[int, int]:
    """Nonzero ranks of reduced homology, keyed by degree ``q >= -1``.

    Computed from exact boundary ranks: ``dim H~_q = dim ker d_q - rank d_{q+1}``.
    """
    if cx.is_void:
        return {}
    if cx.vertex_count <= 24:
        return _kernels.homology_from_faces(cx.masks(), field.p)
    return homology_of_chains((tuple(sorted(f)) for f in cx.faces), field.p)
