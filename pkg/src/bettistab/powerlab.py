"""Experiments on powers of equigenerated monomial ideals.

Shapes of Betti tables in degree-normalized coordinates, an empirical
stabilization scan, a contiguity (unimodality) check per table position,
the Rees-algebra upper bound on Betti numbers of powers, and the
square-covering index for squarefree ideals.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Mapping, Sequence

from .betti import DEFAULT_FIELD, GradedBettiTable, graded_betti, regularity
from .complexes import FieldConfig
from .errors import (
    ContractError,
    MalformedInputError,
    PreconditionError,
    ResourceLimitError,
)
from .ideal import MonomialIdeal, equigenerated_degree, minimalize, power

log = logging.getLogger(__name__)

CERTAINTY = "empirical up to horizon"


@dataclass(frozen=True, eq=False)
class ShapeSet:
    """Support of a Betti table of ``I^d`` as pairs ``(i, j - r*d)``.

    Equality compares positions only, so shapes of different powers compare
    directly.
    """

    positions: frozenset
    r: int
    d: int

    def __post_init__(self):
        positions = frozenset((int(i), int(j)) for i, j in self.positions)
        for i, j in positions:
            if i < 0 or j < i:
                raise MalformedInputError(f"shape position {(i, j)} has normalized degree below i")
        object.__setattr__(self, "positions", positions)

    def __eq__(self, other):
        if not isinstance(other, ShapeSet):
            return NotImplemented
        return self.positions == other.positions

    def __hash__(self):
        return hash(self.positions)

    def __iter__(self):
        return iter(sorted(self.positions))

    def __len__(self):
        return len(self.positions)

    def __contains__(self, pos):
        return tuple(pos) in self.positions

    def rows(self) -> frozenset:
        """Positions as ``(i, row offset)``, row offset being ``j - r*d - i``."""
        return frozenset((i, j - i) for i, j in self.positions)

    def denormalize(self) -> set[tuple[int, int]]:
        return {(i, j + self.r * self.d) for i, j in self.positions}


def shape_of(table: GradedBettiTable, r: int, d: int) -> ShapeSet:
    return ShapeSet(frozenset((i, j - r * d) for i, j in table.entries), r, d)


@dataclass(frozen=True)
class LinearForm:
    """``slope * d + intercept`` for all ``d >= onset`` (within the horizon)."""

    slope: int
    intercept: int
    onset: int

    def __call__(self, d: int) -> int:
        return self.slope * d + self.intercept

    def __str__(self) -> str:
        if self.intercept == 0:
            return f"{self.slope}d"
        sign = "+" if self.intercept > 0 else "-"
        return f"{self.slope}d{sign}{abs(self.intercept)}"


def eventual_linear_fit(values: Mapping[int, int], min_points: int = 3) -> LinearForm | None:
    """Longest trailing run of consecutive ``d`` with constant first differences."""
    ds = sorted(values)
    if len(ds) < min_points or ds != list(range(ds[0], ds[-1] + 1)):
        return None
    slope = values[ds[-1]] - values[ds[-2]]
    start = len(ds) - 2
    while start > 0 and values[ds[start]] - values[ds[start - 1]] == slope:
        start -= 1
    if len(ds) - start < min_points:
        return None
    onset = ds[start]
    return LinearForm(slope, values[onset] - slope * onset, onset)


@dataclass(frozen=True)
class UnimodalityFinding:
    """Powers at which one normalized position ``(i, j')`` is in the support.

    ``interval`` is ``(D1, D2)`` when those powers are contiguous; otherwise
    ``gap`` is the first missing power between two occurrences.
    """

    position: tuple[int, int]
    powers: tuple[int, ...]
    horizon: int
    interval: tuple[int, int] | None = None
    gap: int | None = None

    @property
    def violation(self) -> bool:
        return self.gap is not None

    @property
    def reaches_horizon(self) -> bool:
        return bool(self.powers) and self.powers[-1] == self.horizon


def unimodality_from_shapes(shapes: Mapping[int, ShapeSet], horizon: int | None = None) -> list[UnimodalityFinding]:
    if horizon is None:
        horizon = max(shapes, default=0)
    positions = sorted(set().union(*(s.positions for s in shapes.values())) if shapes else set())
    findings = []
    for pos in positions:
        powers = tuple(d for d in sorted(shapes) if pos in shapes[d].positions)
        gap = next((d for d in range(powers[0], powers[-1] + 1) if d not in powers), None)
        if gap is None:
            findings.append(UnimodalityFinding(pos, powers, horizon, interval=(powers[0], powers[-1])))
        else:
            findings.append(UnimodalityFinding(pos, powers, horizon, gap=gap))
    return findings


@dataclass
class StabilizationReport:
    ideal_id: str
    r: int
    horizon: int
    characteristic: int
    tables: dict[int, GradedBettiTable] = field(default_factory=dict)
    shapes: dict[int, ShapeSet] = field(default_factory=dict)
    empirical_stab: int | None = None
    regularity: dict[int, int] = field(default_factory=dict)
    linear_form: LinearForm | None = None
    unimodality: list[UnimodalityFinding] = field(default_factory=list)
    shape_changes: list[int] = field(default_factory=list)
    partial: bool = False
    partial_reason: str | None = None
    certainty: str = CERTAINTY

    @property
    def completed(self) -> int:
        """Largest power actually computed."""
        return max(self.tables, default=0)

    @property
    def stabilized_shape(self) -> ShapeSet | None:
        return self.shapes.get(self.empirical_stab) if self.empirical_stab else None

    def normalized_regularity(self) -> dict[int, int]:
        return {d: v - self.r * d for d, v in self.regularity.items()}


def empirical_stabilization_index(shapes: Mapping[int, ShapeSet]) -> int | None:
    """Smallest ``D`` with ``shape(d) == shape(D)`` for every computed ``d >= D``."""
    ds = sorted(shapes)
    if not ds:
        return None
    stab = ds[-1]
    for d in reversed(ds[:-1]):
        if shapes[d] != shapes[ds[-1]] or d + 1 != stab:
            break
        stab = d
    return stab


def shape_changes(shapes: Mapping[int, ShapeSet]) -> list[int]:
    """Powers ``d`` whose shape differs from that of ``d - 1``."""
    return [d for d in sorted(shapes) if d - 1 in shapes and shapes[d] != shapes[d - 1]]


def stabilization_scan(
    ideal: MonomialIdeal,
    d_max: int,
    field: FieldConfig = DEFAULT_FIELD,
    workers: int = 1,
    time_budget: float | None = None,
    max_lattice: int = 0,
    ideal_id: str | None = None,
) -> StabilizationReport:
    """Betti tables and shapes of ``I^d`` for ``d = 1..d_max``.

    When a budget runs out the report covers the powers finished so far and
    is marked partial.
    """
    if d_max < 2:
        raise PreconditionError("stabilization scan needs a horizon of at least 2")
    r = equigenerated_degree(ideal)
    report = StabilizationReport(ideal_id or str(ideal), r, d_max, field.p)
    start = time.monotonic()
    current = None
    for d in range(1, d_max + 1):
        if time_budget is not None and time.monotonic() - start > time_budget:
            report.partial, report.partial_reason = True, f"time budget exhausted before d={d}"
            break
        try:
            current = ideal if d == 1 else power(ideal, d)
            table = graded_betti(current, field, workers=workers, max_lattice=max_lattice)
        except (ResourceLimitError, MemoryError) as exc:
            report.partial, report.partial_reason = True, f"d={d}: {exc or type(exc).__name__}"
            break
        report.tables[d] = table
        report.shapes[d] = shape_of(table, r, d)
        report.regularity[d] = regularity(table)
        log.info("scan %s: d=%d done (%d entries)", report.ideal_id, d, len(table))
    report.empirical_stab = empirical_stabilization_index(report.shapes)
    report.shape_changes = shape_changes(report.shapes)
    report.linear_form = eventual_linear_fit(report.regularity)
    report.unimodality = unimodality_from_shapes(report.shapes, report.completed)
    return report


def unimodality_check(report: StabilizationReport) -> list[UnimodalityFinding]:
    return unimodality_from_shapes(report.shapes, report.completed)


@dataclass(frozen=True)
class ReesBettiData:
    """Bigraded Betti numbers ``beta_{i,(j,m)}`` of the Rees algebra, keyed ``(i, j, m)``.

    ``j`` is the x-degree (normalized: it pairs with ideal degree ``j + r*d``)
    and ``m`` the w-degree; ``k + 1`` is the number of ideal generators.
    """

    k: int
    r: int
    betti: Mapping[tuple[int, int, int], int]

    def __post_init__(self):
        if self.k < 0 or self.r < 1:
            raise MalformedInputError("need k >= 0 and r >= 1")
        cleaned = {}
        for key, v in self.betti.items():
            i, j, m = (int(x) for x in key)
            if i < 0 or m < 0 or j < 0:
                raise MalformedInputError(f"negative index in Rees key {key}")
            if v <= 0:
                raise MalformedInputError(f"Rees Betti number at {key} must be positive")
            cleaned[(i, j, m)] = int(v)
        if cleaned.get((0, 0, 0), 1) != 1:
            raise MalformedInputError("beta_{0,(0,0)} of the Rees algebra must be 1")
        object.__setattr__(self, "betti", dict(sorted(cleaned.items())))


@dataclass(frozen=True)
class BoundEntry:
    i: int
    j: int
    actual: int
    bound: int

    @property
    def slack(self) -> int:
        return self.bound - self.actual


@dataclass(frozen=True)
class BoundCheckResult:
    d: int
    entries: tuple[BoundEntry, ...]

    @property
    def violations(self) -> list[BoundEntry]:
        return [e for e in self.entries if e.slack < 0]

    @property
    def ok(self) -> bool:
        return not self.violations

    def at(self, i: int, j: int) -> BoundEntry | None:
        return next((e for e in self.entries if (e.i, e.j) == (i, j)), None)


def rees_coefficient(d: int, k: int, m: int, form: str = "d-m") -> int:
    """Number of degree ``d - m`` monomials in ``k + 1`` variables."""
    if m > d:
        return 0
    if form == "d-m":
        return comb(d + k - m, d - m)
    if form == "k":
        return comb(d + k - m, k)
    raise ValueError(f"unknown binomial form {form!r}")


def rees_bound(data: ReesBettiData, i: int, j: int, d: int, form: str = "d-m") -> int:
    return sum(
        rees_coefficient(d, data.k, m, form) * v
        for (ii, jj, m), v in data.betti.items()
        if ii == i and jj == j and m <= d
    )


def rees_bound_check(
    ideal: MonomialIdeal,
    d: int,
    data: ReesBettiData,
    field: FieldConfig = DEFAULT_FIELD,
    table: GradedBettiTable | None = None,
) -> BoundCheckResult:
    """Compare ``beta_{i,j+rd}(I^d)`` against the bound from Rees Betti numbers.

    Violations are returned, not raised: they indicate bad ingested data.
    """
    r = equigenerated_degree(ideal)
    if data.r != r:
        raise ContractError(f"Rees data has r={data.r} but the ideal is generated in degree {r}")
    if data.k + 1 != ideal.ngens:
        raise ContractError(f"Rees data has k+1={data.k + 1} but the ideal has {ideal.ngens} generators")
    if d < 1:
        raise PreconditionError("power must be at least 1")
    if table is None:
        table = graded_betti(power(ideal, d), field)
    actual = {(i, j - r * d): v for (i, j), v in table.entries.items()}
    keys = set(actual) | {(i, j) for (i, j, m) in data.betti if m <= d}
    entries = tuple(
        BoundEntry(i, j, actual.get((i, j), 0), rees_bound(data, i, j, d)) for i, j in sorted(keys)
    )
    return BoundCheckResult(d, entries)


def _check_square_cover_hypotheses(ideal: MonomialIdeal) -> None:
    if not ideal.is_squarefree():
        raise PreconditionError("square-cover index needs a squarefree ideal")
    covered = set().union(*(g.support for g in ideal.generators))
    if len(covered) != ideal.ring_dim:
        missing = [ideal.var_names[l] for l in range(ideal.ring_dim) if l not in covered]
        raise PreconditionError(f"generators do not involve every variable (missing {', '.join(missing)})")


def square_cover_index(ideal: MonomialIdeal, n_max: int | None = None) -> int | None:
    """Least ``n`` such that some product of ``n`` generators has every exponent ``>= 2``.

    Branch and bound: always extend the cover at the most deficient variable
    with the fewest candidate generators, pruning with a counting bound.
    Returns ``None`` when no ``n <= n_max`` (default ``2N``) exists.
    """
    _check_square_cover_hypotheses(ideal)
    n_vars = ideal.ring_dim
    if n_max is None:
        n_max = 2 * n_vars
    supports = [sorted(g.support) for g in ideal.generators]
    containing = [[g for g, s in enumerate(supports) if l in s] for l in range(n_vars)]
    widest = max(len(s) for s in supports)
    best = n_max + 1
    seen: set[tuple[int, ...]] = set()
    counts = [0] * len(supports)
    need = [2] * n_vars

    def lower_bound() -> int:
        total = sum(need)
        return max(max(need), -(-total // widest))

    def search(used: int) -> None:
        nonlocal best
        if used + lower_bound() >= best:
            return
        key = tuple(counts)
        if key in seen:
            return
        seen.add(key)
        deficient = [l for l in range(n_vars) if need[l] > 0]
        if not deficient:
            best = used
            return
        l = min(deficient, key=lambda v: (-need[v], len(containing[v]), v))
        options = sorted(containing[l], key=lambda g: -sum(need[v] > 0 for v in supports[g]))
        for g in options:
            counts[g] += 1
            touched = [v for v in supports[g] if need[v] > 0]
            for v in touched:
                need[v] -= 1
            search(used + 1)
            for v in touched:
                need[v] += 1
            counts[g] -= 1

    search(0)
    return best if best <= n_max else None


def square_cover_index_exhaustive(ideal: MonomialIdeal, n_max: int | None = None) -> int | None:
    """Reference answer by enumerating all multisets of ``n`` generators, ``n = 1, 2, ...``."""
    _check_square_cover_hypotheses(ideal)
    if n_max is None:
        n_max = 2 * ideal.ring_dim
    gens = ideal.generators
    for n in range(1, n_max + 1):
        for combo in combinations_with_replacement(gens, n):
            if all(e >= 2 for e in map(sum, zip(*combo))):
                return n
    return None


VERDICTS = ("consistent-so-far", "inconsistent-at-horizon", "inconclusive")


@dataclass(frozen=True)
class ConjectureComparison:
    square_cover_index: int | None
    empirical_stab: int | None
    horizon: int
    verdict: str
    shape_changes: tuple[int, ...] = ()
    certainty: str = CERTAINTY


def compare_verdict(cover: int | None, report: StabilizationReport) -> str:
    """Three-valued verdict; a finite horizon can refute the formula but never confirm it."""
    if cover is None or report.empirical_stab is None:
        return "inconclusive"
    if any(d > cover for d in report.shape_changes):
        return "inconsistent-at-horizon"
    if report.empirical_stab == cover:
        return "consistent-so-far"
    return "inconclusive"


def conjecture_stab_compare(
    ideal: MonomialIdeal,
    d_max: int,
    field: FieldConfig = DEFAULT_FIELD,
    n_max: int | None = None,
    report: StabilizationReport | None = None,
) -> ConjectureComparison:
    cover = square_cover_index(ideal, n_max)
    if cover is not None and d_max < cover:
        log.warning("horizon %d is below the square-cover index %d", d_max, cover)
    if report is None:
        report = stabilization_scan(ideal, d_max, field)
    return ConjectureComparison(
        cover,
        report.empirical_stab,
        report.completed,
        compare_verdict(cover, report),
        tuple(report.shape_changes),
    )


def random_edge_ideal(n_vertices: int, edge_count: int, seed: int) -> MonomialIdeal:
    """Edge ideal of a uniformly sampled graph with ``edge_count`` edges; same seed, same ideal."""
    pairs = list(combinations(range(n_vertices), 2))
    if not 1 <= edge_count <= len(pairs):
        raise PreconditionError(f"cannot choose {edge_count} edges on {n_vertices} vertices")
    edges = random.Random(seed).sample(pairs, edge_count)
    return minimalize(
        [[int(v in e) for v in range(n_vertices)] for e in edges], n_vertices
    )


def random_monomial_ideal(
    seed: int, max_vars: int = 7, max_gens: int = 10, max_degree: int = 4
) -> MonomialIdeal:
    """Seeded random monomial ideal with at most the given size parameters.

    Monomials are drawn until ``n_gens`` minimal generators survive or the
    draw budget is spent. Linear forms are drawn rarely since each one
    swallows every multiple of its variable.
    """
    rng = random.Random(seed)
    n = rng.randint(min(3, max_vars), max_vars)
    target = rng.randint(1, max_gens)
    gens: list[list[int]] = []
    for _ in range(40 * max_gens):
        if len(gens) >= target:
            break
        low = 1 if rng.random() < 0.1 or max_degree < 2 else 2
        e = [0] * n
        for _ in range(rng.randint(low, max_degree)):
            e[rng.randrange(n)] += 1
        gens = [list(g) for g in minimalize(gens + [e], n).generators]
    return minimalize(gens, n)
