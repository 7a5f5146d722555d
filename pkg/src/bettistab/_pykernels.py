"""Pure-Python implementations of the hot kernels.

Same contract as the compiled ``_ckernels`` module; used when the extension
is not built or ``BETTISTAB_PURE_PYTHON`` is set. Simplicial complexes are
handled as sets of vertex bitmasks.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def lcm_closure(gens: Sequence[Sequence[int]], max_size: int = 0) -> list[tuple[int, ...]] | None:
    """Join-closure of ``gens`` under componentwise max (bottom element excluded).

    Returns ``None`` once more than ``max_size`` elements are found (0 = no limit).
    """
    gens = [tuple(g) for g in gens]
    seen = set(gens)
    frontier = list(seen)
    # Every join is a join of atoms, so joining new elements with generators suffices.
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                m = tuple(map(max, e, g))
                if m not in seen:
                    seen.add(m)
                    nxt.append(m)
        if max_size and len(seen) > max_size:
            return None
        frontier = nxt
    return list(seen)


def rank_mod_p(columns: Iterable[dict[int, int]], p: int) -> int:
    """Rank over GF(p) of a sparse matrix given column by column."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for col in columns:
        v = {r: c % p for r, c in col.items() if c % p}
        while v:
            row = max(v)
            pv = pivots.get(row)
            if pv is None:
                inv = pow(v[row], -1, p)
                pivots[row] = {r: c * inv % p for r, c in v.items()}
                rank += 1
                break
            c = v[row]
            for r, x in pv.items():
                nv = (v.get(r, 0) - c * x) % p
                if nv:
                    v[r] = nv
                else:
                    v.pop(r, None)
    return rank


def homology_from_faces(faces: Iterable[int], p: int) -> dict[int, int]:
    """Nonzero reduced homology ranks ``{q: dim H~_q}`` of a complex given by all its faces.

    An empty ``faces`` is the void complex; ``{0}`` is the irrelevant complex.
    """
    faces = set(faces)
    if not faces:
        return {}
    by_dim: dict[int, list[int]] = {}
    for f in faces:
        by_dim.setdefault(f.bit_count() - 1, []).append(f)
    top = max(by_dim)
    index = {}
    for q, fs in by_dim.items():
        fs.sort()
        for n, f in enumerate(fs):
            index[f] = n
    ranks = {-1: 0, 0: 1 if 0 in by_dim else 0}
    for q in range(1, top + 1):
        cols = []
        for f in by_dim.get(q, ()):
            col = {}
            sign = 1
            m = f
            while m:
                low = m & -m
                col[index[f ^ low]] = sign
                sign = -sign
                m ^= low
            cols.append(col)
        ranks[q] = rank_mod_p(cols, p)
    ranks[top + 1] = 0
    out = {}
    for q in range(-1, top + 1):
        h = len(by_dim.get(q, ())) - ranks[q] - ranks[q + 1]
        if h:
            out[q] = h
    return out


def koszul_facets(gens: Sequence[Sequence[int]], b: Sequence[int]) -> list[int]:
    """Facet masks ``{l : g_l < b_l}`` for every generator ``g`` dividing ``b``."""
    out = []
    for g in gens:
        if all(x <= y for x, y in zip(g, b)):
            mask = 0
            for l, (x, y) in enumerate(zip(g, b)):
                if x < y:
                    mask |= 1 << l
            out.append(mask)
    return out


def maximal_facets(facets: Iterable[int]) -> list[int]:
    fs = sorted(set(facets), key=lambda f: -f.bit_count())
    kept: list[int] = []
    for f in fs:
        if not any(f & k == f for k in kept):
            kept.append(f)
    return kept


def collapse_dominated(facets: list[int]) -> list[int]:
    """Delete dominated vertices until none remain.

    Vertex ``u`` is dominated by ``v != u`` when every facet containing ``u``
    also contains ``v``; then the link of ``u`` is a cone and removing ``u``
    preserves the homotopy type.
    """
    facets = maximal_facets(facets)
    changed = True
    while changed and len(facets) > 1:
        changed = False
        union = 0
        for f in facets:
            union |= f
        m = union
        while m:
            u = m & -m
            m ^= u
            common = union
            for f in facets:
                if f & u:
                    common &= f
            if common & ~u:
                facets = maximal_facets(f & ~u for f in facets)
                changed = True
                break
    return facets


def betti_from_facets(facets: list[int], p: int) -> dict[int, int]:
    """``{i: dim H~_{i-1}}`` for the complex generated by ``facets`` (nonempty list)."""
    facets = collapse_dominated(facets)
    if len(facets) == 1:
        return {0: 1} if facets[0] == 0 else {}
    faces = set()
    for f in facets:
        sub = f
        while True:
            faces.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & f
    return {q + 1: h for q, h in homology_from_faces(faces, p).items()}


def betti_batch(
    gens: Sequence[Sequence[int]], bs: Sequence[Sequence[int]], p: int
) -> list[dict[int, int]]:
    """Multigraded Betti numbers ``{i: beta_{i,b}}`` for each candidate ``b``."""
    gens = [tuple(g) for g in gens]
    return [betti_from_facets(koszul_facets(gens, b), p) for b in bs]
