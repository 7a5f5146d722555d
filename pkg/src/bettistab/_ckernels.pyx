# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels: lcm closure, upper Koszul facets and GF(p) homology ranks.

Drop-in replacement for ``_pykernels``; results are identical.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memset
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

from . import _pykernels

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


# Dense face tables are indexed by vertex bitmasks of the collapsed complex.
cdef enum:
    MAX_CORE_VERTICES = 24


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef int _bits_needed(long maxexp):
    cdef int bits = 1
    while (1 << bits) <= maxexp:
        bits += 1
    return bits


cdef inline uint64_t _swar_max(uint64_t a, uint64_t c, uint64_t guards, int bits) nogil:
    # Fields are ``bits`` wide with a zero guard bit above each; the guard of
    # (a | guards) - c survives exactly where a >= c.
    cdef uint64_t ge = ((a | guards) - c) & guards
    cdef uint64_t sel = ge - (ge >> bits)
    return (a & sel) | (c & ~sel & ~guards)


def lcm_closure(gens, size_t max_size=0):
    """Join-closure of ``gens`` under componentwise max (bottom element excluded).

    Returns ``None`` once more than ``max_size`` elements are found (0 = no limit).
    """
    gens = [tuple(gen) for gen in gens]
    if not gens:
        return []
    cdef int n = len(gens[0])
    cdef long maxexp = max(max(gen) for gen in gens)
    cdef int bits = _bits_needed(maxexp)
    cdef int width = bits + 1
    if n * width > 64:
        return _pykernels.lcm_closure(gens, max_size)
    cdef int ng = len(gens)
    cdef uint64_t fmask = (<uint64_t>1 << bits) - 1
    cdef uint64_t guards = 0
    cdef vector[uint64_t] packed_gens
    cdef uint64_t key, e, out
    cdef int i, l, idx
    for l in range(n):
        guards |= (<uint64_t>1) << (l * width + bits)
    for gtuple in gens:
        key = 0
        for l in range(n):
            key |= (<uint64_t>gtuple[l]) << (l * width)
        packed_gens.push_back(key)
    cdef unordered_set[uint64_t] seen
    cdef vector[uint64_t] frontier, nxt
    for i in range(ng):
        if seen.insert(packed_gens[i]).second:
            frontier.push_back(packed_gens[i])
    with nogil:
        while frontier.size() > 0:
            nxt.clear()
            for idx in range(<int>frontier.size()):
                e = frontier[idx]
                for i in range(ng):
                    out = _swar_max(e, packed_gens[i], guards, bits)
                    if out != e and seen.insert(out).second:
                        nxt.push_back(out)
            if max_size and seen.size() > max_size:
                break
            frontier.swap(nxt)
    if max_size and seen.size() > max_size:
        return None
    result = []
    for key in seen:
        result.append(tuple(int((key >> (l * width)) & fmask) for l in range(n)))
    return result


cdef int64_t _inv_mod(int64_t a, int64_t p) nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef int _rank_dense(int64_t *m, int rows, int cols, int64_t p) nogil:
    """Rank of a row-major ``rows x cols`` matrix mod p; destroys ``m``."""
    cdef int rank = 0, col, r, piv, j
    cdef int64_t inv, f, tmp
    for col in range(cols):
        if rank == rows:
            break
        piv = -1
        for r in range(rank, rows):
            if m[r * cols + col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(col, cols):
                tmp = m[piv * cols + j]
                m[piv * cols + j] = m[rank * cols + j]
                m[rank * cols + j] = tmp
        inv = _inv_mod(m[rank * cols + col], p)
        for j in range(col, cols):
            m[rank * cols + j] = (m[rank * cols + j] * inv) % p
        for r in range(rank + 1, rows):
            f = m[r * cols + col]
            if f != 0:
                for j in range(col, cols):
                    m[r * cols + j] = (m[r * cols + j] - f * m[rank * cols + j]) % p
                    if m[r * cols + j] < 0:
                        m[r * cols + j] += p
        rank += 1
    return rank


cdef int _homology_dense(unsigned char *present, int nv, int64_t p, int64_t *htilde) nogil:
    """Reduced homology ranks of the complex whose faces are flagged in ``present``.

    ``present`` has ``2**nv`` entries; ``htilde[q + 1]`` receives dim H~_q for
    ``q = -1 .. nv - 1``. Returns -1 on allocation failure.
    """
    cdef uint64_t size = (<uint64_t>1) << nv
    cdef uint64_t f, sub, low
    cdef int q, d, top = -1, i, rows, cols, sign
    cdef int counts[MAX_CORE_VERTICES + 2]
    cdef int ranks[MAX_CORE_VERTICES + 3]
    cdef int *index = <int *>malloc(size * sizeof(int))
    cdef int64_t *mat
    if index == NULL:
        return -1
    memset(counts, 0, sizeof(counts))
    memset(ranks, 0, sizeof(ranks))
    for i in range(nv + 1):
        htilde[i] = 0
    for f in range(size):
        if present[f]:
            d = _popcount(f)
            index[f] = counts[d]
            counts[d] += 1
            if d - 1 > top:
                top = d - 1
    if counts[0] == 0:
        free(index)
        return 0
    # ranks[q + 1] = rank of the boundary C_q -> C_{q-1}
    ranks[1] = 1 if counts[1] > 0 else 0
    for q in range(1, top + 1):
        rows = counts[q]
        cols = counts[q + 1]
        if rows == 0 or cols == 0:
            continue
        mat = <int64_t *>calloc(<size_t>rows * cols, sizeof(int64_t))
        if mat == NULL:
            free(index)
            return -1
        for f in range(size):
            if present[f] and _popcount(f) == q + 1:
                sign = 1
                sub = f
                while sub:
                    low = sub & (~sub + 1)
                    mat[<size_t>index[f ^ low] * cols + index[f]] = 1 if sign > 0 else p - 1
                    sign = -sign
                    sub ^= low
        ranks[q + 1] = _rank_dense(mat, rows, cols, p)
        free(mat)
    for q in range(-1, top + 1):
        htilde[q + 1] = counts[q + 1] - ranks[q + 1] - ranks[q + 2]
    free(index)
    return 0


cdef int _maximalize(uint64_t *facets, int nf) nogil:
    """Drop duplicate and non-maximal facets in place; returns the new count."""
    cdef int i, j, k = 0
    cdef bint keep
    for i in range(nf):
        keep = True
        for j in range(nf):
            if i == j:
                continue
            if (facets[i] & facets[j]) == facets[i]:
                if facets[i] != facets[j] or j < i:
                    keep = False
                    break
        if keep:
            facets[k] = facets[i]
            k += 1
    return k


cdef int _collapse(uint64_t *facets, int nf) nogil:
    cdef bint changed = True
    cdef uint64_t union, m, u, common
    cdef int i
    nf = _maximalize(facets, nf)
    while changed and nf > 1:
        changed = False
        union = 0
        for i in range(nf):
            union |= facets[i]
        m = union
        while m:
            u = m & (~m + 1)
            m ^= u
            common = union
            for i in range(nf):
                if facets[i] & u:
                    common &= facets[i]
            if common & ~u:
                for i in range(nf):
                    facets[i] &= ~u
                nf = _maximalize(facets, nf)
                changed = True
                break
    return nf


cdef int _betti_from_facets(uint64_t *facets, int nf, int64_t p, int64_t *beta, int maxlen) nogil:
    """Fill ``beta[i] = dim H~_{i-1}`` for ``i < maxlen``; returns -1 on failure, -2 if too large."""
    cdef int i, nv, pos
    cdef uint64_t union, f, sub, bit
    cdef uint64_t[64] remap
    cdef unsigned char *present
    cdef int64_t htilde[MAX_CORE_VERTICES + 2]
    for i in range(maxlen):
        beta[i] = 0
    if nf == 0:
        return 0
    nf = _collapse(facets, nf)
    if nf == 1:
        if facets[0] == 0:
            beta[0] = 1
        return 0
    union = 0
    for i in range(nf):
        union |= facets[i]
    nv = _popcount(union)
    if nv > MAX_CORE_VERTICES:
        return -2
    # compress vertex labels to 0..nv-1
    pos = 0
    for i in range(64):
        if union & ((<uint64_t>1) << i):
            remap[i] = (<uint64_t>1) << pos
            pos += 1
    for i in range(nf):
        f = 0
        sub = facets[i]
        while sub:
            bit = __builtin_ctzll(sub)
            f |= remap[bit]
            sub &= sub - 1
        facets[i] = f
    present = <unsigned char *>calloc((<size_t>1) << nv, 1)
    if present == NULL:
        return -1
    for i in range(nf):
        f = facets[i]
        sub = f
        while True:
            present[sub] = 1
            if sub == 0:
                break
            sub = (sub - 1) & f
    if _homology_dense(present, nv, p, htilde) < 0:
        free(present)
        return -1
    free(present)
    for i in range(nv + 1):
        if i < maxlen:
            beta[i] = htilde[i]
    return 0


def homology_from_faces(faces, long p):
    """Nonzero reduced homology ranks ``{q: dim H~_q}`` of a complex given by all its faces."""
    faces = set(faces)
    if not faces:
        return {}
    union_obj = 0
    for f in faces:
        union_obj |= f
    if union_obj >= 1 << 63 or union_obj.bit_count() > MAX_CORE_VERTICES:
        return _pykernels.homology_from_faces(faces, p)
    cdef uint64_t union = union_obj
    cdef int nv = _popcount(union)
    cdef int64_t htilde[MAX_CORE_VERTICES + 2]
    cdef unsigned char *present
    # faces use raw vertex labels; compress them first
    labels = [i for i in range(64) if union >> i & 1]
    remap = {v: n for n, v in enumerate(labels)}
    present = <unsigned char *>calloc((<size_t>1) << nv, 1)
    if present == NULL:
        raise MemoryError()
    try:
        for f in faces:
            g = 0
            for v in labels:
                if f >> v & 1:
                    g |= 1 << remap[v]
            present[<size_t>g] = 1
        if _homology_dense(present, nv, p, htilde) < 0:
            raise MemoryError()
    finally:
        free(present)
    return {q - 1: int(htilde[q]) for q in range(nv + 1) if htilde[q]}


def betti_batch(gens, bs, long p):
    """Multigraded Betti numbers ``{i: beta_{i,b}}`` for each candidate ``b``."""
    gens = [tuple(g) for g in gens]
    bs = [tuple(b) for b in bs]
    cdef int ng = len(gens)
    cdef int nb = len(bs)
    if nb == 0:
        return []
    cdef int n = len(bs[0])
    if n > 63:
        return _pykernels.betti_batch(gens, bs, p)
    cdef int64_t *G = <int64_t *>malloc(max(ng, 1) * n * sizeof(int64_t))
    cdef int64_t *B = <int64_t *>malloc(nb * n * sizeof(int64_t))
    cdef uint64_t *facets = <uint64_t *>malloc(max(ng, 1) * sizeof(uint64_t))
    cdef int64_t *beta = <int64_t *>malloc(nb * (n + 1) * sizeof(int64_t))
    cdef int *status = <int *>malloc(nb * sizeof(int))
    cdef int i, j, l, nf
    cdef bint div
    cdef uint64_t mask
    if G == NULL or B == NULL or facets == NULL or beta == NULL or status == NULL:
        free(G); free(B); free(facets); free(beta); free(status)
        raise MemoryError()
    try:
        for i in range(ng):
            for l in range(n):
                G[i * n + l] = gens[i][l]
        for j in range(nb):
            for l in range(n):
                B[j * n + l] = bs[j][l]
        with nogil:
            for j in range(nb):
                nf = 0
                for i in range(ng):
                    div = True
                    mask = 0
                    for l in range(n):
                        if G[i * n + l] > B[j * n + l]:
                            div = False
                            break
                        if G[i * n + l] < B[j * n + l]:
                            mask |= (<uint64_t>1) << l
                    if div:
                        facets[nf] = mask
                        nf += 1
                status[j] = _betti_from_facets(facets, nf, p, beta + j * (n + 1), n + 1)
        out = []
        for j in range(nb):
            if status[j] == -1:
                raise MemoryError()
            if status[j] == -2:
                out.append(_pykernels.betti_batch(gens, [bs[j]], p)[0])
                continue
            out.append({i: int(beta[j * (n + 1) + i]) for i in range(n + 1) if beta[j * (n + 1) + i]})
        return out
    finally:
        free(G); free(B); free(facets); free(beta); free(status)
