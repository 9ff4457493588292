"""Vectorized inner loops over packed two-colorings.

A coloring of balls 1..n is packed into an unsigned 32-bit code; bit i-1
set means ball i is red. Enumeration-heavy operations (answer
classification, consistency filtering, monochromatic-edge search, greedy
query scans) run over arrays of such codes.

Every kernel has a numba-compiled version and a pure-numpy fallback.
Set MAJLAB_BACKEND=numpy or MAJLAB_BACKEND=numba to force one side;
by default numba is used when it imports cleanly.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_BACKEND = os.environ.get("MAJLAB_BACKEND", "").strip().lower()

if _ENV_BACKEND == "numpy":
    _nb = None
else:
    try:
        import numba as _nb
    except ImportError:  # pragma: no cover - numba is a declared dependency
        if _ENV_BACKEND == "numba":
            raise
        _nb = None

USE_NUMBA = _nb is not None


def backend() -> str:
    """Name of the active kernel backend."""
    return "numba" if USE_NUMBA else "numpy"


def all_colorings(n: int) -> np.ndarray:
    """All 2^n packed colorings of n balls, ascending."""
    if n < 0 or n > 31:
        raise ValueError(f"n={n} outside packable range")
    return np.arange(1 << n, dtype=np.uint32)


def query_mask(balls) -> np.uint32:
    """Pack 1-based ball indices into a bit mask."""
    m = 0
    for b in balls:
        m |= 1 << (b - 1)
    return np.uint32(m)


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _popcount_np(codes: np.ndarray) -> np.ndarray:
    return np.bitwise_count(codes).astype(np.int64)


def _gm_codes_np(codes: np.ndarray, qmask: np.uint32, qsize: int) -> np.ndarray:
    inter = np.bitwise_count(codes & qmask)
    return ((inter == 0) | (inter == qsize)).astype(np.uint8)


def _cm_codes_np(codes: np.ndarray, qmask: np.uint32, qsize: int) -> np.ndarray:
    inter = np.bitwise_count(codes & qmask).astype(np.int64)
    return np.minimum(inter, qsize - inter).astype(np.uint8)


def _proper_coloring_np(edge_masks: np.ndarray, edge_sizes: np.ndarray,
                        nverts: int) -> int:
    total = 1 << nverts
    chunk = min(total, 1 << 16)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.uint32)
        ok = np.ones(len(codes), dtype=bool)
        for m, s in zip(edge_masks, edge_sizes):
            inter = np.bitwise_count(codes & np.uint32(m))
            ok &= (inter != 0) & (inter != s)
            if not ok.any():
                break
        hit = np.flatnonzero(ok)
        if hit.size:
            return int(codes[hit[0]])
    return -1


def _worst_split_gm_np(codes: np.ndarray, qmasks: np.ndarray,
                       qsizes: np.ndarray) -> np.ndarray:
    out = np.empty(len(qmasks), dtype=np.int64)
    for i, (m, s) in enumerate(zip(qmasks, qsizes)):
        inter = np.bitwise_count(codes & np.uint32(m))
        same = int(np.count_nonzero((inter == 0) | (inter == s)))
        out[i] = max(same, len(codes) - same)
    return out


def _worst_split_cm_np(codes: np.ndarray, qmasks: np.ndarray,
                       qsizes: np.ndarray) -> np.ndarray:
    out = np.empty(len(qmasks), dtype=np.int64)
    for i, (m, s) in enumerate(zip(qmasks, qsizes)):
        inter = np.bitwise_count(codes & np.uint32(m)).astype(np.int64)
        ans = np.minimum(inter, int(s) - inter)
        counts = np.bincount(ans, minlength=int(s) // 2 + 1)
        out[i] = int(counts.max())
    return out


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _pop32(x):
        # add-shift popcount; numba promotes uint32 arithmetic to 64 bits,
        # so the classic multiply variant would leak high bytes
        v = np.int64(x)
        v = v - ((v >> 1) & 0x55555555)
        v = (v & 0x33333333) + ((v >> 2) & 0x33333333)
        v = (v + (v >> 4)) & 0x0F0F0F0F
        v = v + (v >> 8)
        v = v + (v >> 16)
        return v & 0x3F

    @njit(cache=True)
    def _popcount_nb(codes):
        out = np.empty(codes.size, dtype=np.int64)
        for i in range(codes.size):
            out[i] = _pop32(codes[i])
        return out

    @njit(cache=True)
    def _gm_codes_nb(codes, qmask, qsize):
        out = np.empty(codes.size, dtype=np.uint8)
        for i in range(codes.size):
            p = _pop32(codes[i] & qmask)
            out[i] = 1 if (p == 0 or p == qsize) else 0
        return out

    @njit(cache=True)
    def _cm_codes_nb(codes, qmask, qsize):
        out = np.empty(codes.size, dtype=np.uint8)
        for i in range(codes.size):
            p = _pop32(codes[i] & qmask)
            q = qsize - p
            out[i] = p if p < q else q
        return out

    @njit(cache=True)
    def _proper_coloring_nb(edge_masks, edge_sizes, nverts):
        total = np.int64(1) << nverts
        ne = edge_masks.size
        for c in range(total):
            code = np.uint32(c)
            good = True
            for e in range(ne):
                p = _pop32(code & np.uint32(edge_masks[e]))
                if p == 0 or p == edge_sizes[e]:
                    good = False
                    break
            if good:
                return np.int64(c)
        return np.int64(-1)

    @njit(cache=True)
    def _worst_split_gm_nb(codes, qmasks, qsizes):
        out = np.empty(qmasks.size, dtype=np.int64)
        for i in range(qmasks.size):
            m = qmasks[i]
            s = qsizes[i]
            same = 0
            for j in range(codes.size):
                p = _pop32(codes[j] & m)
                if p == 0 or p == s:
                    same += 1
            mixed = codes.size - same
            out[i] = same if same > mixed else mixed
        return out

    @njit(cache=True)
    def _worst_split_cm_nb(codes, qmasks, qsizes):
        out = np.empty(qmasks.size, dtype=np.int64)
        for i in range(qmasks.size):
            m = qmasks[i]
            s = qsizes[i]
            counts = np.zeros(s // 2 + 1, dtype=np.int64)
            for j in range(codes.size):
                p = _pop32(codes[j] & m)
                q = s - p
                counts[p if p < q else q] += 1
            out[i] = counts.max()
        return out


# ---------------------------------------------------------------------------
# public dispatch
# ---------------------------------------------------------------------------

def popcount(codes: np.ndarray) -> np.ndarray:
    """Number of red balls per packed coloring."""
    if USE_NUMBA:
        return _popcount_nb(np.ascontiguousarray(codes, dtype=np.uint32))
    return _popcount_np(codes)


def gm_answer_codes(codes: np.ndarray, qmask, qsize: int) -> np.ndarray:
    """1 where the query is monochromatic under the coloring, else 0."""
    if USE_NUMBA:
        return _gm_codes_nb(np.ascontiguousarray(codes, dtype=np.uint32),
                            np.uint32(qmask), np.int64(qsize))
    return _gm_codes_np(codes, np.uint32(qmask), qsize)


def cm_answer_codes(codes: np.ndarray, qmask, qsize: int) -> np.ndarray:
    """min(#red, #blue) inside the query, per coloring."""
    if USE_NUMBA:
        return _cm_codes_nb(np.ascontiguousarray(codes, dtype=np.uint32),
                            np.uint32(qmask), np.int64(qsize))
    return _cm_codes_np(codes, np.uint32(qmask), qsize)


def proper_two_coloring(edge_masks, edge_sizes, nverts: int) -> int:
    """First packed coloring with no monochromatic edge, or -1 if none."""
    em = np.ascontiguousarray(edge_masks, dtype=np.uint64)
    es = np.ascontiguousarray(edge_sizes, dtype=np.int64)
    if USE_NUMBA:
        return int(_proper_coloring_nb(em, es, np.int64(nverts)))
    return _proper_coloring_np(em, es, nverts)


def worst_split_sizes(codes: np.ndarray, qmasks, qsizes, model: str) -> np.ndarray:
    """Per candidate query, the largest answer-class size over the codes."""
    qm = np.ascontiguousarray(qmasks, dtype=np.uint32)
    qs = np.ascontiguousarray(qsizes, dtype=np.int64)
    cc = np.ascontiguousarray(codes, dtype=np.uint32)
    if model == "gm":
        if USE_NUMBA:
            return _worst_split_gm_nb(cc, qm, qs)
        return _worst_split_gm_np(cc, qm, qs)
    if model == "cm":
        if USE_NUMBA:
            return _worst_split_cm_nb(cc, qm, qs)
        return _worst_split_cm_np(cc, qm, qs)
    raise ValueError(f"unknown model {model!r}")
