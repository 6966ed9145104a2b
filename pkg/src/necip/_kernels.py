"""Hot enumeration kernels, numpy implementations plus backend dispatch.

Each public function here has a numba twin in :mod:`necip._kernels_nb`;
:mod:`necip._backend` decides which one runs.  Both backends are exact and
return identical results; the benchmark script under ``benchmarks/``
compares their throughput.
"""

import numpy as np

from . import _backend

# ---------------------------------------------------------------------------
# subfunction enumeration: gather restricted tables and pack them into rows


def pack_restriction_rows(bits: np.ndarray, v_off: np.ndarray, w_off: np.ndarray) -> np.ndarray:
    """One packed row per restriction.

    ``bits`` is the dense table, ``v_off`` the offsets of the free-block
    assignments and ``w_off`` the offsets of the fixed-complement
    assignments.  Row i packs the table of restriction i (big bit first,
    same layout as ``np.packbits``).
    """
    if _backend.using_numba():
        from . import _kernels_nb

        return _kernels_nb.pack_restriction_rows(bits, v_off, w_off)
    return _pack_restriction_rows_np(bits, v_off, w_off)


def _pack_restriction_rows_np(bits, v_off, w_off):
    mat = bits[w_off[:, None] + v_off[None, :]]
    return np.packbits(mat, axis=1)


# ---------------------------------------------------------------------------
# deterministic branching programs: canonical sweep at exact size s
#
# Canonical form: non-sink vertices 0..s-1 with vertex 0 the start, all arcs
# pointing forward (or to a sink), so every acyclic program appears after
# relabelling.  Successor choice c of vertex i decodes to i+1+c for
# c < s-1-i, to the 0-sink for c == s-1-i, and to the 1-sink otherwise.

_CHUNK = 1 << 16


def detbp_cover(n: int, s: int) -> np.ndarray:
    """Boolean vector over all 2^(2^n) tables: computable by a size-s program."""
    if s == 0:
        return _constants_cover(n)
    if _backend.using_numba():
        from . import _kernels_nb

        return _kernels_nb.detbp_cover(n, s)
    return _detbp_cover_np(n, s)


def _constants_cover(n):
    covered = np.zeros(1 << (1 << n), dtype=bool)
    covered[0] = True
    covered[-1] = True
    return covered


def _detbp_cover_np(n, s):
    n_inputs = 1 << n
    covered = np.zeros(1 << n_inputs, dtype=bool)
    radices = []
    for i in range(s):
        c = s - i + 1  # forward vertices + two sinks
        radices += [n, c, c]
    total = int(np.prod(radices, dtype=np.int64))
    # successor lookup per vertex: choice -> vertex id (s = 0-sink, s+1 = 1-sink)
    succ_lut = [
        np.array([*range(i + 1, s), s, s + 1], dtype=np.int64) for i in range(s)
    ]
    shift = np.array([n - 1 - v for v in range(n)], dtype=np.int64)
    for lo in range(0, total, _CHUNK):
        ids = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        x = ids.copy()
        var = np.empty((len(ids), s), dtype=np.int64)
        s0 = np.empty_like(var)
        s1 = np.empty_like(var)
        for i in range(s):
            var[:, i] = x % n
            x //= n
            c = s - i + 1
            s0[:, i] = succ_lut[i][x % c]
            x //= c
            s1[:, i] = succ_lut[i][x % c]
            x //= c
        tval = np.zeros(len(ids), dtype=np.int64)
        for a in range(n_inputs):
            cur = np.zeros(len(ids), dtype=np.int64)
            for v in range(s):
                at_v = cur == v
                if not at_v.any():
                    continue
                bit = (a >> shift[var[at_v, v]]) & 1
                cur[at_v] = np.where(bit == 1, s1[at_v, v], s0[at_v, v])
            tval |= (cur == s + 1).astype(np.int64) << (n_inputs - 1 - a)
        covered[tval] = True
    return covered


# ---------------------------------------------------------------------------
# nondeterministic branching programs: fixed-naming sweep at exact size s
#
# Canonical form: non-sink vertices 0..s-1 with vertex 0 the start; each
# vertex carries two arc sets over the s targets {vertices 1..s-1, 1-sink}
# (no arc enters the start, arcs to the 0-sink are useless under
# existential acceptance).  Cycles are allowed; acceptance is reachability.


def nbp_cover(n: int, s: int) -> np.ndarray:
    if s == 0:
        return _constants_cover(n)
    if _backend.using_numba():
        from . import _kernels_nb

        return _kernels_nb.nbp_cover(n, s)
    return _nbp_cover_np(n, s)


def _remap_targets_np(masks, s):
    # choice bit j<s-1 is vertex j+1; bit s-1 is the 1-sink -> reach bit s
    return ((masks & ((1 << (s - 1)) - 1)) << 1) | (((masks >> (s - 1)) & 1) << s)


def _nbp_cover_np(n, s):
    n_inputs = 1 << n
    covered = np.zeros(1 << n_inputs, dtype=bool)
    radices = []
    for _ in range(s):
        radices += [n, 1 << s, 1 << s]
    total = int(np.prod(radices, dtype=np.int64))
    for lo in range(0, total, _CHUNK):
        ids = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        x = ids.copy()
        var = np.empty((len(ids), s), dtype=np.int64)
        a0 = np.empty_like(var)
        a1 = np.empty_like(var)
        for i in range(s):
            var[:, i] = x % n
            x //= n
            a0[:, i] = _remap_targets_np(x % (1 << s), s)
            x //= 1 << s
            a1[:, i] = _remap_targets_np(x % (1 << s), s)
            x //= 1 << s
        tval = np.zeros(len(ids), dtype=np.int64)
        for a in range(n_inputs):
            adj = np.empty((len(ids), s), dtype=np.int64)
            for v in range(s):
                bit = (a >> (n - 1 - var[:, v])) & 1
                adj[:, v] = np.where(bit == 1, a1[:, v], a0[:, v])
            reach = np.ones(len(ids), dtype=np.int64)  # bit 0 = start vertex
            for _ in range(s):
                new = reach.copy()
                for v in range(s):
                    new |= ((reach >> v) & 1) * adj[:, v]
                if np.array_equal(new, reach):
                    break
                reach = new
            tval |= ((reach >> s) & 1) << (n_inputs - 1 - a)
        covered[tval] = True
    return covered


# ---------------------------------------------------------------------------
# parity branching programs: acyclic forward sweep at exact size s
#
# Same forward canonical form as the deterministic sweep but with arc SETS
# over the forward targets {vertices i+1..s-1, 1-sink}; acceptance is an odd
# number of start->1-sink paths, computed by backward DP mod 2.


def pbp_cover(n: int, s: int) -> np.ndarray:
    if s == 0:
        return _constants_cover(n)
    if _backend.using_numba():
        from . import _kernels_nb

        return _kernels_nb.pbp_cover(n, s)
    return _pbp_cover_np(n, s)


def _pbp_cover_np(n, s):
    n_inputs = 1 << n
    covered = np.zeros(1 << n_inputs, dtype=bool)
    tcount = [s - i for i in range(s)]  # forward vertices + 1-sink
    radices = []
    for i in range(s):
        radices += [n, 1 << tcount[i], 1 << tcount[i]]
    total = int(np.prod(radices, dtype=np.int64))
    pop = np.array([bin(x).count("1") for x in range(1 << (s + 1))], dtype=np.int64)
    for lo in range(0, total, _CHUNK):
        ids = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        x = ids.copy()
        var = np.empty((len(ids), s), dtype=np.int64)
        a0 = np.empty_like(var)
        a1 = np.empty_like(var)
        for i in range(s):
            var[:, i] = x % n
            x //= n
            c = 1 << tcount[i]
            # bit j<s-1-i is vertex i+1+j; bit s-1-i is the 1-sink -> parity bit s
            m0 = x % c
            x //= c
            m1 = x % c
            x //= c
            a0[:, i] = ((m0 & ((1 << (s - 1 - i)) - 1)) << (i + 1)) | (
                ((m0 >> (s - 1 - i)) & 1) << s
            )
            a1[:, i] = ((m1 & ((1 << (s - 1 - i)) - 1)) << (i + 1)) | (
                ((m1 >> (s - 1 - i)) & 1) << s
            )
        tval = np.zeros(len(ids), dtype=np.int64)
        for a in range(n_inputs):
            parities = np.full(len(ids), 1 << s, dtype=np.int64)  # parity bit of the 1-sink
            for v in range(s - 1, -1, -1):
                bit = (a >> (n - 1 - var[:, v])) & 1
                act = np.where(bit == 1, a1[:, v], a0[:, v])
                pv = pop[act & parities] & 1
                parities |= pv << v
            tval |= ((parities >> 0) & 1) << (n_inputs - 1 - a)
        covered[tval] = True
    return covered
