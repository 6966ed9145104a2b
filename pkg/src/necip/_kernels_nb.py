"""Numba twins of the kernels in :mod:`necip._kernels`.

Imported lazily, only when the numba backend is selected, so that forcing
``NECIP_BACKEND=numpy`` never pays the JIT import cost.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def pack_restriction_rows(bits, v_off, w_off):
    r = w_off.shape[0]
    m = v_off.shape[0]
    out = np.zeros((r, (m + 7) // 8), dtype=np.uint8)
    for i in range(r):
        base = w_off[i]
        for j in range(m):
            if bits[base + v_off[j]]:
                out[i, j >> 3] |= np.uint8(128 >> (j & 7))
    return out


@njit(cache=True)
def detbp_cover(n, s):
    n_inputs = 1 << n
    covered = np.zeros(1 << n_inputs, dtype=np.bool_)
    total = np.int64(1)
    for i in range(s):
        c = s - i + 1
        total *= n * c * c
    var = np.empty(s, dtype=np.int64)
    s0 = np.empty(s, dtype=np.int64)
    s1 = np.empty(s, dtype=np.int64)
    for pid in range(total):
        x = pid
        for i in range(s):
            var[i] = x % n
            x //= n
            c = s - i + 1
            c0 = x % c
            x //= c
            c1 = x % c
            x //= c
            s0[i] = i + 1 + c0 if c0 < s - 1 - i else s + (c0 - (s - 1 - i))
            s1[i] = i + 1 + c1 if c1 < s - 1 - i else s + (c1 - (s - 1 - i))
        tval = 0
        for a in range(n_inputs):
            cur = 0
            while cur < s:
                if (a >> (n - 1 - var[cur])) & 1:
                    cur = s1[cur]
                else:
                    cur = s0[cur]
            if cur == s + 1:
                tval |= 1 << (n_inputs - 1 - a)
        covered[tval] = True
    return covered


@njit(cache=True)
def nbp_cover(n, s):
    n_inputs = 1 << n
    covered = np.zeros(1 << n_inputs, dtype=np.bool_)
    total = np.int64(1)
    for _ in range(s):
        total *= n << (2 * s)
    var = np.empty(s, dtype=np.int64)
    a0 = np.empty(s, dtype=np.int64)
    a1 = np.empty(s, dtype=np.int64)
    low = (1 << (s - 1)) - 1
    for pid in range(total):
        x = pid
        for i in range(s):
            var[i] = x % n
            x //= n
            m0 = x % (1 << s)
            x //= 1 << s
            m1 = x % (1 << s)
            x //= 1 << s
            # choice bit j<s-1 is vertex j+1; top bit is the 1-sink -> bit s
            a0[i] = ((m0 & low) << 1) | (((m0 >> (s - 1)) & 1) << s)
            a1[i] = ((m1 & low) << 1) | (((m1 >> (s - 1)) & 1) << s)
        tval = 0
        for a in range(n_inputs):
            reach = 1  # start vertex
            for _ in range(s):
                new = reach
                for v in range(s):
                    if (reach >> v) & 1:
                        if (a >> (n - 1 - var[v])) & 1:
                            new |= a1[v]
                        else:
                            new |= a0[v]
                if new == reach:
                    break
                reach = new
            if (reach >> s) & 1:
                tval |= 1 << (n_inputs - 1 - a)
        covered[tval] = True
    return covered


@njit(cache=True)
def pbp_cover(n, s):
    n_inputs = 1 << n
    covered = np.zeros(1 << n_inputs, dtype=np.bool_)
    total = np.int64(1)
    for i in range(s):
        total *= n << (2 * (s - i))
    var = np.empty(s, dtype=np.int64)
    a0 = np.empty(s, dtype=np.int64)
    a1 = np.empty(s, dtype=np.int64)
    for pid in range(total):
        x = pid
        for i in range(s):
            var[i] = x % n
            x //= n
            t = s - i  # forward vertices i+1..s-1 plus the 1-sink
            m0 = x % (1 << t)
            x //= 1 << t
            m1 = x % (1 << t)
            x //= 1 << t
            lowmask = (1 << (s - 1 - i)) - 1
            a0[i] = ((m0 & lowmask) << (i + 1)) | (((m0 >> (s - 1 - i)) & 1) << s)
            a1[i] = ((m1 & lowmask) << (i + 1)) | (((m1 >> (s - 1 - i)) & 1) << s)
        tval = 0
        for a in range(n_inputs):
            parities = 1 << s  # the 1-sink contributes one path
            for v in range(s - 1, -1, -1):
                if (a >> (n - 1 - var[v])) & 1:
                    act = a1[v] & parities
                else:
                    act = a0[v] & parities
                pv = 0
                while act:
                    pv ^= 1
                    act &= act - 1
                parities |= pv << v
            if parities & 1:
                tval |= 1 << (n_inputs - 1 - a)
        covered[tval] = True
    return covered
