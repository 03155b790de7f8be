# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled bit-stream kernels.

Contracts identical to ``_bitkernels_py``; these are the hot inner loops of
the statistical battery (pattern counting, GF(2) ranks, per-block scans).
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def transitions(const unsigned char[::1] bits):
    cdef Py_ssize_t i, n = bits.shape[0]
    cdef long long count = 0
    for i in range(1, n):
        if bits[i] != bits[i - 1]:
            count += 1
    return count


def longest_runs(const unsigned char[::1] bits, Py_ssize_t block_len):
    cdef Py_ssize_t nblocks = bits.shape[0] // block_len
    out_arr = np.zeros(nblocks, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef Py_ssize_t k, j
    cdef long long best, cur
    for k in range(nblocks):
        best = 0
        cur = 0
        for j in range(k * block_len, (k + 1) * block_len):
            if bits[j]:
                cur += 1
                if cur > best:
                    best = cur
            else:
                cur = 0
        out[k] = best
    return out_arr


def gf2_ranks(const unsigned char[::1] bits, Py_ssize_t q):
    cdef Py_ssize_t nmat = bits.shape[0] // (q * q)
    out_arr = np.zeros(nmat, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef unsigned long long[64] rows
    cdef unsigned long long pr, mask
    cdef Py_ssize_t k, i, j, base, rank, piv
    for k in range(nmat):
        base = k * q * q
        for i in range(q):
            pr = 0
            for j in range(q):
                pr = (pr << 1) | bits[base + i * q + j]
            rows[i] = pr
        rank = 0
        for j in range(q - 1, -1, -1):
            mask = (<unsigned long long> 1) << j
            piv = -1
            for i in range(rank, q):
                if rows[i] & mask:
                    piv = i
                    break
            if piv < 0:
                continue
            pr = rows[piv]
            rows[piv] = rows[rank]
            rows[rank] = pr
            for i in range(rank + 1, q):
                if rows[i] & mask:
                    rows[i] ^= pr
            rank += 1
        out[k] = rank
    return out_arr


def template_counts(const unsigned char[::1] bits,
                    const unsigned char[::1] template, Py_ssize_t block_len):
    cdef Py_ssize_t m = template.shape[0]
    cdef Py_ssize_t nblocks = bits.shape[0] // block_len
    out_arr = np.zeros(nblocks, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef Py_ssize_t k, j, t, base
    cdef long long count
    cdef bint match
    for k in range(nblocks):
        base = k * block_len
        count = 0
        for j in range(block_len - m + 1):
            match = 1
            for t in range(m):
                if bits[base + j + t] != template[t]:
                    match = 0
                    break
            if match:
                count += 1
        out[k] = count
    return out_arr


def pattern_counts(const unsigned char[::1] bits, Py_ssize_t m):
    cdef Py_ssize_t n = bits.shape[0]
    out_arr = np.zeros(1 << m, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef unsigned long long w = 0, mask = ((<unsigned long long> 1) << m) - 1
    cdef Py_ssize_t i
    for i in range(m):
        w = (w << 1) | bits[i % n]
    out[w & mask] += 1
    for i in range(1, n):
        w = ((w << 1) | bits[(i + m - 1) % n]) & mask
        out[w] += 1
    return out_arr
