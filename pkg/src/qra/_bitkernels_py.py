"""Pure-numpy implementations of the bit-stream kernels.

Same contracts as the compiled extension in ``_bitkernels.pyx``; selected as
a fallback when the extension is not built.  Exact integer results, so the
two backends agree bit-for-bit.
"""
import numpy as np

_BLOCK_CHUNK = 1 << 24  # cap temp arrays at ~16M elements per pass


def transitions(bits):
    """Number of positions i with bits[i] != bits[i+1]."""
    if bits.shape[0] < 2:
        return 0
    return int(np.count_nonzero(bits[1:] != bits[:-1]))


def longest_runs(bits, block_len):
    """Longest run of ones inside each disjoint block of ``block_len`` bits."""
    nblocks = bits.shape[0] // block_len
    out = np.zeros(nblocks, dtype=np.int64)
    rows_per_chunk = max(1, _BLOCK_CHUNK // block_len)
    cols = np.arange(block_len, dtype=np.int64)
    for s in range(0, nblocks, rows_per_chunk):
        e = min(s + rows_per_chunk, nblocks)
        blk = bits[s * block_len : e * block_len].reshape(e - s, block_len)
        # run length at j = j - (index of last zero at or before j)
        last_zero = np.maximum.accumulate(np.where(blk == 0, cols, -1), axis=1)
        run = (cols - last_zero) * (blk == 1)
        out[s:e] = run.max(axis=1)
    return out


def gf2_ranks(bits, q):
    """Rank over GF(2) of each q x q matrix packed row-major in ``bits``."""
    if q > 64:
        raise ValueError("q must be <= 64")
    nmat = bits.shape[0] // (q * q)
    rows = np.zeros(nmat * q, dtype=np.uint64)
    mat_bits = bits[: nmat * q * q].reshape(nmat * q, q)
    for j in range(q):
        rows = (rows << np.uint64(1)) | mat_bits[:, j].astype(np.uint64)
    out = np.empty(nmat, dtype=np.int64)
    for k in range(nmat):
        rs = [int(v) for v in rows[k * q : (k + 1) * q]]
        rank = 0
        for col in range(q - 1, -1, -1):
            mask = 1 << col
            piv = -1
            for i in range(rank, q):
                if rs[i] & mask:
                    piv = i
                    break
            if piv < 0:
                continue
            rs[rank], rs[piv] = rs[piv], rs[rank]
            pr = rs[rank]
            for i in range(rank + 1, q):
                if rs[i] & mask:
                    rs[i] ^= pr
            rank += 1
        out[k] = rank
    return out


def template_counts(bits, template, block_len):
    """Overlapping occurrences of ``template`` inside each disjoint block."""
    m = template.shape[0]
    nblocks = bits.shape[0] // block_len
    out = np.empty(nblocks, dtype=np.int64)
    rows_per_chunk = max(1, _BLOCK_CHUNK // block_len)
    for s in range(0, nblocks, rows_per_chunk):
        e = min(s + rows_per_chunk, nblocks)
        blk = bits[s * block_len : e * block_len].reshape(e - s, block_len)
        hit = np.ones((e - s, block_len - m + 1), dtype=bool)
        for k in range(m):
            hit &= blk[:, k : k + block_len - m + 1] == template[k]
        out[s:e] = hit.sum(axis=1)
    return out


def pattern_counts(bits, m):
    """Counts of the 2**m overlapping m-bit windows, with circular wrap."""
    n = bits.shape[0]
    aug = np.concatenate([bits, bits[: m - 1]]) if m > 1 else bits
    w = np.zeros(n, dtype=np.int64)
    for j in range(m):
        w = (w << 1) | aug[j : j + n]
    return np.bincount(w, minlength=1 << m)
