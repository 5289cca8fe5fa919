"""Numba kernels for the bit-packed hot paths: edge sampling and bit gathers.

All kernels are deterministic and single-threaded; callers own the output
buffers. The edge sampler evaluates the SplitMix64 stream positionally
(value for pair j = stream output offset+j), so filling the upper triangle
and mirroring is bit-identical to consuming the stream pair by pair.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

_GOLD = uint64(0x9E3779B97F4A7C15)
_MIX1 = uint64(0xBF58476D1CE4E5B9)
_MIX2 = uint64(0x94D049BB133111EB)


@njit(cache=True)
def fill_upper(n, seed, offset, thresh53_other, thresh53_planted, planted_mask, out):
    """Sample the strict upper triangle of the adjacency into packed rows.

    Pair (r, v), r < v, at canonical position j consumes stream output
    offset + j; the edge is present iff the top 53 bits of that output are
    below the threshold for the pair (planted threshold iff both endpoints
    are planted). out rows must be zeroed; only bits v > r are written.
    """
    idx = uint64(offset)
    for r in range(n):
        r_planted = planted_mask[r]
        row = out[r]
        for v in range(r + 1, n):
            idx += uint64(1)
            z = seed + idx * _GOLD
            z = (z ^ (z >> uint64(30))) * _MIX1
            z = (z ^ (z >> uint64(27))) * _MIX2
            z = z ^ (z >> uint64(31))
            t = thresh53_planted if (r_planted and planted_mask[v]) else thresh53_other
            if (z >> uint64(11)) < t:
                row[v >> 6] |= uint64(1) << uint64(v & 63)


@njit(cache=True)
def transpose64(block):
    """In-place bit transpose of a 64x64 block (64 words, bit b = column b)."""
    j = 32
    m = uint64(0x00000000FFFFFFFF)
    while j != 0:
        k = 0
        while k < 64:
            for i in range(k, k + j):
                t = ((block[i] >> uint64(j)) ^ block[i + j]) & m
                block[i] ^= t << uint64(j)
                block[i + j] ^= t
            k += 2 * j
        j >>= 1
        m = m ^ (m << uint64(j))


@njit(cache=True)
def mirror_or(out, n_words):
    """OR the bit-transpose into a packed square matrix: out |= out^T.

    out must have n_words*64 rows and n_words word columns.
    """
    a = np.empty(64, dtype=np.uint64)
    b = np.empty(64, dtype=np.uint64)
    for bi in range(n_words):
        for bj in range(bi, n_words):
            for i in range(64):
                a[i] = out[bi * 64 + i, bj]
                b[i] = out[bj * 64 + i, bi]
            transpose64(a)
            transpose64(b)
            for i in range(64):
                out[bi * 64 + i, bj] |= b[i]
                out[bj * 64 + i, bi] |= a[i]


@njit(cache=True)
def gather_bits(src, keep, out):
    """Pack src[keep[i], keep[j]] bits into out (len(keep) x out_words).

    src is a packed bit matrix; keep is a sorted index vector; out must be
    zeroed with at least ceil(len(keep)/64) word columns.
    """
    m = keep.shape[0]
    for i in range(m):
        row = src[keep[i]]
        orow = out[i]
        for j in range(m):
            c = keep[j]
            if (row[c >> 6] >> uint64(c & 63)) & uint64(1):
                orow[j >> 6] |= uint64(1) << uint64(j & 63)
