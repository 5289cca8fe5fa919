"""Independent reference implementations the tests check the library against.

Everything here is deliberately naive: scalar arithmetic, adjacency walks,
and high-precision special functions. None of it shares code with the
library paths it validates.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

mpmath.mp.dps = 40

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def gaussian_sf_hp(x: float) -> float:
    """Gaussian survival function at 40 decimal digits, rounded to float."""
    return float(mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2)


def splitmix_reference(seed: int, count: int) -> list[int]:
    """The published SplitMix64 sequence, straight from its definition."""
    out = []
    state = seed & MASK64
    for _ in range(count):
        state = (state + GOLDEN) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        out.append((z ^ (z >> 31)) & MASK64)
    return out


def uniform_from_u64(z: int) -> float:
    return (z >> 11) * 2.0**-53


def reference_instance(n: int, k: int, p: float, q: float, seed: int):
    """Scalar re-derivation of generate_planted: (dense adjacency, planted ids).

    Consumes the SplitMix64 stream exactly as documented: k draws for the
    partial Fisher-Yates, then one uniform per unordered pair in canonical
    order.
    """
    outputs = splitmix_reference(seed, k + n * (n - 1) // 2)
    pos = 0
    perm = list(range(n))
    for i in range(k):
        u = uniform_from_u64(outputs[pos])
        pos += 1
        j = i + int(u * (n - i))
        perm[i], perm[j] = perm[j], perm[i]
    planted = sorted(perm[:k])
    in_planted = set(planted)
    dense = np.zeros((n, n), dtype=bool)
    for u in range(n):
        for v in range(u + 1, n):
            prob = q if (u in in_planted and v in in_planted) else p
            if uniform_from_u64(outputs[pos]) < prob:
                dense[u, v] = dense[v, u] = True
            pos += 1
    return dense, planted


def brute_degree_into(dense: np.ndarray, v: int, members) -> int:
    return sum(1 for u in members if dense[v, u])


def brute_common_neighborhood(dense: np.ndarray, members) -> set[int]:
    n = dense.shape[0]
    members = set(members)
    out = set()
    for v in range(n):
        if v in members:
            continue
        if all(dense[u, v] for u in members):
            out.add(v)
    return out


def brute_top_k(dense: np.ndarray, members, k: int) -> list[int]:
    """Sort-based top-k by degree, ties toward the smaller index."""
    degs = {v: int(dense[v].sum()) for v in members}
    order = sorted(members, key=lambda v: (-degs[v], v))
    return sorted(order[:k])


def brute_is_clique(dense: np.ndarray, members) -> bool:
    members = list(members)
    return all(
        dense[u, v] for i, u in enumerate(members) for v in members[i + 1 :]
    )


def binomial_tail_ge(n: int, p: float, threshold: float) -> float:
    """P(Bin(n, p) >= threshold), exact via mpmath."""
    start = math.ceil(threshold)
    total = mpmath.mpf(0)
    pp = mpmath.mpf(p)
    for i in range(start, n + 1):
        total += mpmath.binomial(n, i) * pp**i * (1 - pp) ** (n - i)
    return float(total)
