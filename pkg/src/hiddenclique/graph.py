"""Random-graph generation, bit-packed adjacency storage, and degree primitives.

A graph on n vertices is stored as n rows of ceil(n/64) little-endian 64-bit
words; bit u of row v is 1 iff the edge (u, v) is present. Padding bits past
column n-1 are forced to zero so population counts need no masking fixups.
Vertex sets over the same universe use the same packed layout, which makes
"degree of v into S" one AND plus a popcount over the row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import FormatError, InvalidParams
from .rng import MASK64, SplitMix64

WORD_BITS = 64


def words_for(n: int) -> int:
    """Words per packed row for an n-bit universe (at least one word)."""
    return max(1, (n + WORD_BITS - 1) // WORD_BITS)


def _pack_bool(mask: np.ndarray, n: int) -> np.ndarray:
    w = words_for(n)
    padded = np.zeros(w * WORD_BITS, dtype=bool)
    padded[:n] = mask[:n]
    return np.packbits(padded, bitorder="little").view(np.uint64)


def _unpack_words(words: np.ndarray, n: int) -> np.ndarray:
    return np.unpackbits(words.view(np.uint8), bitorder="little")[:n].astype(bool)


def _universe_mask(n: int) -> np.ndarray:
    return _pack_bool(np.ones(n, dtype=bool), n)


class VertexSet:
    """An immutable set of vertices over a fixed universe, packed as a bitmap."""

    __slots__ = ("n", "words", "_card")

    def __init__(self, n: int, words: np.ndarray):
        if n < 0:
            raise InvalidParams("universe size must be nonnegative")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (words_for(n),):
            raise InvalidParams(
                f"bitmap has {words.shape} words, universe {n} needs ({words_for(n)},)"
            )
        if n % WORD_BITS and int(words[-1]) >> (n % WORD_BITS):
            raise InvalidParams("bitmap has bits set beyond the universe")
        words.setflags(write=False)
        self.n = n
        self.words = words
        self._card = int(np.bitwise_count(words).sum())

    @classmethod
    def empty(cls, n: int) -> VertexSet:
        return cls(n, np.zeros(words_for(n), dtype=np.uint64))

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls(n, _universe_mask(n))

    @classmethod
    def from_indices(cls, n: int, indices) -> VertexSet:
        ids = np.asarray(indices, dtype=np.int64).reshape(-1)
        if ids.size and (ids.min() < 0 or ids.max() >= n):
            raise InvalidParams("vertex index outside universe")
        mask = np.zeros(n, dtype=bool)
        mask[ids] = True
        return cls(n, _pack_bool(mask, n))

    @classmethod
    def from_bool(cls, mask: np.ndarray) -> VertexSet:
        mask = np.asarray(mask, dtype=bool)
        return cls(mask.shape[0], _pack_bool(mask, mask.shape[0]))

    def indices(self) -> np.ndarray:
        """Member vertex ids, ascending."""
        return np.nonzero(_unpack_words(self.words, self.n))[0].astype(np.int64)

    def to_bool(self) -> np.ndarray:
        return _unpack_words(self.words, self.n)

    def __len__(self) -> int:
        return self._card

    def __contains__(self, v: int) -> bool:
        if not 0 <= v < self.n:
            return False
        return bool((int(self.words[v >> 6]) >> (v & 63)) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.words, other.words))

    def __hash__(self):
        return hash((self.n, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"VertexSet(n={self.n}, size={self._card})"

    def _check_same_universe(self, other: VertexSet) -> None:
        if self.n != other.n:
            raise InvalidParams(f"universe mismatch: {self.n} vs {other.n}")

    def union(self, other: VertexSet) -> VertexSet:
        self._check_same_universe(other)
        return VertexSet(self.n, self.words | other.words)

    def intersection(self, other: VertexSet) -> VertexSet:
        self._check_same_universe(other)
        return VertexSet(self.n, self.words & other.words)

    def difference(self, other: VertexSet) -> VertexSet:
        self._check_same_universe(other)
        return VertexSet(self.n, self.words & ~other.words)

    def complement(self) -> VertexSet:
        return VertexSet(self.n, (~self.words) & _universe_mask(self.n))

    def issubset(self, other: VertexSet) -> bool:
        self._check_same_universe(other)
        return bool(np.array_equal(self.words & other.words, self.words))

    __or__ = union
    __and__ = intersection
    __sub__ = difference


class Graph:
    """An immutable undirected graph stored as a packed bit adjacency matrix."""

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: np.ndarray):
        if n < 0:
            raise InvalidParams("vertex count must be nonnegative")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (n, words_for(n)):
            raise InvalidParams(
                f"adjacency shape {words.shape} does not match n={n}"
            )
        words.setflags(write=False)
        self.n = n
        self.words = words

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> Graph:
        """Build from a dense 0/1 matrix (symmetrized is the caller's job)."""
        m = np.asarray(matrix, dtype=bool)
        n = m.shape[0]
        w = words_for(n)
        out = np.zeros((n, w), dtype=np.uint64)
        for v in range(n):
            out[v] = _pack_bool(m[v], n)
        return cls(n, out)

    @classmethod
    def complete(cls, n: int) -> Graph:
        out = np.tile(_universe_mask(n), (n, 1)).reshape(n, words_for(n))
        for v in range(n):
            out[v, v >> 6] &= ~(np.uint64(1) << np.uint64(v & 63))
        return cls(n, out)

    @classmethod
    def empty_graph(cls, n: int) -> Graph:
        return cls(n, np.zeros((n, words_for(n)), dtype=np.uint64))

    # -- basic queries ----------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InvalidParams("vertex index out of range")
        return bool((int(self.words[u, v >> 6]) >> (v & 63)) & 1)

    def degrees(self) -> np.ndarray:
        """Degree of every vertex (row popcounts)."""
        return np.bitwise_count(self.words).sum(axis=1).astype(np.int64)

    def edge_count(self) -> int:
        return int(np.bitwise_count(self.words).sum()) // 2

    def to_dense(self) -> np.ndarray:
        return np.vstack(
            [_unpack_words(self.words[v], self.n) for v in range(self.n)]
        ) if self.n else np.zeros((0, 0), dtype=bool)

    # -- set-relative operations --------------------------------------------

    def degree_into(self, v: int, s: VertexSet) -> int:
        """Number of neighbors v has inside s (masked row popcount)."""
        if s.n != self.n:
            raise InvalidParams(f"universe mismatch: graph {self.n}, set {s.n}")
        if not 0 <= v < self.n:
            raise InvalidParams("vertex index out of range")
        return int(np.bitwise_count(self.words[v] & s.words).sum())

    def _degrees_into(self, rows: np.ndarray, s_words: np.ndarray) -> np.ndarray:
        """Vectorized degree-into-s for the given row indices."""
        if rows.size == 0:
            return np.zeros(0, dtype=np.int64)
        return (
            np.bitwise_count(self.words[rows] & s_words[None, :])
            .sum(axis=1)
            .astype(np.int64)
        )

    def degrees_into_all(self, a: VertexSet, s: VertexSet) -> dict[int, int]:
        """degree_into(v, s) for every v in a, as a vertex -> count map."""
        if a.n != self.n or s.n != self.n:
            raise InvalidParams("universe mismatch")
        ids = a.indices()
        counts = self._degrees_into(ids, s.words)
        return {int(v): int(c) for v, c in zip(ids, counts)}

    def induced_subgraph(self, u: VertexSet) -> tuple[Graph, np.ndarray]:
        """Subgraph on u plus the sorted-order index map (new id -> old id)."""
        if u.n != self.n:
            raise InvalidParams("universe mismatch")
        keep = u.indices()
        m = keep.shape[0]
        out = np.zeros((m, words_for(m)), dtype=np.uint64)
        if m:
            # only bits < m are ever written, so padding stays clean
            _kernels.gather_bits(self.words, keep, out)
        return Graph(m, out), keep

    def common_neighborhood(self, t: VertexSet) -> VertexSet:
        """Vertices outside t adjacent to every member of t (AND-fold of rows)."""
        if t.n != self.n:
            raise InvalidParams("universe mismatch")
        ids = t.indices()
        if ids.size == 0:
            raise InvalidParams("common neighborhood of the empty set is ill-defined")
        acc = self.words[ids[0]].copy()
        for v in ids[1:]:
            acc &= self.words[v]
        acc &= ~t.words
        return VertexSet(self.n, acc)

    def top_k_by_degree(self, u: VertexSet, k: int) -> VertexSet:
        """The k members of u with largest degree in this graph.

        Ties break toward the smaller vertex index, so the result is
        deterministic.
        """
        if u.n != self.n:
            raise InvalidParams("universe mismatch")
        if k < 0 or k > len(u):
            raise InvalidParams(f"k={k} out of range for |u|={len(u)}")
        ids = u.indices()
        if ids.size == 0:
            return VertexSet.empty(self.n)
        # int64 before negation: unsigned degrees would wrap
        degs = np.bitwise_count(self.words[ids]).sum(axis=1).astype(np.int64)
        order = np.lexsort((ids, -degs))
        return VertexSet.from_indices(self.n, ids[order[:k]])

    def is_clique(self, u: VertexSet) -> bool:
        """True iff every pair inside u is an edge; sets of size <= 1 qualify."""
        if u.n != self.n:
            raise InvalidParams("universe mismatch")
        ids = u.indices()
        if ids.size <= 1:
            return True
        want = ids.size - 1  # rows carry no self bit
        counts = self._degrees_into(ids, u.words)
        return bool(np.all(counts == want))

    # -- invariant checking -------------------------------------------------

    def validate(self) -> None:
        """Raise FormatError unless symmetry, zero diagonal, and padding hold."""
        n, w = self.n, words_for(self.n)
        if n % WORD_BITS:
            top = self.words[:, w - 1] >> np.uint64(n % WORD_BITS)
            if np.any(top):
                raise FormatError("padding bits beyond column n-1 are set")
        diag = np.fromiter(
            ((int(self.words[v, v >> 6]) >> (v & 63)) & 1 for v in range(n)),
            dtype=np.int64,
            count=n,
        )
        if np.any(diag):
            raise FormatError("self-loop bit set on the diagonal")
        # symmetry via blockwise transpose comparison
        if n:
            mirror = np.zeros(((w * WORD_BITS), w), dtype=np.uint64)
            mirror[:n] = self.words
            _kernels.mirror_or(mirror, w)
            if not np.array_equal(mirror[:n], self.words):
                raise FormatError("adjacency matrix is not symmetric")


@dataclass(frozen=True)
class PlantedInstance:
    """A generated graph together with its hidden set and generation inputs."""

    graph: Graph
    planted: VertexSet
    n: int
    k: int
    p: float
    q: float
    seed: int


def generate_planted(n: int, k: int, p: float, q: float, seed: int) -> PlantedInstance:
    """Generate a graph with a planted dense k-subset.

    The planted set is a uniform k-subset (partial Fisher-Yates over the
    first k outputs of the seeded stream). Every unordered pair then
    consumes one uniform real from the stream in canonical order (u < v,
    u ascending): pairs inside the planted set are edges with probability
    q, all others with probability p. Identical arguments give a
    bit-identical instance.
    """
    if n < 0:
        raise InvalidParams("n must be nonnegative")
    if k < 0 or k > n:
        raise InvalidParams(f"k={k} must satisfy 0 <= k <= n={n}")
    if not (0.0 <= p < q <= 1.0):
        raise InvalidParams(f"need 0 <= p < q <= 1, got p={p} q={q}")
    seed = seed & MASK64

    stream = SplitMix64(seed)
    perm = np.arange(n, dtype=np.int64)
    for i in range(k):
        j = i + stream.next_below(n - i)
        perm[i], perm[j] = perm[j], perm[i]
    planted = VertexSet.from_indices(n, perm[:k])

    w = words_for(n)
    rows = np.zeros((w * WORD_BITS, w), dtype=np.uint64)
    planted_mask = np.zeros(w * WORD_BITS, dtype=np.bool_)
    planted_mask[: n][planted.to_bool()] = True
    if n >= 2:
        _kernels.fill_upper(
            n,
            np.uint64(seed),
            np.uint64(k),
            np.uint64(math.ceil(p * 2**53)),
            np.uint64(math.ceil(q * 2**53)),
            planted_mask,
            rows,
        )
        _kernels.mirror_or(rows, w)
    graph = Graph(n, rows[:n].copy())
    return PlantedInstance(graph=graph, planted=planted, n=n, k=k, p=p, q=q, seed=seed)
