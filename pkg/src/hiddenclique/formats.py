"""Graph files: the HCG-EDGES v1 text format and the HCBM v1 bit-matrix format.

HCG-EDGES v1: first line ``n m``, then m lines ``u v`` with 0 <= u < v < n,
ASCII decimal, LF line endings. HCBM v1: 8-byte magic ``HCBM0001``, a
little-endian u64 vertex count, then n rows of ceil(n/64) little-endian u64
words. An instance may carry a JSON sidecar ``{n, k, p, q, seed, planted}``
next to the graph file. Round trips are bit-exact; decoding validates
symmetry, the zero diagonal, and clean padding.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FormatError
from .graph import Graph, PlantedInstance, VertexSet, words_for

HCBM_MAGIC = b"HCBM0001"
SIDECAR_SUFFIX = ".json"


def write_edges_text(graph: Graph, path: str | Path) -> None:
    """Write HCG-EDGES v1; edges in canonical (u < v, lexicographic) order."""
    lines = []
    for u in range(graph.n):
        row = np.unpackbits(graph.words[u].view(np.uint8), bitorder="little")[: graph.n]
        for v in np.nonzero(row)[0]:
            if v > u:
                lines.append(f"{u} {v}\n")
    with open(path, "w", newline="") as fh:
        fh.write(f"{graph.n} {len(lines)}\n")
        fh.writelines(lines)


def read_edges_text(path: str | Path) -> Graph:
    with open(path, "r", newline="") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise FormatError(f"bad header {header!r}: expected 'n m'")
        try:
            n, m = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"non-integer header {header!r}") from exc
        if n < 0 or m < 0:
            raise FormatError("negative count in header")
        dense = np.zeros((n, n), dtype=bool)
        count = 0
        for line in fh:
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"bad edge line {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise FormatError(f"non-integer edge line {line!r}") from exc
            if not (0 <= u < v < n):
                raise FormatError(f"edge ({u}, {v}) violates 0 <= u < v < n={n}")
            dense[u, v] = dense[v, u] = True
            count += 1
        if count != m:
            raise FormatError(f"header says {m} edges, file has {count}")
    graph = Graph.from_dense(dense)
    graph.validate()
    return graph


def write_bit_matrix(graph: Graph, path: str | Path) -> None:
    """Write HCBM v1."""
    with open(path, "wb") as fh:
        fh.write(HCBM_MAGIC)
        fh.write(np.uint64(graph.n).astype("<u8").tobytes())
        fh.write(graph.words.astype("<u8").tobytes())


def read_bit_matrix(path: str | Path) -> Graph:
    data = Path(path).read_bytes()
    if len(data) < 16 or data[:8] != HCBM_MAGIC:
        raise FormatError("missing HCBM0001 magic")
    n = int(np.frombuffer(data[8:16], dtype="<u8")[0])
    if n > (1 << 32):
        raise FormatError(f"vertex count {n} is implausibly large")
    w = words_for(n)
    expected = 16 + n * w * 8
    if len(data) != expected:
        raise FormatError(f"file is {len(data)} bytes, HCBM with n={n} needs {expected}")
    words = np.frombuffer(data[16:], dtype="<u8").astype(np.uint64).reshape(n, w)
    graph = Graph(n, words)
    graph.validate()
    return graph


def graph_bytes(graph: Graph) -> bytes:
    """Canonical byte serialization (the HCBM payload); useful for hashing."""
    return HCBM_MAGIC + np.uint64(graph.n).astype("<u8").tobytes() + graph.words.astype("<u8").tobytes()


def write_sidecar(instance: PlantedInstance, path: str | Path) -> None:
    meta = {
        "n": instance.n,
        "k": instance.k,
        "p": instance.p,
        "q": instance.q,
        "seed": instance.seed,
        "planted": [int(v) for v in instance.planted.indices()],
    }
    Path(path).write_text(json.dumps(meta, sort_keys=True) + "\n")


def read_sidecar(path: str | Path) -> dict:
    try:
        meta = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"sidecar {path} is not valid JSON") from exc
    for key in ("n", "k", "p", "q", "seed", "planted"):
        if key not in meta:
            raise FormatError(f"sidecar {path} is missing {key!r}")
    return meta


def save_instance(instance: PlantedInstance, path: str | Path, fmt: str = "bits") -> Path:
    """Write the graph file plus its JSON sidecar; returns the graph path."""
    path = Path(path)
    if fmt == "bits":
        write_bit_matrix(instance.graph, path)
    elif fmt == "edges":
        write_edges_text(instance.graph, path)
    else:
        raise FormatError(f"unknown format {fmt!r}")
    write_sidecar(instance, path.with_suffix(path.suffix + SIDECAR_SUFFIX))
    return path


def load_graph(path: str | Path) -> Graph:
    """Read either format, sniffing the HCBM magic."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head == HCBM_MAGIC:
        return read_bit_matrix(path)
    return read_edges_text(path)


def load_instance(path: str | Path) -> tuple[Graph, dict | None]:
    """Read a graph plus its sidecar metadata when present."""
    path = Path(path)
    graph = load_graph(path)
    sidecar = path.with_suffix(path.suffix + SIDECAR_SUFFIX)
    meta = read_sidecar(sidecar) if sidecar.exists() else None
    if meta is not None and meta["n"] != graph.n:
        raise FormatError(f"sidecar n={meta['n']} does not match graph n={graph.n}")
    return graph, meta


def planted_from_meta(graph: Graph, meta: dict) -> VertexSet:
    return VertexSet.from_indices(graph.n, meta["planted"])
