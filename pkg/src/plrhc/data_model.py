"""Binary dataset storage and the undirected graph type.

Datasets are immutable 0/1 matrices with bit-packed columns so that
configuration counting reduces to word-wise AND plus population count.
Graphs are immutable edge sets with sorted adjacency lists; all vertex
indices are 0-based, in memory and in files.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    BlanketTooLarge,
    EmptyInput,
    InvalidBlanket,
    ParseError,
    ShapeError,
)

# Above this blanket size the packed-word recursion is abandoned for a
# row-streaming bincount; above the hard cap the table is refused outright.
SOFT_BLANKET_CAP = 12
HARD_BLANKET_CAP = 25

#: Shortest-path distance value used for unreachable pairs.
UNREACHABLE = math.inf


class BinaryDataset:
    """Immutable N x d matrix of {0,1} observations, column-packed."""

    def __init__(self, matrix):
        X = np.ascontiguousarray(matrix, dtype=np.uint8)
        if X.ndim != 2:
            raise ShapeError(f"expected a 2-D matrix, got ndim={X.ndim}")
        n, d = X.shape
        if n < 1:
            raise EmptyInput("dataset needs at least one row")
        if d < 2:
            raise ShapeError(f"dataset needs at least 2 columns, got {d}")
        if X.max(initial=0) > 1:
            raise ShapeError("dataset values must be 0 or 1")
        self._X = X
        self._X.setflags(write=False)
        # One packed row per column, MSB-first within each byte, zero padded.
        self._packed = np.packbits(X.T, axis=1)
        self._packed.setflags(write=False)
        self._full_mask = np.packbits(np.ones(n, dtype=np.uint8))
        self._full_mask.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self._X.shape[0]

    @property
    def n_cols(self) -> int:
        return self._X.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self._X[:, j]

    def packed_column(self, j: int) -> np.ndarray:
        return self._packed[j]

    @property
    def packed_columns(self) -> np.ndarray:
        """(d, ceil(N/8)) uint8 matrix, one packed column per row."""
        return self._packed

    @property
    def full_mask(self) -> np.ndarray:
        return self._full_mask

    def ones_count(self, j: int) -> int:
        return int(popcount(self._packed[j]))

    def __eq__(self, other):
        return isinstance(other, BinaryDataset) and np.array_equal(self._X, other._X)

    def __repr__(self):
        return f"BinaryDataset(n_rows={self.n_rows}, n_cols={self.n_cols})"


def popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum())


@dataclass(frozen=True)
class ContingencyTable:
    """Configuration counts for (x_j, x_S); bit 0 of the index is x_j."""

    target: int
    conditioners: tuple
    counts: np.ndarray
    n_rows: int


def count_configurations(data: BinaryDataset, j: int, S) -> ContingencyTable:
    S = tuple(S)
    if j in S or len(set(S)) != len(S):
        raise InvalidBlanket(f"target {j} overlaps blanket {S}")
    if len(S) > HARD_BLANKET_CAP:
        raise BlanketTooLarge(f"blanket size {len(S)} exceeds cap {HARD_BLANKET_CAP}")
    for v in (j,) + S:
        if not 0 <= v < data.n_cols:
            raise IndexError(f"variable index {v} out of range for d={data.n_cols}")
    S = tuple(sorted(S))
    if len(S) <= SOFT_BLANKET_CAP:
        counts = _counts_packed(data, (j,) + S)
    else:
        counts = _counts_streaming(data, (j,) + S)
    return ContingencyTable(target=j, conditioners=S, counts=counts, n_rows=data.n_rows)


def _counts_packed(data: BinaryDataset, variables) -> np.ndarray:
    # Recurse from the highest-order bit so the flat result is indexed by
    # the configuration code directly.
    def rec(mask, b):
        if b < 0:
            return [popcount(mask)]
        col = data.packed_column(variables[b])
        return rec(mask & ~col, b - 1) + rec(mask & col, b - 1)

    return np.array(rec(data.full_mask, len(variables) - 1), dtype=np.int64)


def _counts_streaming(data: BinaryDataset, variables) -> np.ndarray:
    codes = np.zeros(data.n_rows, dtype=np.int64)
    for b, v in enumerate(variables):
        codes |= data.column(v).astype(np.int64) << b
    return np.bincount(codes, minlength=1 << len(variables))


# ---------------------------------------------------------------------------
# dataset files


def load_dataset(path, format: str = "space") -> BinaryDataset:
    sep = {"space": None, "csv": ","}[format]
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tokens = line.split(sep)
            if width is None:
                width = len(tokens)
            elif len(tokens) != width:
                raise ShapeError(
                    f"row {lineno} has {len(tokens)} tokens, expected {width}"
                )
            row = []
            for colno, tok in enumerate(tokens, start=1):
                if tok == "0":
                    row.append(0)
                elif tok == "1":
                    row.append(1)
                else:
                    raise ParseError(lineno, colno, tok)
            rows.append(row)
    if not rows:
        raise EmptyInput(f"no observations in {path}")
    if width < 2:
        raise ShapeError(f"rows must have at least 2 tokens, got {width}")
    return BinaryDataset(np.array(rows, dtype=np.uint8))


def write_dataset(data: BinaryDataset, path, format: str = "space") -> None:
    sep = {"space": " ", "csv": ","}[format]
    with open(path, "w") as fh:
        for i in range(data.n_rows):
            fh.write(sep.join("1" if v else "0" for v in data._X[i]))
            fh.write("\n")


# ---------------------------------------------------------------------------
# graphs


class UndirectedGraph:
    """Immutable undirected graph on vertices 0..d-1 without self-loops."""

    def __init__(self, n_vertices: int, edges=()):
        if n_vertices < 1:
            raise ShapeError("graph needs at least one vertex")
        normalized = set()
        for a, b in edges:
            if a == b:
                raise ShapeError(f"self-loop at vertex {a}")
            if not (0 <= a < n_vertices and 0 <= b < n_vertices):
                raise IndexError(f"edge ({a}, {b}) out of range for d={n_vertices}")
            normalized.add((min(a, b), max(a, b)))
        self._n = n_vertices
        self._edges = frozenset(normalized)
        adjacency = [[] for _ in range(n_vertices)]
        for a, b in normalized:
            adjacency[a].append(b)
            adjacency[b].append(a)
        self._adjacency = tuple(tuple(sorted(nb)) for nb in adjacency)

    @property
    def n_vertices(self) -> int:
        return self._n

    @property
    def edges(self):
        return sorted(self._edges)

    @property
    def edge_set(self):
        return self._edges

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def neighbors(self, j: int):
        return self._adjacency[j]

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._edges

    def degree(self, j: int) -> int:
        return len(self._adjacency[j])

    def __eq__(self, other):
        return (
            isinstance(other, UndirectedGraph)
            and self._n == other._n
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return f"UndirectedGraph(n_vertices={self._n}, n_edges={self.n_edges})"


def bfs_within(graph: UndirectedGraph, source: int, radius: int):
    """All vertices other than ``source`` within graph distance ``radius``."""
    if not 0 <= source < graph.n_vertices:
        raise IndexError(f"source {source} out of range")
    seen = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        if seen[v] == radius:
            continue
        for w in graph.neighbors(v):
            if w not in seen:
                seen[w] = seen[v] + 1
                queue.append(w)
    return sorted(v for v in seen if v != source)


def single_source_distances(graph: UndirectedGraph, source: int) -> np.ndarray:
    dist = np.full(graph.n_vertices, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in graph.neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def distance_class(dist) -> object:
    """Collapse a shortest-path distance into the class {1,2,3,4,5,inf}.

    The value 5 stands for "5 or more"; unreachable pairs map to inf.
    """
    if dist is UNREACHABLE or dist < 0 or dist == math.inf:
        return UNREACHABLE
    if dist >= 5:
        return 5
    return int(dist)


def graph_distances(graph: UndirectedGraph, pair_source: UndirectedGraph) -> dict:
    """Distance class in ``graph`` for every unordered vertex pair.

    ``pair_source`` only pins the vertex count the two graphs must share
    (the estimate graph in distance-stratified reports).
    """
    if graph.n_vertices != pair_source.n_vertices:
        raise ShapeError(
            f"vertex count mismatch: {graph.n_vertices} vs {pair_source.n_vertices}"
        )
    out = {}
    for a in range(graph.n_vertices):
        dist = single_source_distances(graph, a)
        for b in range(a + 1, graph.n_vertices):
            out[(a, b)] = distance_class(int(dist[b]) if dist[b] >= 0 else UNREACHABLE)
    return out


# ---------------------------------------------------------------------------
# graph files


def write_graph(graph: UndirectedGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# d={graph.n_vertices}\n")
        for a, b in graph.edges:
            fh.write(f"{a} {b}\n")


def load_graph(path) -> UndirectedGraph:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# d="):
            raise ParseError(1, 1, header)
        n = int(header[4:])
        edges = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(lineno, 1, line)
            edges.append((int(parts[0]), int(parts[1])))
    return UndirectedGraph(n, edges)
