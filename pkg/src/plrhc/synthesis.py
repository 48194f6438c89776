"""Synthetic benchmark models: grid/hub graphs, random potentials, Gibbs data.

The sampler runs a single chain with fixed variable-order sweeps; burn-in
and thinning are counted in full sweeps. An exact joint-distribution
oracle by full state enumeration is provided for small models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .data_model import BinaryDataset, UndirectedGraph
from .errors import InvalidSize, ParseError, TooLarge

__all__ = [
    "PairwiseModel",
    "GibbsConfig",
    "make_grid",
    "make_hub",
    "sample_potentials",
    "exact_joint",
    "gibbs_sample",
    "write_model",
    "load_model",
]


@dataclass(frozen=True)
class PairwiseModel:
    graph: UndirectedGraph
    theta_node: np.ndarray  # per vertex
    theta_edge: dict  # (a, b) with a < b -> float

    def __post_init__(self):
        d = self.graph.n_vertices
        if len(self.theta_node) != d:
            raise InvalidSize(f"need {d} node potentials")
        if set(self.theta_edge) != set(self.graph.edge_set):
            raise InvalidSize("edge potentials must cover exactly the edge set")
        if not (
            np.all(np.isfinite(self.theta_node))
            and all(math.isfinite(v) for v in self.theta_edge.values())
        ):
            raise InvalidSize("potentials must be finite")


@dataclass(frozen=True)
class GibbsConfig:
    n_samples: int
    seed: int
    burn_in: int = 100_000
    thinning: int = 100

    def __post_init__(self):
        if self.burn_in < 0 or self.thinning < 1 or self.n_samples < 1:
            raise InvalidSize("need burn_in >= 0, thinning >= 1, n_samples >= 1")


def make_grid(side: int) -> UndirectedGraph:
    """4-neighbor lattice; vertex (r, c) has index r*side + c."""
    if side < 2:
        raise InvalidSize(f"grid side must be >= 2, got {side}")
    edges = []
    for r in range(side):
        for c in range(side):
            v = r * side + c
            if c + 1 < side:
                edges.append((v, v + 1))
            if r + 1 < side:
                edges.append((v, v + side))
    return UndirectedGraph(side * side, edges)


def make_hub(n_hubs: int, leaves_per_hub: int) -> UndirectedGraph:
    """Path of hub vertices 0..n_hubs-1, each owning its own leaves."""
    if n_hubs < 1 or leaves_per_hub < 1:
        raise InvalidSize("need n_hubs >= 1 and leaves_per_hub >= 1")
    edges = [(h, h + 1) for h in range(n_hubs - 1)]
    for h in range(n_hubs):
        for t in range(leaves_per_hub):
            edges.append((h, n_hubs + h * leaves_per_hub + t))
    return UndirectedGraph(n_hubs * (leaves_per_hub + 1), edges)


def sample_potentials(
    graph: UndirectedGraph,
    seed,
    signed: bool = False,
    node_theta=0.0,
    scale: float = 1.0,
) -> PairwiseModel:
    """Edge potentials i.i.d. uniform times ``scale``, drawn in sorted edge order.

    ``node_theta`` is either a constant or the string ``"centered"``, which
    sets each theta_j to minus half the incident edge mass so that the two
    states of every variable play symmetric roles (marginals near 1/2).
    """
    rng = np.random.default_rng(seed)
    low = -1.0 if signed else 0.0
    theta_edge = {e: scale * float(rng.uniform(low, 1.0)) for e in graph.edges}
    if node_theta == "centered":
        theta_node = np.zeros(graph.n_vertices)
        for (a, b), th in theta_edge.items():
            theta_node[a] -= th / 2.0
            theta_node[b] -= th / 2.0
    else:
        theta_node = np.full(graph.n_vertices, float(node_theta))
    return PairwiseModel(
        graph=graph,
        theta_node=theta_node,
        theta_edge=theta_edge,
    )


def exact_joint(model: PairwiseModel) -> np.ndarray:
    """Probability of every state by enumeration; state index bit j is x_j."""
    d = model.graph.n_vertices
    if d > 20:
        raise TooLarge(f"exact enumeration limited to d <= 20, got {d}")
    states = np.arange(1 << d, dtype=np.int64)
    bits = ((states[:, None] >> np.arange(d)) & 1).astype(np.float64)
    energy = bits @ model.theta_node
    for (a, b), theta in model.theta_edge.items():
        energy += theta * bits[:, a] * bits[:, b]
    energy -= energy.max()  # overflow guard; cancels in normalization
    weights = np.exp(energy)
    return weights / weights.sum()


@njit(cache=True, nogil=True)
def _gibbs_sweeps(state, indptr, indices, weights, theta_node, uniforms):
    n_sweeps, d = uniforms.shape
    for t in range(n_sweeps):
        for j in range(d):
            eta = theta_node[j]
            for k in range(indptr[j], indptr[j + 1]):
                eta += weights[k] * state[indices[k]]
            p = 1.0 / (1.0 + math.exp(-eta))
            state[j] = 1 if uniforms[t, j] < p else 0


def _model_csr(model: PairwiseModel):
    g = model.graph
    indptr = np.zeros(g.n_vertices + 1, dtype=np.int64)
    indices = []
    weights = []
    for j in range(g.n_vertices):
        for v in g.neighbors(j):
            indices.append(v)
            weights.append(model.theta_edge[(min(j, v), max(j, v))])
        indptr[j + 1] = len(indices)
    return (
        indptr,
        np.array(indices, dtype=np.int64),
        np.array(weights, dtype=np.float64),
    )


def gibbs_sample(model: PairwiseModel, cfg: GibbsConfig) -> BinaryDataset:
    d = model.graph.n_vertices
    rng = np.random.default_rng(cfg.seed)
    indptr, indices, weights = _model_csr(model)
    theta_node = np.asarray(model.theta_node, dtype=np.float64)
    state = (rng.random(d) < 0.5).astype(np.uint8)

    chunk = 8192
    remaining = cfg.burn_in
    while remaining > 0:
        step = min(chunk, remaining)
        _gibbs_sweeps(state, indptr, indices, weights, theta_node, rng.random((step, d)))
        remaining -= step

    rows = np.empty((cfg.n_samples, d), dtype=np.uint8)
    for i in range(cfg.n_samples):
        _gibbs_sweeps(
            state, indptr, indices, weights, theta_node, rng.random((cfg.thinning, d))
        )
        rows[i] = state
    return BinaryDataset(rows)


# ---------------------------------------------------------------------------
# model files


def write_model(model: PairwiseModel, path) -> None:
    with open(path, "w") as fh:
        for j in range(model.graph.n_vertices):
            fh.write(f"node\t{j}\t{model.theta_node[j]:.17g}\n")
        for (a, b), theta in sorted(model.theta_edge.items()):
            fh.write(f"edge\t{a}\t{b}\t{theta:.17g}\n")


def load_model(path) -> PairwiseModel:
    nodes = {}
    edges = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if parts[0] == "node" and len(parts) == 3:
                nodes[int(parts[1])] = float(parts[2])
            elif parts[0] == "edge" and len(parts) == 4:
                edges[(int(parts[1]), int(parts[2]))] = float(parts[3])
            else:
                raise ParseError(lineno, 1, line)
    d = max(nodes) + 1 if nodes else 0
    theta_node = np.zeros(d)
    for j, v in nodes.items():
        theta_node[j] = v
    return PairwiseModel(
        graph=UndirectedGraph(d, edges.keys()),
        theta_node=theta_node,
        theta_edge=edges,
    )
