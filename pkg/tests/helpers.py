"""Independent oracles shared by the test modules.

Everything here evaluates from first principles (row-by-row scans, dense
grid search, full enumeration) and deliberately avoids the library's
contingency/Newton code paths.
"""

import numpy as np

from plrhc import BinaryDataset, PairwiseModel, UndirectedGraph, exact_joint


def rowwise_loglik(X, j, blanket, beta):
    """Logistic log-likelihood evaluated row by row from the raw matrix."""
    eta = np.full(X.shape[0], beta[0], dtype=np.float64)
    for b, v in enumerate(blanket):
        eta += beta[b + 1] * X[:, v]
    y = X[:, j].astype(np.float64)
    return float(-(y * np.logaddexp(0.0, -eta) + (1.0 - y) * np.logaddexp(0.0, eta)).sum())


def grid_search_loglik(X, j, blanket, half_width=10.0, final_step=2e-5):
    """Best log-likelihood over a zooming dense beta grid.

    Starts on [-half_width, half_width]^p with 21 points per axis and
    re-centers/refines until the step drops to final_step or below.
    """
    p = len(blanket) + 1
    y = X[:, j].astype(np.float64)
    A = np.ones((X.shape[0], p))
    for b, v in enumerate(blanket):
        A[:, b + 1] = X[:, v]
    # rows sharing a blanket configuration share eta, so collapse them to
    # weighted counts; the objective is unchanged
    configs, inverse = np.unique(A, axis=0, return_inverse=True)
    n1 = np.bincount(inverse, weights=y, minlength=len(configs))
    n0 = np.bincount(inverse, weights=1.0 - y, minlength=len(configs))
    center = np.zeros(p)
    hw = half_width
    best_ll, best_beta = -np.inf, center
    while True:
        axes = [center[i] + np.linspace(-hw, hw, 21) for i in range(p)]
        grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
        eta = grid @ configs.T
        ll = -(n1 * np.logaddexp(0.0, -eta) + n0 * np.logaddexp(0.0, eta)).sum(axis=1)
        k = int(np.argmax(ll))
        if ll[k] > best_ll:
            best_ll, best_beta = float(ll[k]), grid[k]
        center = grid[k]
        step = hw / 10.0
        if step <= final_step:
            return best_ll, best_beta
        hw = 2.0 * step  # new window spans the neighboring old grid points


def sample_from_joint(model, n, seed):
    """Exact i.i.d. samples for small models, bypassing the Gibbs chain."""
    p = exact_joint(model)
    rng = np.random.default_rng(seed)
    states = rng.choice(len(p), size=n, p=p)
    d = model.graph.n_vertices
    bits = ((states[:, None] >> np.arange(d)) & 1).astype(np.uint8)
    return BinaryDataset(bits)


def conditional_from_joint(joint, j, others):
    """p(x_j = 1 | x_rest) computed from an enumerated joint table."""
    d = int(np.log2(len(joint)))
    idx0 = 0
    for v, val in others.items():
        idx0 |= int(val) << v
    p1 = joint[idx0 | (1 << j)]
    p0 = joint[idx0]
    return p1 / (p0 + p1)


def random_model(d, seed, magnitude=1.0, edge_prob=0.5):
    """Random graph on d vertices with signed uniform potentials."""
    rng = np.random.default_rng(seed)
    edges = [
        (a, b)
        for a in range(d)
        for b in range(a + 1, d)
        if rng.random() < edge_prob
    ]
    theta_edge = {e: float(rng.uniform(-magnitude, magnitude)) for e in edges}
    theta_node = rng.uniform(-0.5, 0.5, size=d)
    return PairwiseModel(
        graph=UndirectedGraph(d, edges),
        theta_node=theta_node,
        theta_edge=theta_edge,
    )


def chain_model(d, seed=None, strength=2.0, alternate=True):
    """Path graph with strong edge potentials of alternating sign."""
    edges = [(i, i + 1) for i in range(d - 1)]
    theta_edge = {}
    for k, e in enumerate(edges):
        sign = -1.0 if (alternate and k % 2) else 1.0
        theta_edge[e] = sign * strength
    return PairwiseModel(
        graph=UndirectedGraph(d, edges),
        theta_node=np.zeros(d),
        theta_edge=theta_edge,
    )


def random_binary_matrix(n, d, seed, p_low=0.2, p_high=0.8):
    rng = np.random.default_rng(seed)
    probs = rng.uniform(p_low, p_high, size=d)
    return (rng.random((n, d)) < probs).astype(np.uint8)
