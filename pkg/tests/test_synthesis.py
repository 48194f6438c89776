import itertools
import math

import networkx as nx
import numpy as np
import pytest

from plrhc import (
    GibbsConfig,
    PairwiseModel,
    UndirectedGraph,
    exact_joint,
    gibbs_sample,
    make_grid,
    make_hub,
    sample_potentials,
)
from plrhc.errors import InvalidSize, TooLarge
from plrhc.synthesis import load_model, write_model

from helpers import conditional_from_joint, random_model


class TestGenerators:
    def test_grid_counts(self):
        g = make_grid(4)
        assert g.n_vertices == 16 and g.n_edges == 24

    def test_grid16_ordered_distance_one_pairs(self):
        g = make_grid(16)
        assert 2 * g.n_edges == 960

    def test_grid_degrees(self):
        g = make_grid(5)
        degrees = sorted(g.degree(v) for v in range(25))
        assert degrees.count(2) == 4  # corners
        assert degrees.count(4) == 9  # interior

    def test_grid_too_small(self):
        with pytest.raises(InvalidSize):
            make_grid(1)

    def test_hub_tree_counts(self):
        g = make_hub(8, 7)
        assert g.n_vertices == 64 and g.n_edges == 63
        g = make_hub(64, 7)
        assert g.n_vertices == 512 and g.n_edges == 511

    def test_hub_connected_acyclic(self):
        g = make_hub(5, 3)
        nxg = nx.Graph(g.edges)
        nxg.add_nodes_from(range(g.n_vertices))
        assert nx.is_connected(nxg)
        assert nx.is_forest(nxg)

    def test_single_hub_is_star(self):
        g = make_hub(1, 6)
        assert g.degree(0) == 6
        assert all(g.degree(v) == 1 for v in range(1, 7))

    def test_handshake(self):
        for g in (make_grid(6), make_hub(4, 5)):
            assert sum(g.degree(v) for v in range(g.n_vertices)) == 2 * g.n_edges


class TestPotentials:
    def test_support_and_reproducibility(self):
        g = make_grid(3)
        m1 = sample_potentials(g, seed=123)
        m2 = sample_potentials(g, seed=123)
        assert m1.theta_edge == m2.theta_edge
        assert all(0.0 < v < 1.0 for v in m1.theta_edge.values())
        assert np.all(m1.theta_node == 0.0)

    def test_signed_flag(self):
        m = sample_potentials(make_grid(4), seed=1, signed=True)
        assert any(v < 0 for v in m.theta_edge.values())
        assert all(-1.0 < v < 1.0 for v in m.theta_edge.values())

    def test_edgeless_graph(self):
        m = sample_potentials(UndirectedGraph(3, []), seed=0)
        assert m.theta_edge == {}

    def test_potentials_must_cover_edges(self):
        with pytest.raises(InvalidSize):
            PairwiseModel(UndirectedGraph(2, [(0, 1)]), np.zeros(2), {})


class TestExactJoint:
    def test_single_free_variable(self):
        m = PairwiseModel(UndirectedGraph(1, []), np.zeros(1), {})
        assert exact_joint(m).tolist() == [0.5, 0.5]

    def test_two_variable_hand_case(self):
        m = PairwiseModel(
            UndirectedGraph(2, [(0, 1)]), np.zeros(2), {(0, 1): math.log(2)}
        )
        assert exact_joint(m) == pytest.approx([0.2, 0.2, 0.2, 0.4], abs=1e-15)

    def test_normalization(self):
        for seed in range(5):
            p = exact_joint(random_model(4, seed))
            assert abs(p.sum() - 1.0) < 1e-12
            assert np.all(p > 0)

    def test_too_large(self):
        with pytest.raises(TooLarge):
            exact_joint(random_model(21, 0, edge_prob=0.0))

    def test_conditionals_match_sigmoid_form(self):
        # full conditionals derived from the enumerated joint must equal
        # the local logistic form used by the Gibbs kernel
        for seed in range(5):
            model = random_model(4, seed)
            joint = exact_joint(model)
            for j in range(4):
                others_idx = [v for v in range(4) if v != j]
                for assignment in itertools.product((0, 1), repeat=3):
                    others = dict(zip(others_idx, assignment))
                    eta = model.theta_node[j]
                    for v, val in others.items():
                        e = (min(j, v), max(j, v))
                        if e in model.theta_edge:
                            eta += model.theta_edge[e] * val
                    sigmoid = 1.0 / (1.0 + math.exp(-eta))
                    assert conditional_from_joint(joint, j, others) == pytest.approx(
                        sigmoid, abs=1e-12
                    )


class TestGibbs:
    def test_edgeless_fair_coins(self):
        m = PairwiseModel(UndirectedGraph(4, []), np.zeros(4), {})
        n = 4000
        data = gibbs_sample(m, GibbsConfig(n_samples=n, seed=3, burn_in=100, thinning=1))
        for j in range(4):
            mean = data.column(j).mean()
            assert abs(mean - 0.5) < 4 * math.sqrt(0.25 / n)

    def test_skewed_marginal(self):
        m = PairwiseModel(UndirectedGraph(2, []), np.array([1.0, -1.0]), {})
        data = gibbs_sample(m, GibbsConfig(n_samples=5000, seed=4, burn_in=100, thinning=1))
        target = 1.0 / (1.0 + math.exp(-1.0))
        assert abs(data.column(0).mean() - target) < 0.03
        assert abs(data.column(1).mean() - (1 - target)) < 0.03

    def test_reproducible(self):
        m = random_model(5, 9)
        cfg = GibbsConfig(n_samples=200, seed=42, burn_in=500, thinning=3)
        assert gibbs_sample(m, cfg) == gibbs_sample(m, cfg)

    def test_dimensions(self):
        m = random_model(6, 10)
        data = gibbs_sample(m, GibbsConfig(n_samples=37, seed=0, burn_in=10, thinning=2))
        assert data.n_rows == 37 and data.n_cols == 6

    def test_chain_matches_exact_joint(self):
        from helpers import chain_model

        model = chain_model(3, strength=1.0, alternate=False)
        n = 20000
        data = gibbs_sample(model, GibbsConfig(n_samples=n, seed=11))
        codes = sum(data.column(j).astype(int) << j for j in range(3))
        empirical = np.bincount(codes, minlength=8) / n
        tv = 0.5 * np.abs(empirical - exact_joint(model)).sum()
        assert tv < 0.02


class TestModelFiles:
    def test_round_trip(self, tmp_path):
        model = random_model(5, 13)
        path = tmp_path / "model.tsv"
        write_model(model, path)
        loaded = load_model(path)
        assert loaded.graph == model.graph
        assert loaded.theta_edge == model.theta_edge
        assert np.array_equal(loaded.theta_node, model.theta_node)
