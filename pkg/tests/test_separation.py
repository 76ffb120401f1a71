"""Separation semantics against brute-force path-enumeration oracles."""

import numpy as np
import pytest

from causalicd.graphs import Mark, MixedGraph, NodePartition
from causalicd.separation import (SeparationError, ancestors_of, d_separated,
                                  dag_to_mag, m_separated, validate_mag)
from causalicd.simgen import GenConfig, random_dag

from oracles import (brute_d_separated, brute_inducing_path,
                     brute_m_separated, powerset)


def small_random_dags(n, count, start_seed=0):
    out = []
    seed = start_seed
    while len(out) < count:
        dag, part = random_dag(GenConfig(n_total=n, rho=2.0, seed=seed))
        out.append((dag, part))
        seed += 1
    return out


class TestDSeparation:
    def test_chain(self):
        dag = MixedGraph.from_directed_edges(3, [(0, 1), (1, 2)])
        assert d_separated(dag, 0, 2, {1})
        assert not d_separated(dag, 0, 2, set())

    def test_collider(self):
        dag = MixedGraph.from_directed_edges(3, [(0, 1), (2, 1)])
        assert d_separated(dag, 0, 2, set())
        assert not d_separated(dag, 0, 2, {1})

    def test_collider_descendant_opens(self):
        dag = MixedGraph.from_directed_edges(4, [(0, 1), (2, 1), (1, 3)])
        assert not d_separated(dag, 0, 2, {3})

    def test_matches_brute_force_on_random_dags(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            n = 8
            adj = np.triu(rng.random((n, n)) < 0.3, k=1)
            dag = MixedGraph.from_directed_edges(n, zip(*np.nonzero(adj)))
            for _ in range(25):
                x, y = rng.choice(n, size=2, replace=False)
                rest = [v for v in range(n) if v not in (int(x), int(y))]
                z = {int(v) for v in rng.choice(rest, size=rng.integers(0, 4),
                                                replace=False)}
                assert d_separated(dag, int(x), int(y), z) == \
                    brute_d_separated(dag, int(x), int(y), z)

    def test_symmetry(self):
        dag = MixedGraph.from_directed_edges(4, [(0, 1), (1, 2), (0, 3)])
        for z in ({1}, set(), {3}):
            assert d_separated(dag, 0, 2, z) == d_separated(dag, 2, 0, z)

    def test_query_validation(self):
        dag = MixedGraph.from_directed_edges(2, [(0, 1)])
        with pytest.raises(SeparationError):
            d_separated(dag, 0, 0, set())
        with pytest.raises(SeparationError):
            d_separated(dag, 0, 1, {0})


class TestDagToMag:
    def test_latent_confounder_projects_to_bidirected(self):
        dag = MixedGraph.from_directed_edges(3, [(2, 0), (2, 1)])
        mag = dag_to_mag(dag, NodePartition(observed=(0, 1), latent=(2,)))
        assert mag.mark(0, 1) == Mark.ARROW and mag.mark(1, 0) == Mark.ARROW

    def test_selection_child_projects_to_undirected(self):
        dag = MixedGraph.from_directed_edges(3, [(0, 2), (1, 2)])
        mag = dag_to_mag(dag, NodePartition(observed=(0, 1), selection=(2,)))
        assert mag.mark(0, 1) == Mark.TAIL and mag.mark(1, 0) == Mark.TAIL

    def test_plain_edge_kept_directed(self):
        dag = MixedGraph.from_directed_edges(2, [(0, 1)])
        mag = dag_to_mag(dag, NodePartition(observed=(0, 1)))
        assert mag.mark(1, 0) == Mark.TAIL and mag.mark(0, 1) == Mark.ARROW

    def test_adjacency_equals_inducing_path_search(self):
        for dag, part in small_random_dags(8, 30):
            mag = dag_to_mag(dag, part)
            obs = list(part.observed)
            for i, a in enumerate(obs):
                for j in range(i + 1, len(obs)):
                    b = obs[j]
                    assert mag.has_edge(i, j) == \
                        brute_inducing_path(dag, part, a, b)

    def test_output_is_ancestral(self):
        for dag, part in small_random_dags(8, 20):
            validate_mag(dag_to_mag(dag, part))


class TestValidateMag:
    def test_rejects_circle_marks(self):
        g = MixedGraph.complete(2, Mark.CIRCLE)
        with pytest.raises(SeparationError):
            validate_mag(g)

    def test_rejects_directed_cycle(self):
        g = MixedGraph.from_directed_edges(3, [(0, 1), (1, 2), (2, 0)])
        with pytest.raises(SeparationError):
            validate_mag(g)

    def test_rejects_almost_directed_cycle(self):
        g = MixedGraph.from_directed_edges(3, [(0, 1), (1, 2)])
        g.set_edge(0, 2, Mark.ARROW, Mark.ARROW)
        with pytest.raises(SeparationError):
            validate_mag(g)

    def test_rejects_arrowhead_into_undirected_endpoint(self):
        g = MixedGraph(3)
        g.set_edge(0, 1, Mark.TAIL, Mark.TAIL)
        g.set_edge(2, 1, Mark.TAIL, Mark.ARROW)
        with pytest.raises(SeparationError):
            validate_mag(g)

    def test_accepts_valid_mixed_mag(self):
        g = MixedGraph.from_directed_edges(3, [(0, 1)])
        g.set_edge(1, 2, Mark.ARROW, Mark.ARROW)
        validate_mag(g)


class TestMSeparation:
    def test_direct_bidirected_edge_never_separated(self):
        g = MixedGraph(3)
        g.set_edge(0, 1, Mark.ARROW, Mark.ARROW)
        for z in powerset({2}):
            assert not m_separated(g, 0, 1, z)

    def test_bidirected_chain(self):
        g = MixedGraph(3)
        g.set_edge(0, 2, Mark.ARROW, Mark.ARROW)
        g.set_edge(2, 1, Mark.ARROW, Mark.ARROW)
        assert m_separated(g, 0, 1, set())
        assert not m_separated(g, 0, 1, {2})

    def test_matches_brute_force(self):
        for dag, part in small_random_dags(8, 20, start_seed=100):
            mag = dag_to_mag(dag, part)
            m = mag.num_nodes
            for x in range(m):
                for y in range(x + 1, m):
                    rest = [v for v in range(m) if v not in (x, y)]
                    for z in powerset(rest, 3):
                        assert m_separated(mag, x, y, z) == \
                            brute_m_separated(mag, x, y, z)

    def test_projection_consistency_with_d_separation(self):
        for dag, part in small_random_dags(6, 30, start_seed=200):
            mag = dag_to_mag(dag, part)
            obs = list(part.observed)
            sel = set(part.selection)
            m = len(obs)
            for i in range(m):
                for j in range(i + 1, m):
                    rest = [k for k in range(m) if k not in (i, j)]
                    for z in powerset(rest, 3):
                        dz = {obs[k] for k in z} | sel
                        assert m_separated(mag, i, j, z) == \
                            d_separated(dag, obs[i], obs[j], dz)


class TestAncestors:
    def test_includes_input_nodes(self):
        dag = MixedGraph.from_directed_edges(3, [(0, 1), (1, 2)])
        assert ancestors_of(dag, {2}) == {0, 1, 2}
        assert ancestors_of(dag, {0}) == {0}
