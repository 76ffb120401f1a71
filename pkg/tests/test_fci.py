"""Two-stage baseline: skeleton search, reachability sets, full runs."""

from causalicd.citest import OracleCiTester
from causalicd.fci import fci, pc_skeleton, possible_d_sep
from causalicd.graphs import Mark, MixedGraph, NodePartition
from causalicd.icd import IcdConfig, enumerate_icd_sep, icd
from causalicd.orientation import orient_v_structures
from causalicd.separation import dag_to_mag
from causalicd.simgen import GenConfig, random_dag

from oracles import worked_example


def oracle_for(edges, n, **partition):
    dag = MixedGraph.from_directed_edges(n, edges)
    part = NodePartition(**partition) if partition else \
        NodePartition(observed=tuple(range(n)))
    return OracleCiTester(dag, part)


class TestPcSkeleton:
    def test_chain(self):
        ci = oracle_for([(0, 1), (1, 2)], 3)
        g, sepsets = pc_skeleton(ci, 3)
        assert sorted(g.edges()) == [(0, 1), (1, 2)]
        assert sepsets.get(0, 2) == frozenset({1})

    def test_collider(self):
        ci = oracle_for([(0, 1), (2, 1)], 3)
        g, sepsets = pc_skeleton(ci, 3)
        assert sorted(g.edges()) == [(0, 1), (1, 2)]
        assert sepsets.get(0, 2) == frozenset()

    def test_worked_example_level_two_spends_eleven_tests(self):
        dag, part, _ = worked_example()
        ci = OracleCiTester(dag, part)
        pc_skeleton(ci, 7)
        assert ci.counters_snapshot()[2] == 11


class TestPossibleDSep:
    def test_no_colliders_no_triangles_gives_neighbors(self):
        # star around 0 with circle marks: reachability stops at depth 1
        g = MixedGraph(4)
        for v in (1, 2, 3):
            g.set_edge(0, v, Mark.CIRCLE, Mark.CIRCLE)
        assert possible_d_sep(g, 1) == {0}
        assert possible_d_sep(g, 0) == {1, 2, 3}

    def test_collider_chain_reaches_far_node(self):
        g = MixedGraph(3)
        g.set_edge(0, 1, Mark.CIRCLE, Mark.ARROW)
        g.set_edge(2, 1, Mark.CIRCLE, Mark.ARROW)
        assert possible_d_sep(g, 0) == {1, 2}

    def test_superset_of_icd_candidates(self):
        seed = 0
        for _ in range(15):
            dag, part = random_dag(GenConfig(n_total=7, rho=2.0, seed=seed))
            seed += 1
            m = len(part.observed)
            ci = OracleCiTester(dag, part)
            skel, sepsets = pc_skeleton(ci, m)
            g = orient_v_structures(skel, sepsets)
            cfg = IcdConfig(use_condition_3=False)
            for a, b in g.edges():
                pool = possible_d_sep(g, a) | possible_d_sep(g, b)
                for r in (1, 2, 3):
                    for cand in enumerate_icd_sep(g, a, b, r, cfg):
                        assert cand.nodes <= pool


class TestFci:
    def test_empty_truth(self):
        ci = oracle_for([], 4)
        pag, trace = fci(ci, 4)
        assert pag.num_edges() == 0
        assert trace.stage2_counts == {}
        assert trace.total() == ci.total_tests()

    def test_trace_totals_add_up(self):
        dag, part, _ = worked_example()
        ci = OracleCiTester(dag, part)
        _, trace = fci(ci, 7)
        assert trace.total_counts() == ci.counters_snapshot()

    def test_worked_example_stage_accounting(self):
        dag, part, _ = worked_example()
        _, trace = fci(OracleCiTester(dag, part), 7)
        assert sum(v for k, v in trace.stage1_counts.items() if k >= 2) == 11
        assert sum(v for k, v in trace.stage2_counts.items() if k >= 2) == 76
        assert max(trace.stage2_counts) == 4

    def test_skeleton_equals_true_mag(self):
        for seed in range(8):
            dag, part = random_dag(GenConfig(n_total=10, rho=2.0, seed=seed))
            pag, _ = fci(OracleCiTester(dag, part), len(part.observed))
            assert pag.skeletons_equal(dag_to_mag(dag, part))

    def test_equals_icd_on_oracle_instances(self):
        for seed in range(5):
            dag, part = random_dag(GenConfig(n_total=11, rho=2.0, seed=seed + 50))
            m = len(part.observed)
            pag_f, _ = fci(OracleCiTester(dag, part), m)
            pag_i, _, _ = icd(OracleCiTester(dag, part), m)
            assert pag_f.marks_equal(pag_i)
