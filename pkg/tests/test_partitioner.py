import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dircomm.graph import UndirectedWeightedGraph
from dircomm.partitioner import (Partition, PartitionConfig, coarsen, initial_partition,
                                 max_imbalance, partition, rebalance, refine, weighted_cut)
from dircomm.weighting import apply_scheme

from conftest import random_weighted, weighted_graphs


def cliques(*sizes, bridges=()):
    edges, start = [], 0
    for s in sizes:
        edges += itertools.combinations(range(start, start + s), 2)
        start += s
    return UndirectedWeightedGraph.from_edges(start, edges + list(bridges))


def min_balanced_bisection(g, cfg):
    """Exhaustive minimum cut over all 2-way partitions within the weight bound."""
    maxpw = cfg.max_part_weight(g.total_vweight)
    best = None
    for bits in range(1, 2 ** (g.n - 1)):
        a = np.array([(bits >> i) & 1 for i in range(g.n)])
        sizes = np.bincount(a, weights=g.vweights, minlength=2)
        if sizes.max() <= maxpw:
            c = weighted_cut(g, a)
            best = c if best is None else min(best, c)
    return best


class TestConfig:
    def test_rejects_k_below_two(self):
        with pytest.raises(ValueError):
            PartitionConfig(k=1)

    def test_rejects_imbalance_below_one(self):
        with pytest.raises(ValueError):
            PartitionConfig(k=2, imbalance=0.9)

    def test_max_part_weight(self):
        assert PartitionConfig(k=5).max_part_weight(297) == math.floor(1.03 * 60)
        assert PartitionConfig(k=2).max_part_weight(10) == 5


class TestCoarsen:
    def test_single_edge(self):
        lvl = coarsen(UndirectedWeightedGraph.from_edges(2, [(0, 1)]))
        assert lvl.graph.n == 1 and lvl.graph.vweights.tolist() == [2]

    @pytest.mark.parametrize("order", [[0, 1, 2], [1, 0, 2], [1, 2, 0], [0, 2, 1]])
    def test_heavy_edge_wins(self, order):
        g = UndirectedWeightedGraph.from_edges(3, [(0, 1), (1, 2)], [5, 1])
        lvl = coarsen(g, order=order)
        assert lvl.matches == [(0, 1)]
        assert lvl.graph.n == 2 and sorted(lvl.graph.vweights.tolist()) == [1, 2]

    def test_ties_go_to_lowest_id(self):
        g = UndirectedWeightedGraph.from_edges(4, [(0, 3), (0, 2), (0, 1)], [2, 2, 2])
        assert coarsen(g, order=[0, 1, 2, 3]).matches == [(0, 1)]

    def test_weight_cap(self):
        g = UndirectedWeightedGraph.from_edges(2, [(0, 1)], vweights=[2, 2])
        assert coarsen(g, max_vweight=3).graph.n == 2

    @given(weighted_graphs(), st.integers(0, 100))
    def test_aggregation(self, g, seed):
        lvl = coarsen(g, seed)
        c = lvl.graph
        assert c.n >= math.ceil(g.n / 2)
        assert c.total_vweight == g.total_vweight
        assert np.array_equal(c.vweights, np.bincount(lvl.mapping, weights=g.vweights,
                                                      minlength=c.n))
        # coarse edge weight = summed fine weights between the merged sets
        u, v, w = g.edge_list()
        expected = {}
        for a, b, x in zip(lvl.mapping[u].tolist(), lvl.mapping[v].tolist(), w.tolist()):
            if a != b:
                key = (min(a, b), max(a, b))
                expected[key] = expected.get(key, 0) + x
        cu, cv, cw = c.edge_list()
        assert dict(zip(zip(cu.tolist(), cv.tolist()), cw.tolist())) == expected

    @given(weighted_graphs(min_n=2), st.integers(0, 100), st.integers(2, 4))
    def test_projection_preserves_cut(self, g, seed, k):
        lvl = coarsen(g, seed)
        coarse = np.random.default_rng(seed).integers(0, k, lvl.graph.n)
        assert weighted_cut(g, coarse[lvl.mapping]) == weighted_cut(lvl.graph, coarse)


class TestInitialPartition:
    def test_two_disjoint_cliques(self):
        g = cliques(5, 5)
        cfg = PartitionConfig(k=2)
        assert min_balanced_bisection(g, cfg) == 0
        for seed in range(10):
            p = initial_partition(g, cfg, np.random.default_rng(seed))
            assert weighted_cut(g, p.assignment) == 0
            assert sorted(p.sizes().tolist()) == [5, 5]

    def test_k_equals_n(self):
        g = cliques(4)
        p = initial_partition(g, PartitionConfig(k=4))
        assert sorted(p.assignment.tolist()) == [0, 1, 2, 3]

    def test_k_above_n(self):
        with pytest.raises(ValueError):
            initial_partition(cliques(3), PartitionConfig(k=4))

    @given(weighted_graphs(min_n=3), st.integers(2, 3), st.integers(0, 50))
    def test_covers_every_node_and_part(self, g, k, seed):
        p = initial_partition(g, PartitionConfig(k=k, seed=seed))
        assert p.n == g.n and set(p.assignment.tolist()) == set(range(k))


class TestRefine:
    def test_split_clique_is_repaired(self):
        g = cliques(5, 5, bridges=[(4, 5)])
        cfg = PartitionConfig(k=2, imbalance=1.2)
        p = Partition(np.array([0, 0, 0, 0, 1, 1, 1, 1, 1, 0]), 2)
        before = weighted_cut(g, p.assignment)
        after = weighted_cut(g, refine(g, p, cfg).assignment)
        assert after < before

    def test_optimal_partition_unchanged(self):
        g = cliques(5, 5, bridges=[(4, 5)])
        p = Partition(np.repeat([0, 1], 5), 2)
        assert refine(g, p, PartitionConfig(k=2)) == p

    @given(weighted_graphs(min_n=4), st.integers(2, 4), st.integers(0, 50))
    def test_monotone_and_tracked(self, g, k, seed):
        cfg = PartitionConfig(k=k, seed=seed, imbalance=1.5)
        p = Partition.from_assignment(np.arange(g.n) % k)
        hist = []
        q = refine(g, p, cfg, history=hist)
        assert all(b <= a for a, b in zip(hist, hist[1:]))
        assert hist[0] == weighted_cut(g, p.assignment)
        assert hist[-1] == weighted_cut(g, q.assignment)
        assert q.sizes(g.vweights).max() <= max(cfg.max_part_weight(g.total_vweight),
                                                p.sizes(g.vweights).max())


class TestRebalance:
    def test_overweight_part_drained(self):
        g = cliques(6)
        cfg = PartitionConfig(k=2)
        p = rebalance(g, Partition(np.array([0, 0, 0, 0, 0, 1]), 2), cfg)
        assert p.sizes().max() <= cfg.max_part_weight(6)


class TestPartition:
    def test_two_disjoint_cliques(self):
        g = cliques(5, 5)
        for seed in range(5):
            p = partition(g, PartitionConfig(k=2, seed=seed))
            assert weighted_cut(g, p.assignment) == 0

    def test_k_equals_n_identity(self):
        assert partition(cliques(3), PartitionConfig(k=3)).assignment.tolist() == [0, 1, 2]

    def test_k_above_n(self):
        with pytest.raises(ValueError):
            partition(cliques(3), PartitionConfig(k=4))

    def test_isolated_nodes_go_to_lightest(self):
        g = UndirectedWeightedGraph.from_edges(8, list(itertools.combinations(range(6), 2)))
        p = partition(g, PartitionConfig(k=2))
        assert sorted(p.sizes().tolist()) == [4, 4]

    def test_celegans_five_way(self, celegans):
        ug = apply_scheme(celegans, "three_cycle")
        cfg = PartitionConfig(k=5, seed=3)
        p = partition(ug, cfg)
        assert p.k == 5 and (p.sizes() > 0).all()
        assert p.sizes().max() <= 1.03 * math.ceil(297 / 5)
        assert max_imbalance(ug, p) <= 1.03
        assert partition(ug, cfg) == p

    def test_matches_exhaustive_optimum_on_small_graphs(self, rng):
        hits = 0
        for _ in range(20):
            g = random_weighted(rng, 10, 0.35)
            if g.num_edges == 0:
                continue
            cfg = PartitionConfig(k=2, imbalance=1.2)
            p = partition(g, cfg)
            opt = min_balanced_bisection(g, cfg)
            assert p.sizes().max() <= cfg.max_part_weight(g.n)
            assert weighted_cut(g, p.assignment) >= opt
            hits += weighted_cut(g, p.assignment) == opt
        assert hits >= 10

    @given(weighted_graphs(min_n=4), st.integers(2, 4), st.integers(0, 20))
    def test_contract(self, g, k, seed):
        cfg = PartitionConfig(k=k, seed=seed)
        hist = []
        p = partition(g, cfg, history=hist)
        assert p.n == g.n and p.k == k
        assert set(p.assignment.tolist()) == set(range(k))
        for trace in hist:
            assert all(b <= a for a, b in zip(trace, trace[1:]))
        assert partition(g, cfg) == p
