import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import quasirand as q
from quasirand import _kernels
from quasirand.counting import _requirements

from oracles import (
    oracle_induced,
    oracle_induced_phi,
    oracle_induced_sigma,
    oracle_labeled,
    oracle_labeled_tuple,
)


class TestLabeled:
    def test_triangle_in_k4(self):
        assert q.count_labeled(q.complete_graph(4), q.clique(3)) == 24

    def test_edge_in_c4(self):
        assert q.count_labeled(q.cycle_graph(4), q.clique(2)) == 8

    def test_path3_in_c5(self):
        g = q.cycle_graph(5)
        assert q.count_labeled(g, q.path3()) == 10
        assert q.count_labeled(g, q.path3()) == oracle_labeled(g, q.path3())

    def test_small_subset_is_zero(self, k5):
        assert q.count_labeled(k5, q.clique(3), U=[0, 1]) == 0


class TestInduced:
    def test_edge_in_k3(self):
        assert q.count_induced(q.complete_graph(3), q.clique(2)) == 6

    def test_no_induced_path_in_clique(self):
        assert q.count_induced(q.complete_graph(3), q.path3()) == 0

    def test_path3_in_c4(self):
        g = q.cycle_graph(4)
        assert q.count_induced(g, q.path3()) == 8
        assert q.count_induced(g, q.path3()) == oracle_induced(g, q.path3())

    def test_complete_pattern_equals_labeled(self):
        g = q.generate_gnp(9, 0.5, seed=3)
        H = q.clique(3)
        assert q.count_induced(g, H) == q.count_labeled(g, H)

    def test_complement_duality(self):
        g = q.generate_gnp(8, 0.4, seed=5)
        H = q.path3()
        assert q.count_induced(g, H) == q.count_induced(g.complement(), H.complement())


class TestTupleCounts:
    def test_single_edge_present(self):
        g = q.path_graph(2)
        assert q.count_labeled_tuple(g, q.clique(2), [[0], [1]]) == 1

    def test_single_edge_absent(self):
        g = q.empty_graph(2)
        assert q.count_labeled_tuple(g, q.clique(2), [[0], [1]]) == 0

    def test_path_singletons(self):
        g = q.path_graph(3)   # edges 0-1, 1-2
        assert q.count_labeled_tuple(g, q.path3(), [[0], [1], [2]]) == 1

    def test_arity_enforced(self):
        g = q.path_graph(3)
        with pytest.raises(ValueError, match="expected 3"):
            q.count_labeled_tuple(g, q.path3(), [[0], [1]])

    def test_disjointness_enforced(self):
        g = q.path_graph(3)
        with pytest.raises(ValueError, match="disjoint"):
            q.count_labeled_tuple(g, q.path3(), [[0], [0], [2]])


class TestSigma:
    def test_identity_on_path(self):
        g = q.path_graph(3)
        assert q.count_induced_sigma(g, q.path3(), [[0], [1], [2]], (0, 1, 2)) == 1

    def test_swap_places_center_at_leaf(self):
        g = q.path_graph(3)
        # center slot now draws from {0}, a leaf of the host path
        assert q.count_induced_sigma(g, q.path3(), [[0], [1], [2]], (1, 0, 2)) == 0

    def test_edge_between_two_sets_in_k4(self):
        g = q.complete_graph(4)
        sets = [[0, 1], [2, 3]]
        for sigma in ((0, 1), (1, 0)):
            assert q.count_induced_sigma(g, q.clique(2), sets, sigma) == 4

    def test_non_bijective_sigma_rejected(self):
        g = q.path_graph(3)
        with pytest.raises(ValueError, match="permutation"):
            q.count_induced_sigma(g, q.path3(), [[0], [1], [2]], (0, 0, 2))


class TestPhi:
    def test_identity_matches_sigma(self):
        g = q.generate_gnp(9, 0.5, seed=1)
        sets = [[0, 1], [2, 3], [4, 5]]
        H = q.path3()
        assert (q.count_induced_phi(g, H, sets, (0, 1, 2))
                == q.count_induced_sigma(g, H, sets, (0, 1, 2)))

    def test_no_cross_edges(self):
        g = q.empty_graph(4)
        assert q.count_induced_phi(g, q.clique(2), [[0, 1], [2, 3]], (0, 1)) == 0

    def test_three_partite_matches_oracle(self):
        g = q.generate_gnp(12, 0.5, seed=8)
        sets = [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]]
        H = q.path3()
        for phi in ((0, 1, 2), (2, 0, 1), (1, 2, 0)):
            assert (q.count_induced_phi(g, H, sets, phi)
                    == oracle_induced_phi(g, H, sets, phi))

    def test_non_injective_phi_rejected(self):
        g = q.complete_graph(6)
        with pytest.raises(ValueError, match="injective"):
            q.count_induced_phi(g, q.clique(2), [[0], [1], [2]], (1, 1))


class TestWeightedProduct:
    def test_uniform_half_path(self):
        W = q.WeightedCompleteGraph.uniform(4, 0.5)
        assert q.weighted_product(W, q.path3(), (0, 1, 2)) == pytest.approx(0.125)

    def test_zero_weight_annihilates(self):
        W = q.WeightedCompleteGraph.from_pairs(
            3, {(0, 1): 0.0, (0, 2): 0.7, (1, 2): 0.7}
        )
        assert q.weighted_product(W, q.clique(2), (0, 1)) == 0.0

    def test_hub_avoiding_map_hits_reference_density(self):
        W = q.hub_weighted(6, q.cycle4(), 0.3)
        value = q.weighted_product(W, q.cycle4(), (0, 1, 2, 3))
        assert value == pytest.approx(0.3 ** 4 * 0.7 ** 2, abs=1e-15)

    def test_uniform_weight_closed_form(self):
        H = q.star(3)
        for qdens in (0.2, 0.5, 0.8):
            W = q.WeightedCompleteGraph.uniform(5, qdens)
            value = q.weighted_product(W, H, (0, 1, 2, 3))
            assert value == pytest.approx(qdens ** 3 * (1 - qdens) ** 3, rel=1e-12)


class TestOracleAgreement:
    PATTERNS = ["path3", "cycle4", "clique:3", "star:3", "empty:3"]

    @pytest.mark.parametrize("spec", PATTERNS)
    def test_whole_graph_counts(self, spec):
        H = q.parse_pattern(spec)
        for seed in range(6):
            g = q.generate_gnp(8, 0.45, seed=seed)
            assert q.count_labeled(g, H) == oracle_labeled(g, H)
            assert q.count_induced(g, H) == oracle_induced(g, H)

    def test_tuple_variants(self):
        rng = np.random.default_rng(17)
        H = q.path3()
        for seed in range(6):
            g = q.generate_gnp(9, 0.5, seed=seed)
            perm = rng.permutation(9)
            sets = [sorted(int(v) for v in perm[i * 3:(i + 1) * 3]) for i in range(3)]
            sigma = tuple(int(x) for x in rng.permutation(3))
            assert q.count_labeled_tuple(g, H, sets) == oracle_labeled_tuple(g, H, sets)
            assert (q.count_induced_sigma(g, H, sets, sigma)
                    == oracle_induced_sigma(g, H, sets, sigma))

    def test_sigma_sum_matches_all_orders_oracle(self):
        # summing the permuted counts over all sigma covers every way of
        # assigning the pattern across the sets exactly once
        from itertools import permutations

        g = q.generate_gnp(9, 0.5, seed=23)
        H = q.path3()
        sets = [[0, 1, 2], [3, 4, 5], [6, 7, 8]]
        total = sum(q.count_induced_sigma(g, H, sets, s) for s in permutations(range(3)))
        oracle_total = sum(oracle_induced_sigma(g, H, sets, s)
                           for s in permutations(range(3)))
        assert total == oracle_total

    @given(st.integers(0, 2 ** 15 - 1))
    @settings(max_examples=40, deadline=None)
    def test_labeled_edge_count_identity(self, mask):
        edges = [(i, j) for k, (i, j) in enumerate(
            (a, b) for a in range(6) for b in range(a + 1, 6)) if mask >> k & 1]
        g = q.Graph.from_edges(6, edges)
        assert q.count_labeled(g, q.clique(2)) == 2 * g.edge_count()


class TestBackends:
    def test_numpy_fallback_matches_dispatch(self):
        H = q.cycle4()
        g = q.generate_gnp(10, 0.5, seed=4)
        req = _requirements(H, induced=True)
        domains = [np.arange(10, dtype=np.int64)] * 4
        via_dispatch = _kernels.count_embeddings(g.adj, req, domains)
        via_numpy = _kernels._count_embeddings_numpy(g.adj, req, domains)
        assert via_dispatch == via_numpy == oracle_induced(g, H)

    def test_purity(self):
        g = q.generate_gnp(9, 0.5, seed=2)
        H = q.cycle4()
        assert q.count_labeled(g, H) == q.count_labeled(g, H)


def test_requirements_matrix_shape():
    req = _requirements(q.path3(), induced=True)
    assert req[0, 1] == _kernels.REQ_EDGE
    assert req[0, 2] == _kernels.REQ_NONEDGE
    assert req[0, 0] == _kernels.REQ_FREE
    req2 = _requirements(q.path3(), induced=False)
    assert req2[0, 2] == _kernels.REQ_FREE
