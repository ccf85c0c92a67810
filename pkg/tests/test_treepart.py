"""Tree partitions: weights, anchors, and the greedy/matching optimizers."""

import pytest

from conftest import DIAMOND_EDGES, seeded_corpus
from interval5_data import EDGE_WEIGHTS, NODE_WEIGHTS, TREE_PARENTS
from keyforest import (
    NotComparable,
    TreePartition,
    anchors,
    edge_weight,
    format_tree_partition,
    from_edges,
    interval_poset,
    minimal_tree_partition,
    node_weight,
    optimal_tree_partition,
    parse_tree_partition,
    secret_audience,
    total_secrets,
    validate_tree_partition,
)
from keyforest.oracle import (
    brute_min_leaf_count,
    brute_min_tree_secrets,
    enumerate_minimal_tree_partitions,
    enumerate_tree_partitions,
    valid_anchor_sets,
)


def interval5_tree():
    p = interval_poset(5)
    parents = tuple(
        None if TREE_PARENTS[p.aliases[z]] is None else p.label_for(TREE_PARENTS[p.aliases[z]])
        for z in range(p.n)
    )
    return p, TreePartition(parents)


class TestSecretAudience:
    def test_interval5_examples(self):
        p = interval_poset(5)
        assert len(secret_audience(p, p.label_for("[1,2]"), p.label_for("[2,2]"))) == 4
        assert len(secret_audience(p, p.label_for("[1,3]"), p.label_for("[2,3]"))) == 3

    def test_diamond(self, diamond):
        assert secret_audience(diamond, 1, 0) == {0, 2}

    def test_not_comparable(self, diamond):
        with pytest.raises(NotComparable):
            secret_audience(diamond, 1, 2)
        with pytest.raises(NotComparable):
            secret_audience(diamond, 0, 3)

    def test_strictly_grows_down_a_chain(self):
        # audience of (ancestor, z) strictly contains audience of (parent, z)
        for p in seeded_corpus(25, max_n=6, seed0=700):
            for x in range(p.n):
                for y in range(p.n):
                    if not p.less(y, x):
                        continue
                    for z in range(p.n):
                        if not p.less(z, y):
                            continue
                        inner = secret_audience(p, y, z)
                        outer = secret_audience(p, x, z)
                        assert inner < outer


class TestEdgeWeight:
    def test_interval5_full_table(self):
        p = interval_poset(5)
        seen = {}
        for parent, child in p.hasse_edges():
            seen[(p.aliases[parent], p.aliases[child])] = edge_weight(p, parent, child)
        assert seen == EDGE_WEIGHTS

    def test_zero_when_not_above(self, diamond):
        assert edge_weight(diamond, 1, 2) == 0
        assert edge_weight(diamond, 0, 3) == 0

    def test_diamond_weighted_users(self):
        d = from_edges(4, DIAMOND_EDGES, users={2: 3})
        assert edge_weight(d, 1, 0) == 4  # bottom's unit user plus the three at label 2

    def test_matches_audience_user_sum(self):
        for p in seeded_corpus(25, max_n=6, seed0=800):
            for parent, child in p.hasse_edges():
                expected = sum(p.users[x] for x in secret_audience(p, parent, child))
                assert edge_weight(p, parent, child) == expected


class TestNodeWeight:
    def test_interval5_values(self):
        p, t = interval5_tree()
        got = {p.aliases[z]: node_weight(p, t, z) for z in range(p.n)}
        assert got == NODE_WEIGHTS
        assert sum(got.values()) == 22

    def test_singleton(self):
        p = from_edges(1, [], users=[7])
        t = TreePartition((None,))
        assert node_weight(p, t, 0) == 7

    def test_diamond_bottom(self, diamond):
        t = minimal_tree_partition(diamond)
        assert node_weight(diamond, t, 0) == 2


class TestAnchors:
    def test_full_chain_gives_singletons(self):
        p = from_edges(3, [(2, 1), (1, 0)])
        t = TreePartition((1, 2, None))
        assert anchors(p, t) == {0: frozenset({0}), 1: frozenset({1}), 2: frozenset({2})}

    def test_diamond_detour(self, diamond):
        # with bottom chained under label 1, label 2's users also need bottom's secret
        t = TreePartition((1, 3, 3, None))
        assert anchors(diamond, t)[2] == frozenset({0, 2})

    def test_interval5_total(self):
        p, t = interval5_tree()
        a = anchors(p, t)
        assert sum(len(a[x]) for x in range(p.n)) == 22

    def test_self_membership_and_domination(self):
        for p in seeded_corpus(20, max_n=6, seed0=900):
            t = minimal_tree_partition(p)
            a = anchors(p, t)
            for x in range(p.n):
                assert x in a[x]
                assert all(p.leq(z, x) for z in a[x])

    def test_each_authorized_label_has_unique_anchor(self):
        for p in seeded_corpus(20, max_n=6, seed0=950):
            for t in enumerate_tree_partitions(p):
                a = anchors(p, t)
                for x in range(p.n):
                    for y in range(p.n):
                        if not p.leq(y, x):
                            continue
                        hits = 0
                        w = y
                        while w is not None:
                            if w in a[x]:
                                hits += 1
                            w = t.parents[w]
                        assert hits == 1

    def test_minimality_against_every_valid_scheme(self):
        corpus = [from_edges(4, DIAMOND_EDGES)] + seeded_corpus(8, max_n=5, seed0=650)
        for p in corpus:
            for t in enumerate_tree_partitions(p):
                a = anchors(p, t)
                for x in range(p.n):
                    for candidate in valid_anchor_sets(p, t, x):
                        assert a[x] <= candidate

    def test_validation_rejects_non_cover_edges(self, diamond):
        with pytest.raises(ValueError):
            anchors(diamond, TreePartition((3, 3, 3, None)))  # (3,0) is not a cover


class TestTotalSecrets:
    def test_unit_users_count_anchor_sizes(self):
        p, t = interval5_tree()
        a = anchors(p, t)
        assert total_secrets(p, t, a) == sum(len(a[x]) for x in range(p.n))

    def test_interval5(self):
        p, t = interval5_tree()
        assert total_secrets(p, t, anchors(p, t)) == 22

    def test_diamond_minimum(self, diamond):
        t = minimal_tree_partition(diamond)
        assert total_secrets(diamond, t, anchors(diamond, t)) == 5


class TestMinimalTreePartition:
    def test_chain_poset_keeps_the_chain(self):
        p = from_edges(4, [(3, 2), (2, 1), (1, 0)], users=[2, 1, 3, 1])
        t = minimal_tree_partition(p)
        assert t.parents == (1, 2, 3, None)
        assert total_secrets(p, t, anchors(p, t)) == sum(p.users)

    def test_interval5_matches_expected_tree(self):
        p, expected = interval5_tree()
        t = minimal_tree_partition(p)
        assert t == expected
        assert total_secrets(p, t, anchors(p, t)) == 22

    def test_equals_brute_force_on_corpus(self):
        for p in seeded_corpus(40, max_n=6, seed0=1100):
            t = minimal_tree_partition(p)
            assert total_secrets(p, t, anchors(p, t)) == brute_min_tree_secrets(p)

    def test_root_iff_maximal(self):
        for p in seeded_corpus(30, max_n=6, seed0=1200):
            t = minimal_tree_partition(p)
            for z in range(p.n):
                assert (t.parents[z] is None) == p.is_maximal(z)

    def test_identity_secret_total_vs_node_weights(self):
        for p in seeded_corpus(25, max_n=6, seed0=1300):
            for t in enumerate_tree_partitions(p):
                total = total_secrets(p, t, anchors(p, t))
                assert total == sum(node_weight(p, t, z) for z in range(p.n))


class TestOptimalTreePartition:
    def test_chain_poset(self):
        p = from_edges(3, [(2, 1), (1, 0)])
        t = optimal_tree_partition(p)
        assert t.parents == (1, 2, None)
        assert t.leaf_count() == 1

    def test_shared_argmin_parent_forces_spread(self):
        # two children share one cheapest parent; spreading to distinct
        # parents keeps the total while saving a leaf
        p = from_edges(
            6,
            [(3, 0), (4, 0), (3, 1), (4, 1), (5, 3), (5, 4)],
            users=[1, 1, 1, 1, 1, 1],
        )
        t = optimal_tree_partition(p)
        m = minimal_tree_partition(p)
        a_t = total_secrets(p, t, anchors(p, t))
        a_m = total_secrets(p, m, anchors(p, m))
        assert a_t == a_m
        assert t.leaf_count() == brute_min_leaf_count(p)
        assert t.leaf_count() <= m.leaf_count()

    def test_interval5_leaf_count_is_brute_minimum(self):
        p = interval_poset(5)
        t = optimal_tree_partition(p)
        assert total_secrets(p, t, anchors(p, t)) == 22
        assert t.leaf_count() == brute_min_leaf_count(p)

    def test_corpus_secrets_and_leaves(self):
        for p in seeded_corpus(40, max_n=6, seed0=1400):
            t = optimal_tree_partition(p)
            m = minimal_tree_partition(p)
            assert total_secrets(p, t, anchors(p, t)) == total_secrets(p, m, anchors(p, m))
            best = brute_min_leaf_count(p)
            assert t.leaf_count() == best
            for candidate in enumerate_minimal_tree_partitions(p):
                assert t.leaf_count() <= candidate.leaf_count()


class TestDumpFormat:
    def test_round_trip(self, diamond):
        t = minimal_tree_partition(diamond)
        assert parse_tree_partition(format_tree_partition(t)) == t

    def test_format_shape(self):
        t = TreePartition((1, None))
        assert format_tree_partition(t) == "t 0 1\nt 1 -\n"

    def test_rejects_gaps(self):
        with pytest.raises(ValueError):
            parse_tree_partition("t 0 -\nt 2 -\n")

    def test_validate_checks_length(self, diamond):
        with pytest.raises(ValueError):
            validate_tree_partition(diamond, TreePartition((None,)))
