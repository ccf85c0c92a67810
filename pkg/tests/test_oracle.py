"""The brute-force enumerations themselves: counts, caps and determinism."""

import pytest

from conftest import seeded_corpus
from keyforest import from_edges, interval_poset, serialize_policy, width
from keyforest.oracle import (
    PolicyGenerator,
    TooLarge,
    brute_min_chain_secrets,
    brute_min_tree_secrets,
    brute_width,
    enumerate_chain_partitions,
    enumerate_minimal_tree_partitions,
    enumerate_tree_partitions,
    random_policy,
)


class TestTreeEnumeration:
    def test_chain_of_three(self):
        p = from_edges(3, [(2, 1), (1, 0)])
        assert sum(1 for _ in enumerate_tree_partitions(p)) == 4

    def test_antichain(self):
        p = from_edges(3, [])
        assert sum(1 for _ in enumerate_tree_partitions(p)) == 1

    def test_diamond_product_formula(self, diamond):
        count = sum(1 for _ in enumerate_tree_partitions(diamond))
        expected = 1
        for z in range(diamond.n):
            expected *= 1 + len(diamond.parents_of(z))
        assert count == expected == 12

    def test_cap(self):
        with pytest.raises(TooLarge):
            list(enumerate_tree_partitions(interval_poset(4)))

    def test_partitions_are_distinct(self, diamond):
        seen = {t.parents for t in enumerate_tree_partitions(diamond)}
        assert len(seen) == 12


class TestBruteTreeSecrets:
    def test_diamond(self, diamond):
        assert brute_min_tree_secrets(diamond) == 5

    def test_chain(self):
        p = from_edges(4, [(3, 2), (2, 1), (1, 0)])
        assert brute_min_tree_secrets(p) == 4

    def test_interval3(self):
        assert brute_min_tree_secrets(interval_poset(3)) == 7


class TestChainEnumeration:
    def test_antichain_single_partition(self):
        p = from_edges(3, [])
        parts = list(enumerate_chain_partitions(p))
        assert len(parts) == 1
        assert parts[0].chains == ((0,), (1,), (2,))

    def test_chain_of_three(self):
        # every subset of a total order is a chain, so all 5 set partitions work
        p = from_edges(3, [(2, 1), (1, 0)])
        parts = {c.chains for c in enumerate_chain_partitions(p)}
        assert len(parts) == 5
        assert ((2, 0), (1,)) in parts

    def test_interval2_contains_optimum(self):
        p = interval_poset(2)
        top = p.label_for("[1,2]")
        left = p.label_for("[1,1]")
        right = p.label_for("[2,2]")
        assert ((top, left), (right,)) in {c.chains for c in enumerate_chain_partitions(p)}

    def test_no_duplicates(self, diamond):
        parts = [c.chains for c in enumerate_chain_partitions(diamond)]
        assert len(parts) == len(set(parts))

    def test_cap(self):
        with pytest.raises(TooLarge):
            list(enumerate_chain_partitions(interval_poset(4)))


class TestBruteChainSecrets:
    def test_interval2(self):
        assert brute_min_chain_secrets(interval_poset(2)) == (4, 2)

    def test_chain(self):
        p = from_edges(3, [(2, 1), (1, 0)], users=[2, 2, 2])
        assert brute_min_chain_secrets(p) == (6, 1)

    def test_diamond(self, diamond):
        assert brute_min_chain_secrets(diamond) == (6, 2)


class TestBruteWidth:
    def test_antichain(self):
        assert brute_width(from_edges(5, [])) == 5

    def test_interval5(self):
        assert brute_width(interval_poset(5)) == 5

    def test_agrees_with_matching_width(self):
        for p in seeded_corpus(30, max_n=7, seed0=4000):
            assert brute_width(p) == width(p)

    def test_cap(self):
        with pytest.raises(TooLarge):
            brute_width(from_edges(25, []))


class TestRandomPolicy:
    def test_density_zero_is_antichain(self):
        p = random_policy(PolicyGenerator(5, 6, 0.0))
        assert p.num_order_pairs() == 0

    def test_density_one_is_chain(self):
        p = random_policy(PolicyGenerator(5, 6, 1.0))
        assert p.num_cover_edges() == 5
        assert width(p) == 1

    def test_seed_reproducibility(self):
        gen = PolicyGenerator(seed=42, n=8, density=0.4)
        assert serialize_policy(random_policy(gen)) == serialize_policy(random_policy(gen))

    def test_different_seeds_differ(self):
        a = random_policy(PolicyGenerator(1, 8, 0.4))
        b = random_policy(PolicyGenerator(2, 8, 0.4))
        assert serialize_policy(a) != serialize_policy(b)

    def test_user_range(self):
        p = random_policy(PolicyGenerator(9, 10, 0.3))
        assert all(1 <= u <= 5 for u in p.users)


class TestMinimalTreeEnumeration:
    def test_restricted_to_weight_minimizers(self, diamond):
        parts = list(enumerate_minimal_tree_partitions(diamond))
        assert {t.parents for t in parts} == {(1, 3, 3, None), (2, 3, 3, None)}

    def test_count_cap(self):
        wide = from_edges(
            12,
            [(i, j) for i in range(6, 12) for j in range(6)],
        )
        with pytest.raises(TooLarge):
            list(enumerate_minimal_tree_partitions(wide, max_count=10))
