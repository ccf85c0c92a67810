"""Brute-force ground truth for the optimizers, plus seeded policy sampling.

Everything here is deliberately naive: exhaustive enumeration over small
instances, used by the test suite to pin down the greedy, matching and flow
based optimizers.  Exceeding a cap is a hard error, never silent truncation.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator
from dataclasses import dataclass

from .chainpart import ChainPartition, chain_secrets
from .netflow import Flow, Network
from .policy import Policy, from_edges, iter_bits
from .treepart import TreePartition, anchors, argmin_weight_parents, total_secrets

TREE_CAP = 7
CHAIN_CAP = 7
WIDTH_CAP = 20
FLOW_UNIT_CAP = 16


class TooLarge(ValueError):
    """The instance exceeds the enumeration cap."""


@dataclass(frozen=True)
class PolicyGenerator:
    """Seeded random-policy parameters; identical fields replay identically."""

    seed: int
    n: int
    density: float


def random_policy(gen: PolicyGenerator) -> Policy:
    """Sample a DAG by flipping a density-biased coin per forward pair.

    Edges are considered in a fixed (i, j < i) order and user counts drawn
    afterwards in label order, so a given generator is fully reproducible.
    """
    if gen.n < 1:
        raise ValueError("need at least one label")
    rng = random.Random(gen.seed)
    edges = [
        (i, j)
        for i in range(gen.n)
        for j in range(i)
        if rng.random() < gen.density
    ]
    users = [rng.randint(1, 5) for _ in range(gen.n)]
    return from_edges(gen.n, edges, users=users)


def enumerate_tree_partitions(p: Policy, cap: int = TREE_CAP) -> Iterator[TreePartition]:
    """Every assignment of each label to one of its covering parents or none."""
    if p.n > cap:
        raise TooLarge(f"{p.n} labels exceeds the tree enumeration cap {cap}")
    options = [[None, *iter_bits(p.cover_parents[z])] for z in range(p.n)]
    for combo in itertools.product(*options):
        yield TreePartition(tuple(combo))


def brute_min_tree_secrets(p: Policy, cap: int = TREE_CAP) -> int:
    """Minimum secret total over every tree partition."""
    return min(
        total_secrets(p, t, anchors(p, t)) for t in enumerate_tree_partitions(p, cap)
    )


def enumerate_minimal_tree_partitions(
    p: Policy, max_count: int = 1_000_000
) -> Iterator[TreePartition]:
    """Every tree partition whose per-label parents all minimize edge weight.

    With positive user counts these are exactly the partitions achieving the
    minimal secret total, so the space is usually tiny.
    """
    options: list[list[int | None]] = []
    count = 1
    for z in range(p.n):
        ys = argmin_weight_parents(p, z)
        opts: list[int | None] = list(ys) if ys else [None]
        count *= len(opts)
        if count > max_count:
            raise TooLarge(f"more than {max_count} minimal tree partitions")
        options.append(opts)
    for combo in itertools.product(*options):
        yield TreePartition(tuple(combo))


def brute_min_leaf_count(p: Policy, max_count: int = 1_000_000) -> int:
    """Fewest leaves over the minimal tree partitions."""
    return min(t.leaf_count() for t in enumerate_minimal_tree_partitions(p, max_count))


def _chains_containing(p: Policy, base: int, allowed: int) -> Iterator[int]:
    """All masks of pairwise-comparable labels within ``allowed`` that hold base."""
    candidates = [
        c for c in iter_bits(allowed) if c != base and p.comparable(c, base)
    ]

    def rec(idx: int, mask: int) -> Iterator[int]:
        if idx == len(candidates):
            yield mask
            return
        c = candidates[idx]
        yield from rec(idx + 1, mask)
        if all(p.comparable(c, m) for m in iter_bits(mask)):
            yield from rec(idx + 1, mask | (1 << c))

    yield from rec(0, 1 << base)


def _ordered_chain(p: Policy, mask: int) -> tuple[int, ...]:
    members = list(iter_bits(mask))
    # rank by how many chain members sit strictly below; top first
    return tuple(sorted(members, key=lambda v: -(p.below[v] & mask).bit_count()))


def enumerate_chain_partitions(p: Policy, cap: int = CHAIN_CAP) -> Iterator[ChainPartition]:
    """Every partition of the labels into chains, top-to-bottom ordered.

    Recursion always extends the block of the lowest uncovered label, so each
    partition is produced exactly once.
    """
    if p.n > cap:
        raise TooLarge(f"{p.n} labels exceeds the chain enumeration cap {cap}")

    def rec(uncovered: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if uncovered == 0:
            yield ()
            return
        base = (uncovered & -uncovered).bit_length() - 1
        for block in _chains_containing(p, base, uncovered):
            ordered = _ordered_chain(p, block)
            for rest in rec(uncovered & ~block):
                yield (ordered, *rest)

    full = (1 << p.n) - 1
    for chains in rec(full):
        yield ChainPartition(chains)


def brute_min_chain_secrets(p: Policy, cap: int = CHAIN_CAP) -> tuple[int, int]:
    """Global minimum of the chain secret total and the fewest chains attaining it."""
    best: tuple[int, int] | None = None
    for c in enumerate_chain_partitions(p, cap):
        entry = (chain_secrets(p, c), c.chain_count())
        if best is None or entry < best:
            best = entry
    if best is None:
        raise ValueError("policy has no labels")
    return best


def brute_width(p: Policy, cap: int = WIDTH_CAP) -> int:
    """Maximum antichain size by branch and bound over the labels."""
    if p.n > cap:
        raise TooLarge(f"{p.n} labels exceeds the width cap {cap}")

    comparable_mask = [
        p.up_mask(x) | p.down_mask(x) for x in range(p.n)
    ]

    best = 0

    def rec(remaining: int, size: int) -> None:
        nonlocal best
        if size + remaining.bit_count() <= best:
            return
        if remaining == 0:
            best = max(best, size)
            return
        x = (remaining & -remaining).bit_length() - 1
        rec(remaining & ~comparable_mask[x], size + 1)
        rec(remaining & ~(1 << x), size)

    rec((1 << p.n) - 1, 0)
    return best


def valid_anchor_sets(p: Policy, t: TreePartition, x: int, cap: int = 5) -> Iterator[frozenset[int]]:
    """Every anchor candidate set for ``x`` meeting the scheme conditions.

    A set qualifies when every dominated label is forest-reachable from some
    member and no member is forest-above a non-dominated label.
    """
    if p.n > cap:
        raise TooLarge(f"{p.n} labels exceeds the anchor enumeration cap {cap}")
    parents = t.parents
    ancestor_mask = [0] * p.n
    for y in range(p.n):
        mask, w = 0, y
        while w is not None:
            mask |= 1 << w
            w = parents[w]
        ancestor_mask[y] = mask

    down = p.down_mask(x)
    for bits in range(1 << p.n):
        members = list(iter_bits(bits))
        ok = True
        for u in iter_bits(down):
            if not any((ancestor_mask[u] >> z) & 1 for z in members):
                ok = False
                break
        if ok:
            for u in range(p.n):
                if (down >> u) & 1:
                    continue
                if any((ancestor_mask[u] >> z) & 1 for z in members):
                    ok = False
                    break
        if ok:
            yield frozenset(members)


def enumerate_integral_flows(net: Network, unit_cap: int = FLOW_UNIT_CAP) -> Iterator[Flow]:
    """All integral flows within bounds that meet every balance."""
    total_units = sum(e.upper for e in net.edges)
    if total_units > unit_cap:
        raise TooLarge(f"{total_units} capacity units exceeds the flow cap {unit_cap}")
    ranges = [range(e.lower, e.upper + 1) for e in net.edges]
    for combo in itertools.product(*ranges):
        shipped = [0] * net.num_nodes
        for e, f in zip(net.edges, combo):
            shipped[e.tail] += f
            shipped[e.head] -= f
        if all(shipped[v] == net.balances[v] for v in range(net.num_nodes)):
            yield Flow(tuple(combo))
