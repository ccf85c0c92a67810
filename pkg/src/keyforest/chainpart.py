"""Chain partitions of a policy and the flow formulation that optimizes them.

A chain partition covers the labels with disjoint chains drawn from the full
order (not only covering edges).  Its secret total depends only on the chain
bottoms, which lets a unit-capacity min-cost flow pick the partition that is
simultaneously cheapest and as narrow as the policy's width.
"""

from __future__ import annotations

from dataclasses import dataclass

from .netflow import Flow, FlowEdge, Network, min_cost_flow
from .policy import Policy, iter_bits, width
from .treepart import AnchorMap, anchor_map_for_parents


class InvalidPartition(ValueError):
    """The chains do not disjointly cover the labels or are not descending."""


class MalformedFlow(ValueError):
    """A flow does not decompose into vertex-disjoint chains."""


@dataclass(frozen=True)
class ChainPartition:
    """Disjoint chains, each listed from top to bottom."""

    chains: tuple[tuple[int, ...], ...]

    def n_labels(self) -> int:
        return sum(len(c) for c in self.chains)

    def chain_count(self) -> int:
        return len(self.chains)

    def bottoms(self) -> list[int]:
        return [chain[-1] for chain in self.chains]

    def parent_list(self) -> list[int | None]:
        """Per-label chain predecessor, ``None`` for chain tops."""
        parents: list[int | None] = [None] * self.n_labels()
        for chain in self.chains:
            for k in range(1, len(chain)):
                parents[chain[k]] = chain[k - 1]
        return parents

    def parent_map(self) -> dict[int, int | None]:
        return dict(enumerate(self.parent_list()))

    def leaf_count(self) -> int:
        return len(self.chains)


def validate_chain_partition(p: Policy, c: ChainPartition) -> None:
    seen = 0
    for chain in c.chains:
        if not chain:
            raise InvalidPartition("empty chain")
        for x in chain:
            if not 0 <= x < p.n:
                raise InvalidPartition(f"label {x} outside 0..{p.n - 1}")
            if (seen >> x) & 1:
                raise InvalidPartition(f"label {x} appears in more than one chain")
            seen |= 1 << x
        for a, b in zip(chain, chain[1:]):
            if not p.less(b, a):
                raise InvalidPartition(f"{a} does not lie strictly above {b}")
    if seen != (1 << p.n) - 1:
        raise InvalidPartition("chains do not cover every label")


def chain_secrets(p: Policy, c: ChainPartition) -> int:
    """Total secrets the partition hands out: up-set weight of each bottom."""
    validate_chain_partition(p, c)
    return sum(p.up_weights[b] for b in c.bottoms())


def chain_anchors(p: Policy, c: ChainPartition) -> AnchorMap:
    """Minimal anchor sets under the chain order: at most one per chain."""
    validate_chain_partition(p, c)
    return anchor_map_for_parents(p, c.parent_list())


def _chain_edges(p: Policy) -> list[FlowEdge]:
    """Canonical edge layout of the chain-representation network.

    Node ids: ``x`` is the entry copy of label x, ``n + x`` its exit copy,
    ``2n`` the source, ``2n + 1`` the sink.  The layout does not depend on
    the requested chain count, only the balances do.
    """
    n = p.n
    source, sink = 2 * n, 2 * n + 1
    edges = [FlowEdge(x, n + x, 1, 1, 0) for x in range(n)]
    for x in range(n):
        for y in iter_bits(p.below[x]):
            edges.append(FlowEdge(n + x, y, 0, 1, 0))
    edges.extend(FlowEdge(source, x, 0, 1, 0) for x in range(n))
    edges.extend(FlowEdge(n + x, sink, 0, 1, p.up_weights[x]) for x in range(n))
    return edges


def build_chain_network(p: Policy, w: int) -> Network:
    """Unit-capacity network whose min-cost flow encodes a best chain cover.

    Every label is split into an entry/exit pair forced to carry one unit;
    descents in the order become free unit edges; leaving the network at a
    label's exit costs that label's up-set weight (it becomes a bottom).
    ``w`` units are pushed from source to sink, one per chain.
    """
    n = p.n
    balances = [0] * (2 * n) + [w, -w]
    return Network(2 * n + 2, tuple(_chain_edges(p)), tuple(balances))


def flow_to_chain_partition(p: Policy, f: Flow) -> ChainPartition:
    """Decompose the unit edges of a feasible chain-network flow into chains."""
    n = p.n
    edges = _chain_edges(p)
    if len(f.values) != len(edges):
        raise MalformedFlow("flow does not match the chain network layout")
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    tops: list[int] = []
    for e, value in zip(edges, f.values):
        if value not in (0, 1):
            raise MalformedFlow(f"edge ({e.tail}, {e.head}) carries {value}, expected 0 or 1")
        if e.tail < n and e.head == n + e.tail:
            if value != 1:
                raise MalformedFlow(f"label {e.tail} is not routed through the network")
        elif e.tail == 2 * n and value == 1:
            tops.append(e.head)
        elif e.tail >= n and e.head < n and value == 1:
            x, y = e.tail - n, e.head
            if x in succ or y in pred:
                raise MalformedFlow("unit edges do not form vertex-disjoint paths")
            succ[x] = y
            pred[y] = x
    chains: list[tuple[int, ...]] = []
    visited = 0
    for top in sorted(tops):
        if top in pred:
            raise MalformedFlow(f"chain top {top} also has a predecessor")
        chain = [top]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        for x in chain:
            if (visited >> x) & 1:
                raise MalformedFlow(f"label {x} reached twice during decomposition")
            visited |= 1 << x
        chains.append(tuple(chain))
    if visited != (1 << n) - 1:
        raise MalformedFlow("unit edges leave some labels uncovered")
    return ChainPartition(tuple(chains))


def minimal_chain_partition(p: Policy) -> ChainPartition:
    """Chain partition with exactly ``width(p)`` chains and minimal secrets.

    The minimum over all chain partitions of any chain count is already
    attained at the policy's width, so the flow is solved once with that
    many units.
    """
    if p.n == 0:
        return ChainPartition(())
    w = width(p)
    net = build_chain_network(p, w)
    return flow_to_chain_partition(p, min_cost_flow(net))


def format_chain_partition(c: ChainPartition) -> str:
    """One ``c <top> > ... > <bottom>`` line per chain."""
    lines = ["c " + " > ".join(str(x) for x in chain) for chain in c.chains]
    return "\n".join(lines) + "\n"


def parse_chain_partition(text: str) -> ChainPartition:
    chains: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("c"):
            raise ValueError(f"line {lineno}: expected 'c <top> > ... > <bottom>'")
        body = line[1:].strip()
        try:
            chain = tuple(int(tok.strip()) for tok in body.split(">"))
        except ValueError:
            raise ValueError(f"line {lineno}: malformed label id") from None
        if not chain:
            raise ValueError(f"line {lineno}: empty chain")
        chains.append(chain)
    return ChainPartition(tuple(chains))
