"""Tree partitions of a policy and the weight calculus that prices them.

A tree partition keeps at most one covering parent per label, turning the
policy into an out-forest along which secrets can be chained.  The cost of a
partition is the total number of secrets that must be handed out, which this
module minimizes greedily per label; a matching pass can additionally
minimize the number of forest leaves without giving up that total.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .matching import max_bipartite_matching
from .policy import Policy, iter_bits

AnchorMap = dict[int, frozenset[int]]


class NotComparable(ValueError):
    """The queried pair is not strictly ordered."""


@dataclass(frozen=True)
class TreePartition:
    """Per-label covering parent, ``None`` for forest roots."""

    parents: tuple[int | None, ...]

    def parent_list(self) -> list[int | None]:
        return list(self.parents)

    def parent_map(self) -> dict[int, int | None]:
        return dict(enumerate(self.parents))

    def leaf_count(self) -> int:
        """Labels with no child in the forest."""
        internal = {y for y in self.parents if y is not None}
        return len(self.parents) - len(internal)


def validate_tree_partition(p: Policy, t: TreePartition) -> None:
    if len(t.parents) != p.n:
        raise ValueError(f"partition covers {len(t.parents)} labels, policy has {p.n}")
    for z, y in enumerate(t.parents):
        if y is not None and not p.covers(y, z):
            raise ValueError(f"({y}, {z}) is not a covering edge of the policy")


def secret_audience(p: Policy, y: int, z: int) -> set[int]:
    """Labels whose users still need z's secret when y is chosen as parent.

    These are the labels above ``z`` but not above ``y``; requires ``y > z``.
    """
    if not p.less(z, y):
        raise NotComparable(f"label {y} is not strictly above {z}")
    return set(iter_bits(p.up_mask(z) & ~p.up_mask(y)))


def edge_weight(p: Policy, y: int, z: int) -> int:
    """User-weighted size of ``secret_audience``; 0 when ``y > z`` fails."""
    if not (0 <= y < p.n and 0 <= z < p.n) or not p.less(z, y):
        return 0
    # up-set of y is contained in up-set of z, so the difference telescopes.
    return p.up_weights[z] - p.up_weights[y]


def node_weight(p: Policy, t: TreePartition, z: int) -> int:
    """Number of user-held secrets that label z's choice contributes."""
    validate_tree_partition(p, t)
    y = t.parents[z]
    if y is None:
        return p.up_weights[z]
    return edge_weight(p, y, z)


def anchor_map_for_parents(p: Policy, parents: Sequence[int | None]) -> AnchorMap:
    """Minimal anchor sets for any forest given as a parent list.

    ``z`` anchors ``x`` iff ``z == x``, or ``z < x`` and either ``z`` is a
    forest root or ``x`` does not dominate z's forest parent.  Runs in
    O(n^2) after the closure preprocessing done at policy construction.
    """
    out: AnchorMap = {}
    for x in range(p.n):
        members = 1 << x
        below_x = p.below[x]
        for z in iter_bits(below_x):
            par = parents[z]
            if par is None or (par != x and (below_x >> par) & 1 == 0):
                members |= 1 << z
        out[x] = frozenset(iter_bits(members))
    return out


def anchors(p: Policy, t: TreePartition) -> AnchorMap:
    """Minimal anchor sets for a tree partition: the secrets issued per label."""
    validate_tree_partition(p, t)
    return anchor_map_for_parents(p, t.parents)


def total_secrets(p: Policy, t: TreePartition, anchor_map: Mapping[int, frozenset[int]]) -> int:
    """Total secrets distributed: anchor-set size times users, summed."""
    return sum(len(anchor_map[x]) * p.users[x] for x in range(p.n))


def minimal_tree_partition(p: Policy) -> TreePartition:
    """Tree partition minimizing the total number of distributed secrets.

    Each non-maximal label takes the covering parent of smallest edge weight
    (ties to the lowest index); maximal labels stay roots.  The per-label
    choices are independent, so the greedy result is globally minimal.
    """
    parents: list[int | None] = []
    for z in range(p.n):
        best: int | None = None
        for y in iter_bits(p.cover_parents[z]):
            # minimizing the edge weight means maximizing the parent's up-weight
            if best is None or p.up_weights[y] > p.up_weights[best]:
                best = y
        parents.append(best)
    return TreePartition(tuple(parents))


def argmin_weight_parents(p: Policy, z: int) -> list[int]:
    """Covering parents of ``z`` achieving the minimal edge weight."""
    ys = list(iter_bits(p.cover_parents[z]))
    if not ys:
        return []
    top = max(p.up_weights[y] for y in ys)
    return [y for y in ys if p.up_weights[y] == top]


def optimal_tree_partition(p: Policy) -> TreePartition:
    """Among the minimal tree partitions, one with the fewest leaves.

    Parent choices are restricted to the per-label weight minimizers, so the
    secret total matches ``minimal_tree_partition``.  A label becomes
    internal exactly when some child is matched to it, so maximizing matched
    distinct parents minimizes the leaf count.
    """
    candidates = [argmin_weight_parents(p, z) for z in range(p.n)]
    children = [z for z in range(p.n) if candidates[z]]
    adj = [candidates[z] for z in children]
    _, match = max_bipartite_matching(adj, p.n)
    parents: list[int | None] = [None] * p.n
    for k, z in enumerate(children):
        parents[z] = match[k] if match[k] != -1 else candidates[z][0]
    return TreePartition(tuple(parents))


def max_derivation_steps(
    p: Policy, parents: Sequence[int | None], anchor_map: Mapping[int, frozenset[int]]
) -> int:
    """Longest forest walk any authorized derivation has to perform."""
    best = 0
    for x in range(p.n):
        anchors_x = anchor_map[x]
        for y in iter_bits(p.down_mask(x)):
            steps = 0
            w: int | None = y
            while w is not None and w not in anchors_x:
                w = parents[w]
                steps += 1
            if w is None:
                raise ValueError(f"no anchor of {x} sits above {y} in the forest")
            best = max(best, steps)
    return best


def format_tree_partition(t: TreePartition) -> str:
    """One ``t <child> <parent|->`` line per label."""
    lines = [
        f"t {z} {'-' if y is None else y}"
        for z, y in enumerate(t.parents)
    ]
    return "\n".join(lines) + "\n"


def parse_tree_partition(text: str) -> TreePartition:
    entries: dict[int, int | None] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] != "t" or len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 't <child> <parent|->'")
        try:
            z = int(fields[1])
            y = None if fields[2] == "-" else int(fields[2])
        except ValueError:
            raise ValueError(f"line {lineno}: malformed label id") from None
        if z in entries:
            raise ValueError(f"line {lineno}: duplicate entry for label {z}")
        entries[z] = y
    n = len(entries)
    if set(entries) != set(range(n)):
        raise ValueError("tree partition must list every label 0..n-1 exactly once")
    return TreePartition(tuple(entries[z] for z in range(n)))
