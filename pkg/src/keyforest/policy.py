"""Information flow policies as finite partial orders over integer labels.

A policy stores the strict order (transitive closure), its covering relation
(transitive reduction) and a non-negative user count per label.  Relations
are kept as per-label bitmasks, so comparability tests are O(1) and the set
algebra used by the partition optimizers runs at word speed.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass

from .matching import max_bipartite_matching


class CycleDetected(ValueError):
    """The input edges contain a directed cycle."""


class IndexOutOfRange(IndexError):
    """An edge or query references a label outside ``0..n-1``."""


class PolicySyntaxError(ValueError):
    """A policy file line could not be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Policy:
    """An immutable information flow policy on labels ``0..n-1``.

    ``below[x]`` has bit ``y`` set iff ``y < x``; ``above`` is its transpose.
    ``cover_children[x]`` marks the labels covered by ``x`` (the transitive
    reduction), ``cover_parents`` its transpose.  ``up_weights[x]`` caches the
    total user count over ``{t : t >= x}``, the quantity every partition cost
    in this package is built from.
    """

    n: int
    below: tuple[int, ...]
    above: tuple[int, ...]
    cover_children: tuple[int, ...]
    cover_parents: tuple[int, ...]
    users: tuple[int, ...]
    aliases: tuple[str | None, ...]
    up_weights: tuple[int, ...]

    def _check_label(self, x: int) -> None:
        if not 0 <= x < self.n:
            raise IndexOutOfRange(f"label {x} not in 0..{self.n - 1}")

    def less(self, y: int, x: int) -> bool:
        """True iff ``y < x`` in the strict order."""
        self._check_label(x)
        self._check_label(y)
        return (self.below[x] >> y) & 1 == 1

    def leq(self, y: int, x: int) -> bool:
        return x == y and 0 <= x < self.n or self.less(y, x)

    def comparable(self, x: int, y: int) -> bool:
        return x == y or self.less(x, y) or self.less(y, x)

    def covers(self, parent: int, child: int) -> bool:
        """True iff ``parent`` covers ``child`` (a Hasse edge)."""
        self._check_label(parent)
        self._check_label(child)
        return (self.cover_children[parent] >> child) & 1 == 1

    def parents_of(self, z: int) -> list[int]:
        self._check_label(z)
        return list(iter_bits(self.cover_parents[z]))

    def children_of(self, x: int) -> list[int]:
        self._check_label(x)
        return list(iter_bits(self.cover_children[x]))

    def is_maximal(self, x: int) -> bool:
        self._check_label(x)
        return self.above[x] == 0

    def maximal_labels(self) -> list[int]:
        return [x for x in range(self.n) if self.above[x] == 0]

    def up_mask(self, x: int) -> int:
        """Bitmask of ``{t : t >= x}`` including ``x`` itself."""
        self._check_label(x)
        return self.above[x] | (1 << x)

    def down_mask(self, x: int) -> int:
        self._check_label(x)
        return self.below[x] | (1 << x)

    def up_weight(self, x: int) -> int:
        """Total user count over all labels ``>= x``."""
        self._check_label(x)
        return self.up_weights[x]

    def hasse_edges(self) -> list[tuple[int, int]]:
        """All covering edges as (parent, child) pairs, sorted."""
        return [(p, c) for p in range(self.n) for c in iter_bits(self.cover_children[p])]

    def num_cover_edges(self) -> int:
        return sum(m.bit_count() for m in self.cover_children)

    def num_order_pairs(self) -> int:
        return sum(m.bit_count() for m in self.below)

    def name_of(self, x: int) -> str:
        self._check_label(x)
        alias = self.aliases[x]
        return alias if alias is not None else str(x)

    def label_for(self, token: str) -> int:
        """Resolve a CLI token (alias or decimal index) to a label."""
        for i, alias in enumerate(self.aliases):
            if alias == token:
                return i
        try:
            x = int(token)
        except ValueError:
            raise ValueError(f"unknown label {token!r}") from None
        self._check_label(x)
        return x


def _normalize_users(n: int, users: Mapping[int, int] | Sequence[int] | None) -> tuple[int, ...]:
    out = [1] * n
    if users is None:
        return tuple(out)
    items = users.items() if isinstance(users, Mapping) else enumerate(users)
    for x, count in items:
        if not 0 <= x < n:
            raise IndexOutOfRange(f"user count for unknown label {x}")
        if not isinstance(count, int) or count < 0:
            raise ValueError(f"user count for label {x} must be a non-negative integer")
        out[x] = count
    return tuple(out)


def _normalize_aliases(n: int, aliases: Mapping[int, str] | Sequence[str | None] | None) -> tuple[str | None, ...]:
    out: list[str | None] = [None] * n
    if aliases is None:
        return tuple(out)
    items = aliases.items() if isinstance(aliases, Mapping) else enumerate(aliases)
    for x, alias in items:
        if alias is None:
            continue
        if not 0 <= x < n:
            raise IndexOutOfRange(f"alias for unknown label {x}")
        if any(ch.isspace() for ch in alias):
            raise ValueError(f"alias {alias!r} must not contain whitespace")
        out[x] = alias
    seen = [a for a in out if a is not None]
    if len(seen) != len(set(seen)):
        raise ValueError("aliases must be unique")
    return tuple(out)


def from_edges(
    n: int,
    edges: Iterable[tuple[int, int]],
    users: Mapping[int, int] | Sequence[int] | None = None,
    aliases: Mapping[int, str] | Sequence[str | None] | None = None,
) -> Policy:
    """Build a policy from ``(parent, child)`` pairs meaning ``child < parent``.

    The edges may be any acyclic generating set of the intended order: the
    transitive closure is taken and then reduced to covering edges.
    """
    if n < 0:
        raise ValueError("label count must be non-negative")
    direct = [0] * n
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n):
            raise IndexOutOfRange(f"edge ({a}, {b}) references a label outside 0..{n - 1}")
        if a == b:
            raise CycleDetected(f"self edge on label {a}")
        direct[a] |= 1 << b

    # Kahn's algorithm: order with parents before children, cycle check.
    indeg = [0] * n
    for a in range(n):
        for b in iter_bits(direct[a]):
            indeg[b] += 1
    queue = deque(x for x in range(n) if indeg[x] == 0)
    topo: list[int] = []
    while queue:
        x = queue.popleft()
        topo.append(x)
        for b in iter_bits(direct[x]):
            indeg[b] -= 1
            if indeg[b] == 0:
                queue.append(b)
    if len(topo) != n:
        raise CycleDetected("input edges contain a directed cycle")

    below = [0] * n
    for x in reversed(topo):
        m = 0
        for c in iter_bits(direct[x]):
            m |= below[c] | (1 << c)
        below[x] = m

    # Covering edges: a direct child survives unless another direct child
    # already reaches it.
    cover_children = [0] * n
    for x in range(n):
        redundant = 0
        for c in iter_bits(direct[x]):
            redundant |= below[c]
        cover_children[x] = direct[x] & ~redundant

    cover_parents = [0] * n
    for p in range(n):
        for c in iter_bits(cover_children[p]):
            cover_parents[c] |= 1 << p

    above = [0] * n
    for x in topo:
        up = above[x] | (1 << x)
        for c in iter_bits(cover_children[x]):
            above[c] |= up

    users_t = _normalize_users(n, users)
    aliases_t = _normalize_aliases(n, aliases)

    # Weighted up-set sizes via per-bit user planes: keeps the sum a handful
    # of popcounts even for thousands of labels.
    planes: list[int] = []
    bit = 0
    while any(u >> bit for u in users_t):
        planes.append(sum(1 << i for i in range(n) if (users_t[i] >> bit) & 1))
        bit += 1
    up_weights = []
    for x in range(n):
        mask = above[x] | (1 << x)
        up_weights.append(sum((mask & plane).bit_count() << b for b, plane in enumerate(planes)))

    return Policy(
        n=n,
        below=tuple(below),
        above=tuple(above),
        cover_children=tuple(cover_children),
        cover_parents=tuple(cover_parents),
        users=users_t,
        aliases=aliases_t,
        up_weights=tuple(up_weights),
    )


def linear_extension(p: Policy) -> list[int]:
    """Order the labels from maximal to minimal, lowest index first on ties.

    If ``y < x`` then ``y`` appears after ``x``; the result is deterministic.
    """
    remaining = [p.cover_parents[x].bit_count() for x in range(p.n)]
    heap = [x for x in range(p.n) if remaining[x] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        x = heapq.heappop(heap)
        order.append(x)
        for c in iter_bits(p.cover_children[x]):
            remaining[c] -= 1
            if remaining[c] == 0:
                heapq.heappush(heap, c)
    return order


def width(p: Policy) -> int:
    """Maximum antichain size, via minimum path cover of the full order."""
    adj = [list(iter_bits(p.below[x])) for x in range(p.n)]
    matched, _ = max_bipartite_matching(adj, p.n)
    return p.n - matched


def up_set(p: Policy, x: int) -> set[int]:
    """All labels ``>= x``, including ``x``."""
    return set(iter_bits(p.up_mask(x)))


def down_set(p: Policy, x: int) -> set[int]:
    """All labels ``<= x``, including ``x``."""
    return set(iter_bits(p.down_mask(x)))


def interval_poset(n: int) -> Policy:
    """The poset of the ``n*(n+1)/2`` contiguous intervals of ``{1..n}``.

    ``[i,j]`` lies below ``[i',j']`` iff it is contained in it.  Labels are
    indexed by (length, start), so the point intervals come first; each label
    carries one user and an alias like ``[2,4]``.
    """
    if n < 1:
        raise ValueError("interval poset needs n >= 1")
    index: dict[tuple[int, int], int] = {}
    aliases: list[str] = []
    for length in range(1, n + 1):
        for i in range(1, n - length + 2):
            j = i + length - 1
            index[(i, j)] = len(aliases)
            aliases.append(f"[{i},{j}]")
    edges = []
    for (i, j), idx in index.items():
        if j > i:
            edges.append((idx, index[(i + 1, j)]))
            edges.append((idx, index[(i, j - 1)]))
    return from_edges(len(aliases), edges, aliases=aliases)


def parse_policy(text: str) -> Policy:
    """Parse the line-oriented policy format (see ``serialize_policy``)."""
    n: int | None = None
    users: dict[int, int] = {}
    aliases: dict[int, str] = {}
    edges: list[tuple[int, int]] = []
    last_line = 0

    def want_int(token: str, what: str, lineno: int) -> int:
        try:
            return int(token)
        except ValueError:
            raise PolicySyntaxError(f"{what} must be an integer, got {token!r}", lineno) from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        last_line = lineno
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        tag = fields[0]
        if n is None and tag != "p":
            raise PolicySyntaxError("expected 'p <n>' header before other directives", lineno)
        if tag == "p":
            if n is not None:
                raise PolicySyntaxError("duplicate 'p' header", lineno)
            if len(fields) != 2:
                raise PolicySyntaxError("'p' takes exactly one argument", lineno)
            n = want_int(fields[1], "label count", lineno)
            if n < 0:
                raise PolicySyntaxError("label count must be non-negative", lineno)
        elif tag == "n":
            if len(fields) not in (3, 4):
                raise PolicySyntaxError("'n' takes '<id> <users> [alias]'", lineno)
            x = want_int(fields[1], "label id", lineno)
            count = want_int(fields[2], "user count", lineno)
            if not 0 <= x < n:  # type: ignore[operator]
                raise PolicySyntaxError(f"label id {x} out of range", lineno)
            if count < 0:
                raise PolicySyntaxError("user count must be non-negative", lineno)
            if x in users:
                raise PolicySyntaxError(f"duplicate 'n' line for label {x}", lineno)
            users[x] = count
            if len(fields) == 4:
                aliases[x] = fields[3]
        elif tag == "e":
            if len(fields) != 3:
                raise PolicySyntaxError("'e' takes '<parent-id> <child-id>'", lineno)
            a = want_int(fields[1], "parent id", lineno)
            b = want_int(fields[2], "child id", lineno)
            if not (0 <= a < n and 0 <= b < n):  # type: ignore[operator]
                raise PolicySyntaxError(f"edge ({a}, {b}) out of range", lineno)
            edges.append((a, b))
        else:
            raise PolicySyntaxError(f"unknown directive {tag!r}", lineno)

    if n is None:
        raise PolicySyntaxError("missing 'p <n>' header", last_line or 1)
    try:
        return from_edges(n, edges, users=users, aliases=aliases)
    except ValueError as exc:
        if isinstance(exc, CycleDetected):
            raise
        raise PolicySyntaxError(str(exc), last_line or 1) from exc


def serialize_policy(p: Policy) -> str:
    """Render a policy in the parseable line format; round-trips exactly."""
    lines = [f"p {p.n}"]
    for x in range(p.n):
        parts = ["n", str(x), str(p.users[x])]
        if p.aliases[x] is not None:
            parts.append(p.aliases[x])
        lines.append(" ".join(parts))
    for parent, child in p.hasse_edges():
        lines.append(f"e {parent} {child}")
    return "\n".join(lines) + "\n"
