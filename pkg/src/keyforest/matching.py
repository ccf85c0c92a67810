"""Maximum bipartite matching via Hopcroft-Karp with iterative augmentation."""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence

_INF = 1 << 60


def max_bipartite_matching(adj: Sequence[Sequence[int]], n_right: int) -> tuple[int, list[int]]:
    """Match left vertices (indices of ``adj``) to right vertices.

    ``adj[u]`` lists the right vertices reachable from left vertex ``u``.
    Returns the matching size and, per left vertex, the matched right vertex
    or -1.  Vertices are scanned in index order, so the result is
    deterministic.
    """
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        queue: deque[int] = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        reachable_free = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    reachable_free = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return reachable_free

    def try_augment(root: int) -> bool:
        # Depth-first over the layered graph, kept iterative so deep
        # augmenting paths cannot hit the recursion limit.
        stack = [root]
        iters = [iter(adj[root])]
        trail: list[tuple[int, int]] = []
        while stack:
            u = stack[-1]
            moved = False
            for v in iters[-1]:
                w = match_r[v]
                if w == -1:
                    trail.append((u, v))
                    for tu, tv in trail:
                        match_l[tu] = tv
                        match_r[tv] = tu
                    return True
                if dist[w] == dist[u] + 1:
                    trail.append((u, v))
                    stack.append(w)
                    iters.append(iter(adj[w]))
                    moved = True
                    break
            if not moved:
                dist[u] = _INF
                stack.pop()
                iters.pop()
                if trail:
                    trail.pop()
        return False

    size = 0
    while bfs():
        for u in range(n_left):
            if match_l[u] == -1 and try_augment(u):
                size += 1
    return size, match_l
