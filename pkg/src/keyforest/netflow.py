"""Integral minimum-cost flow with edge lower bounds and node balances.

The solver augments along successive shortest paths with node potentials;
lower bounds are folded into the balances first, so the core loop only ever
sees zero lower bounds.  All data are integers and so are all flows.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

_INF = 1 << 62


class Infeasible(RuntimeError):
    """No feasible flow exists for the network."""


class InfeasibleFlow(ValueError):
    """A flow violates edge bounds or node balances."""


@dataclass(frozen=True)
class FlowEdge:
    tail: int
    head: int
    lower: int
    upper: int
    cost: int


@dataclass(frozen=True)
class Network:
    """A directed graph with per-edge bounds/costs and per-node balances."""

    num_nodes: int
    edges: tuple[FlowEdge, ...]
    balances: tuple[int, ...]

    def __post_init__(self):
        if len(self.balances) != self.num_nodes:
            raise ValueError("one balance per node required")
        for b in self.balances:
            if not isinstance(b, int):
                raise ValueError("balances must be integers")
        if sum(self.balances) != 0:
            raise ValueError("balances must sum to zero")
        for e in self.edges:
            if not (0 <= e.tail < self.num_nodes and 0 <= e.head < self.num_nodes):
                raise ValueError(f"edge ({e.tail}, {e.head}) references an unknown node")
            if not all(isinstance(v, int) for v in (e.lower, e.upper, e.cost)):
                raise ValueError("edge bounds and costs must be integers")
            if not 0 <= e.lower <= e.upper:
                raise ValueError(f"edge ({e.tail}, {e.head}) needs 0 <= lower <= upper")


@dataclass(frozen=True)
class Flow:
    """Per-edge integral flow values, aligned with ``Network.edges``."""

    values: tuple[int, ...]


def eliminate_lower_bounds(net: Network) -> tuple[Network, int]:
    """Shift lower bounds into the balances.

    Returns the transformed network (all lower bounds zero, capacities
    ``upper - lower``) and the cost offset ``sum(lower * cost)``.  Adding the
    lower bounds back to any feasible flow of the result yields a feasible
    flow of ``net`` whose cost is larger by exactly the offset.
    """
    balances = list(net.balances)
    offset = 0
    edges = []
    for e in net.edges:
        edges.append(FlowEdge(e.tail, e.head, 0, e.upper - e.lower, e.cost))
        if e.lower:
            balances[e.tail] -= e.lower
            balances[e.head] += e.lower
            offset += e.lower * e.cost
    return Network(net.num_nodes, tuple(edges), tuple(balances)), offset


def min_cost_flow(net: Network) -> Flow:
    """An integral feasible flow of minimum total cost.

    Raises ``Infeasible`` when the balances cannot be met under the bounds.
    Negative edge costs are out of scope and rejected.
    """
    for e in net.edges:
        if e.cost < 0:
            raise ValueError("negative edge costs are not supported")
    reduced, _ = eliminate_lower_bounds(net)

    n = reduced.num_nodes
    source, sink = n, n + 1
    to: list[int] = []
    cap: list[int] = []
    cost: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n + 2)]

    def add_arc(a: int, b: int, capacity: int, weight: int) -> None:
        adj[a].append(len(to))
        to.append(b)
        cap.append(capacity)
        cost.append(weight)
        adj[b].append(len(to))
        to.append(a)
        cap.append(0)
        cost.append(-weight)

    for e in reduced.edges:
        add_arc(e.tail, e.head, e.upper, e.cost)
    supply = 0
    for v, b in enumerate(reduced.balances):
        if b > 0:
            add_arc(source, v, b, 0)
            supply += b
        elif b < 0:
            add_arc(v, sink, -b, 0)

    potential = [0] * (n + 2)
    pushed = 0
    while pushed < supply:
        dist = [_INF] * (n + 2)
        prev_arc = [-1] * (n + 2)
        dist[source] = 0
        heap: list[tuple[int, int]] = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for a in adj[u]:
                if cap[a] <= 0:
                    continue
                v = to[a]
                nd = d + cost[a] + potential[u] - potential[v]
                if nd < dist[v]:
                    dist[v] = nd
                    prev_arc[v] = a
                    heapq.heappush(heap, (nd, v))
        if dist[sink] >= _INF:
            raise Infeasible("balances cannot be satisfied under the edge bounds")
        for v in range(n + 2):
            potential[v] += dist[v] if dist[v] < _INF else dist[sink]

        bottleneck = supply - pushed
        v = sink
        while v != source:
            a = prev_arc[v]
            bottleneck = min(bottleneck, cap[a])
            v = to[a ^ 1]
        v = sink
        while v != source:
            a = prev_arc[v]
            cap[a] -= bottleneck
            cap[a ^ 1] += bottleneck
            v = to[a ^ 1]
        pushed += bottleneck

    values = tuple(cap[2 * k + 1] + net.edges[k].lower for k in range(len(net.edges)))
    return Flow(values)


def check_feasible(net: Network, flow: Flow) -> None:
    """Raise ``InfeasibleFlow`` unless ``flow`` satisfies bounds and balances."""
    if len(flow.values) != len(net.edges):
        raise InfeasibleFlow("flow does not cover every edge")
    net_out = [0] * net.num_nodes
    for e, f in zip(net.edges, flow.values):
        if not isinstance(f, int) or f < 0:
            raise InfeasibleFlow(f"flow on ({e.tail}, {e.head}) must be a non-negative integer")
        if not e.lower <= f <= e.upper:
            raise InfeasibleFlow(
                f"flow {f} on ({e.tail}, {e.head}) outside [{e.lower}, {e.upper}]"
            )
        net_out[e.tail] += f
        net_out[e.head] -= f
    for v in range(net.num_nodes):
        if net_out[v] != net.balances[v]:
            raise InfeasibleFlow(f"node {v} ships {net_out[v]}, balance requires {net.balances[v]}")


def is_feasible(net: Network, flow: Flow) -> bool:
    try:
        check_feasible(net, flow)
    except InfeasibleFlow:
        return False
    return True


def flow_cost(net: Network, flow: Flow) -> int:
    """Total cost of a feasible flow; raises ``InfeasibleFlow`` otherwise."""
    check_feasible(net, flow)
    return sum(e.cost * f for e, f in zip(net.edges, flow.values))


def format_flow(net: Network, flow: Flow) -> str:
    """Debug dump: one ``edge <tail> <head> l u c f`` line per edge."""
    lines = [
        f"edge {e.tail} {e.head} {e.lower} {e.upper} {e.cost} {f}"
        for e, f in zip(net.edges, flow.values)
    ]
    return "\n".join(lines) + "\n"
