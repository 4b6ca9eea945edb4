"""Min-cost flow by successive shortest paths, and the edge-selection solvers on top of it."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import UNBOUNDED, Instance, finite_cap
from .errors import MalformedNetwork


class Arc(NamedTuple):
    u: int
    v: int
    cap: int
    cost: int


@dataclass
class FlowNetwork:
    n_nodes: int
    source: int
    sink: int
    arcs: list[Arc] = field(default_factory=list)

    def add_node(self) -> int:
        self.n_nodes += 1
        return self.n_nodes - 1

    def add_arc(self, u: int, v: int, cap: int, cost: int = 0) -> int:
        self.arcs.append(Arc(u, v, cap, cost))
        return len(self.arcs) - 1


@dataclass(frozen=True)
class FlowResult:
    flow: tuple[int, ...]
    cost: int
    potentials: tuple[int, ...]

    @property
    def profit(self) -> int:
        return -self.cost


def _check(net: FlowNetwork) -> None:
    if not (0 <= net.source < net.n_nodes and 0 <= net.sink < net.n_nodes):
        raise MalformedNetwork("source/sink out of range")
    if net.source == net.sink:
        raise MalformedNetwork("source equals sink")
    for a in net.arcs:
        if not (0 <= a.u < net.n_nodes and 0 <= a.v < net.n_nodes):
            raise MalformedNetwork(f"arc {a} references a missing node")
        if a.u == a.v:
            raise MalformedNetwork(f"self-loop arc {a}")
        if not isinstance(a.cap, int) or not isinstance(a.cost, int):
            raise MalformedNetwork(f"arc {a} has non-integer data")
        if a.cap < 0:
            raise MalformedNetwork(f"arc {a} has negative capacity")


def min_cost_flow(net: FlowNetwork) -> FlowResult:
    """Maximum-profit flow from ``net.source`` to ``net.sink``.

    Augments along cheapest paths and stops as soon as the cheapest path has
    non-negative cost, so the result is a min-cost flow over all flow values.
    The network must not contain negative-cost cycles.
    """
    _check(net)
    N = net.n_nodes
    # residual arc 2i is arc i, 2i+1 its reverse
    to: list[int] = []
    cap: list[int] = []
    cost: list[int] = []
    adj: list[list[int]] = [[] for _ in range(N)]
    for a in net.arcs:
        adj[a.u].append(len(to))
        to.append(a.v)
        cap.append(a.cap)
        cost.append(a.cost)
        adj[a.v].append(len(to))
        to.append(a.u)
        cap.append(0)
        cost.append(-a.cost)

    src, snk = net.source, net.sink
    INF = math.inf

    # label-correcting pass seeds potentials when negative arcs are present
    h = [INF] * N
    h[src] = 0
    for _ in range(N):
        changed = False
        for u in range(N):
            if h[u] is INF:
                continue
            for r in adj[u]:
                if cap[r] > 0 and h[u] + cost[r] < h[to[r]]:
                    h[to[r]] = h[u] + cost[r]
                    changed = True
        if not changed:
            break
    else:
        raise MalformedNetwork("negative-cost cycle reachable from source")
    # unreachable nodes never become reachable; their potential is irrelevant
    h = [0 if x is INF else x for x in h]

    total = 0
    while True:
        dist = [INF] * N
        pred = [-1] * N
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            du, u = heapq.heappop(heap)
            if du > dist[u]:
                continue
            for r in adj[u]:
                if cap[r] <= 0:
                    continue
                v = to[r]
                nd = du + cost[r] + h[u] - h[v]
                if nd < dist[v]:
                    dist[v] = nd
                    pred[v] = r
                    heapq.heappush(heap, (nd, v))
        if dist[snk] is INF:
            break
        for v in range(N):
            if dist[v] is not INF:
                h[v] += dist[v]
        path_cost = h[snk] - h[src]
        if path_cost >= 0:
            break
        push = math.inf
        v = snk
        while v != src:
            r = pred[v]
            push = min(push, cap[r])
            v = to[r ^ 1]
        v = snk
        while v != src:
            r = pred[v]
            cap[r] -= push
            cap[r ^ 1] += push
            v = to[r ^ 1]
        total += push * path_cost

    flow = tuple(cap[2 * i + 1] for i in range(len(net.arcs)))
    return FlowResult(flow, total, tuple(h))


def integer_weights(weights: Sequence[Fraction]) -> tuple[list[int], int]:
    """Scale rational weights to integers by their common denominator."""
    den = math.lcm(*(w.denominator for w in weights)) if weights else 1
    return [int(w * den) for w in weights], den


@dataclass(frozen=True)
class EdgeSubsetResult:
    edge_ids: tuple[int, ...]
    total_weight: Fraction
    potentials: tuple[int, ...] = ()


def _selected(inst: Instance, res: FlowResult, edge_arcs: Sequence[int]) -> EdgeSubsetResult:
    ids = tuple(i for i, a in enumerate(edge_arcs) if res.flow[a] > 0)
    return EdgeSubsetResult(ids, sum((inst.edges[i].w for i in ids), Fraction(0)), res.potentials)


def max_weight_b_matching(inst: Instance, cap_s: Sequence | None = None,
                          cap_t: Sequence | None = None) -> EdgeSubsetResult:
    """Heaviest edge set with deg(s) <= cap_s(s) and deg(t) <= cap_t(t).

    Caps default to the instance bounds; the distance rule is ignored.
    """
    cap_s = inst.b_s if cap_s is None else cap_s
    cap_t = inst.b_t if cap_t is None else cap_t
    big = max(inst.m, 1)
    costs, _ = integer_weights([e.w for e in inst.edges])
    net = FlowNetwork(inst.n + inst.t_count + 2, 0, inst.n + inst.t_count + 1)
    for s in range(inst.n):
        net.add_arc(net.source, 1 + s, finite_cap(cap_s[s], big))
    edge_arcs = [net.add_arc(1 + e.s, 1 + inst.n + e.t, 1, -c) for e, c in zip(inst.edges, costs)]
    for t in range(inst.t_count):
        net.add_arc(1 + inst.n + t, net.sink, finite_cap(cap_t[t], big))
    return _selected(inst, min_cost_flow(net), edge_arcs)


def max_weight_capped_excess(inst: Instance, k: int, r: int,
                             cap_t: Sequence | None = None) -> EdgeSubsetResult:
    """Heaviest edge set with deg(s) <= 1, deg(t) <= k+1 and at most r T-nodes of degree k+1.

    ``cap_t`` optionally imposes extra per-T-node bounds (UNBOUNDED entries
    are ignored). Each T-node sends k units straight to the sink and at most one
    more through a shared budget node of capacity r.
    """
    if k < 0 or r < 0:
        raise ValueError("k and r must be non-negative")
    cap_t = (UNBOUNDED,) * inst.t_count if cap_t is None else cap_t
    costs, _ = integer_weights([e.w for e in inst.edges])
    T0 = 1 + inst.n
    budget = T0 + inst.t_count
    net = FlowNetwork(budget + 2, 0, budget + 1)
    for s in range(inst.n):
        net.add_arc(net.source, 1 + s, 1)
    edge_arcs = [net.add_arc(1 + e.s, T0 + e.t, 1, -c) for e, c in zip(inst.edges, costs)]
    for t in range(inst.t_count):
        bt = cap_t[t]
        net.add_arc(T0 + t, net.sink, k if bt is UNBOUNDED else min(k, bt))
        net.add_arc(T0 + t, budget, 1 if bt > k else 0)
    net.add_arc(budget, net.sink, r)
    return _selected(inst, min_cost_flow(net), edge_arcs)
