"""Interval-decomposition approximation for (cyclic) d-distance b-matching.

The ground set is covered by classes, each a union of length-d intervals
separated by gaps. Inside a class the distance rule collapses to "at most one
edge per T-node in each interval" (plus, in the non-cyclic case, "not both the
last node of an interval and the first of the next"). Those restricted problems
have network-matrix constraint systems and are solved exactly as flows. Every
node lies in exactly d classes, so the best class retains a d/|classes|
fraction of the optimum.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .core import UNBOUNDED, Instance, Matching, finite_cap, weight
from .errors import DivisibilityViolated, DNotSupported, PreconditionViolated
from .netflow import FlowNetwork, integer_weights, max_weight_b_matching, min_cost_flow


@dataclass(frozen=True)
class Decomposition:
    """Classes of S-positions.

    ``pieces[i]`` lists the intervals of class ``i`` as tuples of positions in
    the (padded) order, sorted and split where they wrap. ``classes[i]`` holds
    only original positions (< n).
    """

    classes: tuple[frozenset[int], ...]
    pieces: tuple[tuple[tuple[int, ...], ...], ...]
    padded_n: int
    cyclic: bool

    def __len__(self) -> int:
        return len(self.classes)


def _intervals(i: int, period: int, length: int, total: int) -> list[list[int]]:
    return [[(start + j) % total for j in range(length)] for start in range(i, total, period)]


def decompose_cyclic(inst: Instance) -> Decomposition:
    n, d = inst.n, inst.d
    period = 2 * d - 1
    if n == 0 or n % period:
        raise DivisibilityViolated(f"cyclic decomposition needs (2d-1) | n; got n={n}, d={d}")
    classes, pieces = [], []
    for i in range(period):
        ivs = _intervals(i, period, d, n)
        classes.append(frozenset(p for iv in ivs for p in iv))
        pieces.append(tuple(tuple(iv) for iv in ivs))
    return Decomposition(tuple(classes), tuple(pieces), n, True)


def _split_wrapped(iv: list[int]) -> list[tuple[int, ...]]:
    out = [[iv[0]]]
    for a, b in zip(iv, iv[1:]):
        if b == a + 1:
            out[-1].append(b)
        else:
            out.append([b])
    return [tuple(p) for p in out]


def decompose_noncyclic(inst: Instance) -> Decomposition:
    n, d = inst.n, inst.d
    if d == 1:
        raise DNotSupported("d=1 needs no decomposition; solve as a plain b-matching")
    period = 2 * d - 2
    padded = max(period, -(-n // period) * period)
    classes, pieces = [], []
    for i in range(period):
        ps: list[tuple[int, ...]] = []
        for iv in _intervals(i, period, d, padded):
            ps.extend(_split_wrapped(iv))
        ps.sort()
        classes.append(frozenset(p for piece in ps for p in piece if p < n))
        pieces.append(tuple(ps))
    return Decomposition(tuple(classes), tuple(pieces), padded, False)


def decompose(inst: Instance) -> Decomposition:
    return decompose_cyclic(inst) if inst.cyclic else decompose_noncyclic(inst)


class RestrictedMode(enum.Enum):
    CYCLIC = "cyclic"
    NONCYCLIC = "noncyclic"


def restricted_edge_ids(inst: Instance, cls: frozenset[int]) -> list[int]:
    return [i for i, e in enumerate(inst.edges) if e.s in cls]


def restrict_instance(inst: Instance, cls: frozenset[int]) -> Instance:
    """The subinstance induced by ``cls`` and all of T (edge ids re-indexed)."""
    return inst.with_edges(restricted_edge_ids(inst, cls))


def _solve_cyclic_class(inst: Instance, pieces) -> list[int]:
    piece_of = {}
    for k, piece in enumerate(pieces):
        for p in piece:
            piece_of[p] = k
    ids = [i for i, e in enumerate(inst.edges) if e.s in piece_of]
    costs, _ = integer_weights([inst.edges[i].w for i in ids])
    big = max(inst.m, 1)
    # nodes: 0 source, 1 sink, then s-nodes, t-nodes, (t, piece) aggregators
    net = FlowNetwork(2, 0, 1)
    s_node = {s: net.add_node() for s in sorted({inst.edges[i].s for i in ids})}
    t_node = {t: net.add_node() for t in sorted({inst.edges[i].t for i in ids})}
    agg: dict[tuple[int, int], int] = {}
    for s, v in s_node.items():
        net.add_arc(net.source, v, finite_cap(inst.b_s[s], big))
    arcs = []
    for i, c in zip(ids, costs):
        e = inst.edges[i]
        key = (e.t, piece_of[e.s])
        if key not in agg:
            agg[key] = net.add_node()
            net.add_arc(agg[key], t_node[e.t], 1)
        arcs.append(net.add_arc(s_node[e.s], agg[key], 1, -c))
    for t, v in t_node.items():
        net.add_arc(v, net.sink, finite_cap(inst.b_t[t], big))
    res = min_cost_flow(net)
    return [i for i, a in zip(ids, arcs) if res.flow[a] > 0]


def _solve_noncyclic_class(inst: Instance, pieces) -> list[int]:
    """Exact solve of a non-cyclic class via its network-matrix structure.

    Per T-node the constraint rows form a chain P_1, B_1, P_2, ..., P_p
    (piece rows and boundary pairs). A shared tree carries one arc per
    S-degree row: boundary elements form an alternating path, interior
    elements hang off it. Each chain row becomes a unit-capacity leaf per T-node,
    and each edge a non-tree arc whose fundamental cycle crosses exactly the
    rows containing it. The resulting max-profit circulation is solved by
    pre-saturating every (negative-cost) edge arc and cancelling through a
    source/sink pair.
    """
    p = len(pieces)
    R = 2 * p - 1
    # which chain rows each position belongs to, and its tree arc
    rows_of: dict[int, tuple[int, ...]] = {}
    boundary: list[int] = []  # position order l_1, f_2, l_2, ..., f_p
    for j, piece in enumerate(pieces):
        k = 2 * j  # 0-based row index of P_{j+1}
        first, last = piece[0], piece[-1]
        if len(piece) == 1 and 0 < j < p - 1:
            raise AssertionError("interior singleton piece cannot occur")
        for pos in piece:
            rows = [k]
            if pos == first and j > 0:
                rows.insert(0, k - 1)
            if pos == last and j < p - 1:
                rows.append(k + 1)
            rows_of[pos] = tuple(rows)
        if j > 0:
            boundary.append(first)
        if j < p - 1:
            boundary.append(last)
    boundary.sort()

    ids = [i for i, e in enumerate(inst.edges) if e.s in rows_of]
    if not ids:
        return []
    costs, _ = integer_weights([inst.edges[i].w for i in ids])
    big = sum(costs) + 1
    net = FlowNetwork(2, 0, 1)
    path = [net.add_node() for _ in range(R)]
    for i, pos in enumerate(boundary):  # arc i joins path[i] and path[i+1]
        cap = inst.b_s[pos] if pos < inst.n else 1
        if i % 2 == 0:
            net.add_arc(path[i], path[i + 1], cap)
        else:
            net.add_arc(path[i + 1], path[i], cap)
    q_node = {}
    for pos, rows in rows_of.items():
        if len(rows) == 1 and pos < inst.n:
            q_node[pos] = net.add_node()
            net.add_arc(path[rows[0]], q_node[pos], inst.b_s[pos])
    leaf: dict[tuple[int, int], int] = {}

    def leaf_of(t: int, k: int) -> int:
        if (t, k) not in leaf:
            v = leaf[(t, k)] = net.add_node()
            if k % 2 == 0:
                net.add_arc(v, path[k], 1)
            else:
                net.add_arc(path[k], v, 1)
        return leaf[(t, k)]

    back_arcs = []
    for i, c in zip(ids, costs):
        e = inst.edges[i]
        rows = rows_of[e.s]
        if len(rows) == 1:
            tail, head = q_node[e.s], leaf_of(e.t, rows[0])
        else:
            a, b = rows
            if a % 2 == 0:
                tail, head = leaf_of(e.t, b), leaf_of(e.t, a)
            else:
                tail, head = leaf_of(e.t, a), leaf_of(e.t, b)
        # edge arc tail->head (cap 1, cost -c) is pre-saturated
        net.add_arc(net.source, head, 1, -big)
        back_arcs.append(net.add_arc(head, tail, 1, c))
        net.add_arc(tail, net.sink, 1)
    res = min_cost_flow(net)
    return [i for i, a in zip(ids, back_arcs) if res.flow[a] == 0]


def solve_restricted(inst: Instance, decomp: Decomposition, index: int,
                     mode: RestrictedMode | None = None) -> Matching:
    """Exact optimum over edges whose S-endpoint lies in class ``index``."""
    if mode is None:
        mode = RestrictedMode.CYCLIC if decomp.cyclic else RestrictedMode.NONCYCLIC
    pieces = decomp.pieces[index]
    if mode is RestrictedMode.CYCLIC:
        ids = _solve_cyclic_class(inst, pieces)
    else:
        if any(b is not UNBOUNDED for b in inst.b_t):
            raise PreconditionViolated("non-cyclic class solver requires b(t) unbounded for every t")
        ids = _solve_noncyclic_class(inst, pieces)
    return Matching.of(inst, ids)


@dataclass(frozen=True)
class ApproxResult:
    matching: Matching
    achieved_weight: Fraction
    class_weights: tuple[Fraction, ...]
    guarantee: Fraction
    best_class: int


def guarantee_factor(d: int, cyclic: bool) -> Fraction:
    if d == 1:
        return Fraction(1)
    return Fraction(d, 2 * d - 1) if cyclic else Fraction(d, 2 * d - 2)


def approximate(inst: Instance) -> ApproxResult:
    """Best restricted-class solution; within ``guarantee`` of the optimum.

    Cyclic instances need (2d-1) | n. Non-cyclic instances need every b(t)
    unbounded unless d = 1, where the problem is a plain b-matching.
    """
    if not inst.cyclic and inst.d == 1:
        res = max_weight_b_matching(inst)
        M = Matching.of(inst, res.edge_ids)
        return ApproxResult(M, res.total_weight, (res.total_weight,), Fraction(1), 0)
    if not inst.cyclic and any(b is not UNBOUNDED for b in inst.b_t):
        raise PreconditionViolated("non-cyclic approximation requires b(t) unbounded for every t")
    decomp = decompose(inst)
    sols = [solve_restricted(inst, decomp, i) for i in range(len(decomp))]
    ws = tuple(weight(inst, M) for M in sols)
    best = max(range(len(ws)), key=lambda i: (ws[i], -i))
    return ApproxResult(sols[best], ws[best], ws, guarantee_factor(inst.d, inst.cyclic), best)
