"""Choosing the order of S: exact table filling, randomized filters, derandomization, T-Greedy.

A permutation is a tuple ``order`` with ``order[p]`` the S-node placed at
position ``p``. Matchings always carry the instance's own edge ids; use
``Instance.permuted(order)`` to check them under the ordering.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import UNBOUNDED, Instance, Matching, check_feasible, distance_ok, weight
from .errors import InstanceTooLarge, ParameterMismatch, ParameterOutOfRange, PreconditionViolated
from .exact import DEFAULT_EDGE_LIMIT, solve_bruteforce
from .netflow import max_weight_b_matching, max_weight_capped_excess

MAX_ENUM_N = 8


@dataclass(frozen=True)
class PermutationResult:
    order: tuple[int, ...]
    matching: Matching
    value: Fraction
    method: str
    seed: int | None = None
    bound: Fraction | None = None

    def is_feasible(self, inst: Instance) -> bool:
        return check_feasible(inst.permuted(self.order), self.matching.edge_ids).feasible

    def to_dict(self) -> dict:
        return {
            "order": [s + 1 for s in self.order],
            "edges": [i + 1 for i in self.matching.sorted_ids()],
            "value_num": self.value.numerator,
            "value_den": self.value.denominator,
            "method": self.method,
            "seed": self.seed,
            "bound_num": None if self.bound is None else self.bound.numerator,
            "bound_den": None if self.bound is None else self.bound.denominator,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _result(inst: Instance, order: Sequence[int], ids: Iterable[int], method: str,
            seed: int | None = None, bound: Fraction | None = None) -> PermutationResult:
    M = Matching.of(inst, ids)
    return PermutationResult(tuple(order), M, weight(inst, M), method, seed, bound)


# --------------------------------------------------------------------------- table filling


@dataclass(frozen=True)
class TableLayout:
    """Grid used to turn a degree-bounded edge set into a feasible order.

    Non-cyclic: d rows and k+1 columns, the last column cut to r cells.
    Cyclic: k columns of lengths d + (share of r), as even as possible, so
    the grid has d + r//k full rows and a last row of r % k cells.

    ``cells`` are the kept (row, col) pairs in row-major order, so cell ``i``
    receives the i-th node of the fill sequence. ``read_order[p]`` is the fill
    index of the cell read at position ``p`` (column-major).
    """

    rows: int
    cols: int
    k: int
    r: int
    cyclic: bool
    cells: tuple[tuple[int, int], ...]
    read_order: tuple[int, ...]


def table_layout(n: int, d: int, k: int, r: int, cyclic: bool) -> TableLayout:
    if d < 1 or k < 0 or not 0 <= r < d or n != k * d + r:
        raise ParameterMismatch(f"need n = k*d + r with 0 <= r < d; got n={n}, d={d}, k={k}, r={r}")
    if cyclic:
        if k == 0:
            raise ParameterMismatch("cyclic table needs k >= 1")
        # r extra cells spread over the k columns: d+q full rows, then r2 cells
        q, r2 = divmod(r, k)
        rows, cols = d + q + (1 if r2 else 0), k
        kept = lambda i, j: i < d + q or j < r2  # noqa: E731
    else:
        rows, cols = d, k + 1
        kept = lambda i, j: j < k or i < r  # noqa: E731
    cells = tuple((i, j) for i in range(rows) for j in range(cols) if kept(i, j))
    index = {c: x for x, c in enumerate(cells)}
    read = tuple(index[(i, j)] for j in range(cols) for i in range(rows) if (i, j) in index)
    return TableLayout(rows, cols, k, r, cyclic, cells, read)


def _require_unit_s(inst: Instance, respect_bt: bool) -> None:
    if any(b != 1 for b in inst.b_s):
        raise PreconditionViolated("optimal permutation requires b(s) = 1 for every s")
    if not respect_bt and any(b is not UNBOUNDED for b in inst.b_t):
        raise PreconditionViolated("finite b(t) present but respect_bt is off")


def optimal_permutation_distance_matching(inst: Instance, cyclic: bool | None = None,
                                          respect_bt: bool = True) -> PermutationResult:
    """An order of S and a matching that is heaviest over all orders.

    Requires b(s) = 1. First a heaviest edge set is found with the degree
    profile every feasible solution must have: non-cyclic, deg(t) <= k+1 with
    at most r nodes at k+1 (n = kd + r); cyclic, deg(t) <= k. Its S-nodes,
    grouped by T-neighbour, are written row-major into a truncated grid and
    read out column-major, which spreads every group at least d apart.
    """
    cyclic = inst.cyclic if cyclic is None else cyclic
    inst = inst.with_cyclic(cyclic)
    _require_unit_s(inst, respect_bt)
    n, d = inst.n, inst.d
    k, r = divmod(n, d)
    cap_t = inst.b_t
    if d == 1 or (cyclic and k == 0):
        # every order is equivalent: at most one edge per t fits when k == 0
        caps = cap_t if d == 1 else tuple(1 if b is UNBOUNDED else min(1, b) for b in cap_t)
        res = max_weight_b_matching(inst, cap_t=caps)
        return _result(inst, range(n), res.edge_ids, "optimal", bound=Fraction(1))

    if cyclic:
        caps = tuple(k if b is UNBOUNDED else min(k, b) for b in cap_t)
        res = max_weight_b_matching(inst, cap_t=caps)
    else:
        res = max_weight_capped_excess(inst, k, r, cap_t=cap_t)
    ids = res.edge_ids
    nbrs: list[list[int]] = [[] for _ in range(inst.t_count)]
    matched = set()
    for i in ids:
        e = inst.edges[i]
        nbrs[e.t].append(e.s)
        matched.add(e.s)
    for lst in nbrs:
        lst.sort()
    unmatched = [s for s in range(n) if s not in matched]
    deg = [len(x) for x in nbrs]
    ts = range(inst.t_count)
    seq: list[int] = []
    if cyclic:
        for t in [t for t in ts if deg[t] == k] + [t for t in ts if deg[t] != k]:
            seq.extend(nbrs[t])
        seq.extend(unmatched)
    else:
        for t in [t for t in ts if deg[t] == k + 1] + [t for t in ts if deg[t] < k]:
            seq.extend(nbrs[t])
        seq.extend(unmatched)
        for t in [t for t in ts if deg[t] == k]:
            seq.extend(nbrs[t])
    layout = table_layout(n, d, k, r, cyclic)
    order = [seq[x] for x in layout.read_order]
    return _result(inst, order, ids, "optimal", bound=Fraction(1))


# --------------------------------------------------------------------------- randomized filters


def relaxed_caps(inst: Instance) -> tuple[int, ...]:
    """b'(t): the most edges t can have under any order, capped by b(t)."""
    lim = inst.n // inst.d if inst.cyclic else -(-inst.n // inst.d)
    return tuple(lim if b is UNBOUNDED else min(lim, b) for b in inst.b_t)


def relaxation(inst: Instance) -> tuple[int, ...]:
    """Edge ids of a heaviest b'-matching (the candidate set of the filters)."""
    return max_weight_b_matching(inst, cap_t=relaxed_caps(inst)).edge_ids


def _preceding(n: int, d: int, cyclic: bool, p: int) -> set[int]:
    if cyclic:
        return {(p - j) % n for j in range(1, d)} - {p}
    return set(range(max(0, p - d + 1), p))


def window_filter(inst: Instance, order: Sequence[int], candidates: Iterable[int]) -> list[int]:
    """Keep s t iff no other candidate edge of t sits in the d-1 positions before s."""
    cand = list(candidates)
    pos = {s: p for p, s in enumerate(order)}
    by_t: dict[int, set[int]] = {}
    for i in cand:
        e = inst.edges[i]
        by_t.setdefault(e.t, set()).add(pos[e.s])
    kept = []
    for i in cand:
        e = inst.edges[i]
        if not (_preceding(inst.n, inst.d, inst.cyclic, pos[e.s]) & by_t[e.t]):
            kept.append(i)
    return sorted(kept)


def relaxation_k(inst: Instance) -> int:
    return max([1, *relaxed_caps(inst)])


def randomized_permutation(inst: Instance, seed: int = 0) -> PermutationResult:
    """Uniformly random order, then the window filter on a heaviest b'-matching.

    Cyclic instances draw a linear order; every cyclic order is equally likely
    and the filter only depends on the cyclic order.
    """
    cand = relaxation(inst)
    order = list(range(inst.n))
    random.Random(seed).shuffle(order)
    kept = window_filter(inst, order, cand)
    method = "alg1" if inst.cyclic else "alg2"
    return _result(inst, order, kept, method, seed, analytic_bound(inst.d, relaxation_k(inst), inst.cyclic))


def conditional_survival(inst: Instance, candidates: Iterable[int],
                         prefix: Sequence[int] | Mapping[int, int], edge: int) -> Fraction:
    """Probability that ``edge`` passes the window filter when the order is
    completed uniformly at random.

    ``prefix`` fixes some positions: a sequence fills positions 0, 1, ...; a
    mapping sends positions to S-nodes. For each possible position of the
    edge's S-node, window slots that are fixed must avoid the other candidate
    neighbours of t; the f free slots avoid the u unplaced neighbours among the
    m remaining nodes with probability prod_{j<f} (m-u-j)/(m-j).
    """
    n, d, cyc = inst.n, inst.d, inst.cyclic
    assign = dict(enumerate(prefix)) if not isinstance(prefix, Mapping) else dict(prefix)
    placed = {s: p for p, s in assign.items()}
    e = inst.edges[edge]
    cand = set(candidates)
    others = {inst.edges[i].s for i in cand if inst.edges[i].t == e.t and i != edge}
    free = [p for p in range(n) if p not in assign]
    u = sum(1 for s in others if s not in placed)
    if e.s in placed:
        spots, m = [placed[e.s]], len(free)
    else:
        spots, m = free, len(free) - 1
    if not spots:
        return Fraction(0)
    total = Fraction(0)
    for p in spots:
        win = _preceding(n, d, cyc, p)
        if any(assign.get(q) in others for q in win):
            continue
        f = sum(1 for q in win if q not in assign)
        prob = Fraction(1)
        for j in range(f):
            if m - j <= 0:
                break
            prob *= Fraction(m - u - j, m - j)
            if prob == 0:
                break
        total += prob
    return total / len(spots)


def conditional_expectation(inst: Instance, candidates: Sequence[int],
                            prefix: Sequence[int] | Mapping[int, int]) -> Fraction:
    return sum((inst.edges[i].w * conditional_survival(inst, candidates, prefix, i) for i in candidates),
               Fraction(0))


def derandomized_permutation(inst: Instance) -> PermutationResult:
    """Fill positions left to right, each time with the node that keeps the
    conditional expected filtered weight highest (lowest index on ties)."""
    cand = list(relaxation(inst))
    prefix: list[int] = []
    remaining = list(range(inst.n))
    while remaining:
        best, best_val = None, None
        for s in remaining:
            val = conditional_expectation(inst, cand, prefix + [s])
            if best_val is None or val > best_val:
                best, best_val = s, val
        prefix.append(best)
        remaining.remove(best)
    kept = window_filter(inst, prefix, cand)
    return _result(inst, prefix, kept, "derand", bound=analytic_bound(inst.d, relaxation_k(inst), inst.cyclic))


# --------------------------------------------------------------------------- analytics


def survival_probability(n: int, d: int, k: int, cyclic: bool, i: int | None = None) -> Fraction:
    """Chance that one of k candidate edges at a T-node survives the filter.

    Non-cyclic with ``i`` given: the chance for the edge whose S-node sits at
    (1-based) position ``i``; without ``i``: the average over positions.
    """
    if k < 1 or d < 1:
        raise ParameterOutOfRange("need d >= 1 and k >= 1")
    if cyclic and n < d * k:
        raise ParameterOutOfRange(f"cyclic formula needs n >= d*k; got n={n}, d={d}, k={k}")
    if not cyclic and n < (k - 1) * d + 1:
        raise ParameterOutOfRange(f"non-cyclic formula needs n >= (k-1)*d+1; got n={n}, d={d}, k={k}")

    def prod(upto: int) -> Fraction:
        out = Fraction(1)
        for j in range(1, upto + 1):
            out *= Fraction(n - k - (j - 1), n - j)
        return out

    if cyclic:
        return prod(d - 1)
    if i is not None:
        if not 1 <= i <= n:
            raise ParameterOutOfRange(f"position {i} outside 1..{n}")
        return prod(min(d - 1, i - 1))
    return sum((prod(min(d - 1, p - 1)) for p in range(1, n + 1)), Fraction(0)) / n


def analytic_bound(d: int, k: int, cyclic: bool) -> Fraction:
    """Guaranteed fraction of w(relaxation) that the filter keeps in expectation."""
    if d < 1 or k < 1:
        raise ParameterOutOfRange("need d >= 1 and k >= 1")
    if k == 1:
        return Fraction(1)
    by_d = Fraction(d - 1, d) ** (d - 1)
    if cyclic:
        by_k = Fraction(k - 1, k) ** (k - 1)
    else:
        by_k = (1 + (k - 1) * Fraction(k - 2, k - 1) ** k) / k
    return max(by_d, by_k)


def e_upper_bound(terms: int = 20) -> Fraction:
    """A rational strictly above e: partial sum of 1/j! plus its tail bound."""
    s = sum((Fraction(1, math.factorial(j)) for j in range(terms)), Fraction(0))
    return s + Fraction(2, math.factorial(terms))


# --------------------------------------------------------------------------- T-Greedy


def t_greedy(inst: Instance, order: Sequence[int], candidates: Iterable[int] | None = None) -> Matching:
    """For each t in index order, scan S left to right and keep every
    candidate edge that fits the residual bounds and the distance rule."""
    cand = set(range(inst.m)) if candidates is None else set(candidates)
    pos = {s: p for p, s in enumerate(order)}
    res_s = list(inst.b_s)
    by_t: dict[int, list[int]] = {}
    for i in cand:
        by_t.setdefault(inst.edges[i].t, []).append(i)
    kept: list[int] = []
    for t in sorted(by_t):
        room = inst.b_t[t]
        taken: list[int] = []
        for i in sorted(by_t[t], key=lambda i: pos[inst.edges[i].s]):
            s = inst.edges[i].s
            if res_s[s] <= 0 or not len(taken) < room:
                continue
            p = pos[s]
            if all(distance_ok(inst.n, inst.d, inst.cyclic, p, q) for q in taken):
                taken.append(p)
                res_s[s] -= 1
                kept.append(i)
    return Matching.of(inst, kept)


def t_greedy_permutation(inst: Instance, seed: int = 0) -> PermutationResult:
    """Random order as in the filter algorithms, then T-Greedy on the relaxation."""
    cand = relaxation(inst)
    order = list(range(inst.n))
    random.Random(seed).shuffle(order)
    M = t_greedy(inst, order, cand)
    return _result(inst, order, M.edge_ids, "tgreedy", seed, analytic_bound(inst.d, relaxation_k(inst), inst.cyclic))


# --------------------------------------------------------------------------- enumeration


def all_orders(n: int, cyclic: bool) -> Iterable[tuple[int, ...]]:
    """Every order of range(n); cyclic orders are listed once with node 0 first."""
    if cyclic and n > 0:
        return ((0, *rest) for rest in itertools.permutations(range(1, n)))
    return itertools.permutations(range(n))


def _guard(inst: Instance) -> None:
    if inst.n > MAX_ENUM_N:
        raise InstanceTooLarge(f"enumeration needs n <= {MAX_ENUM_N}; got {inst.n}")


def best_permutation_bruteforce(inst: Instance, limit: int = DEFAULT_EDGE_LIMIT) -> PermutationResult:
    _guard(inst)
    if inst.m > limit:
        raise InstanceTooLarge(f"{inst.m} edges exceeds brute-force limit {limit}")
    best = None
    for order in all_orders(inst.n, inst.cyclic):
        M = solve_bruteforce(inst.permuted(order), limit)
        w = weight(inst, M)
        if best is None or w > best[0]:
            best = (w, order, M.edge_ids)
    return _result(inst, best[1], best[2], "brute", bound=Fraction(1))


ALGORITHMS = ("alg1", "alg2", "tgreedy")


def expected_weight_enumeration(inst: Instance, algorithm: str) -> Fraction:
    """Exact expected output weight over a uniformly random (cyclic) order."""
    _guard(inst)
    if algorithm == "alg1" and not inst.cyclic:
        raise PreconditionViolated("alg1 is the cyclic algorithm")
    if algorithm in ("alg2", "tgreedy") and inst.cyclic:
        raise PreconditionViolated(f"{algorithm} is a non-cyclic algorithm")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    cand = relaxation(inst)
    total, count = Fraction(0), 0
    for order in all_orders(inst.n, inst.cyclic):
        if algorithm == "tgreedy":
            total += weight(inst, t_greedy(inst, order, cand))
        else:
            total += weight(inst, window_filter(inst, order, cand))
        count += 1
    return total / max(count, 1)
