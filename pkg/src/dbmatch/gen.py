"""Instance generators: gadgets, reductions, reference fixtures and seeded random families."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Instance
from .errors import InfeasibleInput, InvalidParams, MalformedHypergraph
from .exact import DoubleMatchingInstance, is_double_matching


def gen_tight_gap(d: int) -> Instance:
    """Complete graph between 2d-1 cyclic S-nodes and a single T-node, unit weights.

    Every two S-nodes are closer than d in one direction, so at most one edge
    fits, while x = 1/d on every edge is LP-feasible.
    """
    if d < 1:
        raise InvalidParams("d must be >= 1")
    n = 2 * d - 1
    return Instance.build(n, 1, [(s, 0, 1) for s in range(n)], d, cyclic=True)


def star_instance(n: int, d: int, cyclic: bool) -> Instance:
    """One T-node joined to all n S-nodes by unit edges."""
    return Instance.build(n, 1, [(s, 0, 1) for s in range(n)], d, cyclic)


def fig3_instance() -> Instance:
    """Eleven S-nodes, six T-nodes with neighbourhoods of sizes 3,1,1,2,2,2 (d = 4)."""
    groups = [[0, 1, 2], [3], [4], [5, 6], [7, 8], [9, 10]]
    edges = [(s, t, 1) for t, ss in enumerate(groups) for s in ss]
    return Instance.build(11, 6, edges, 4, cyclic=False)


# --------------------------------------------------------------------------- 3-dimensional matching


@dataclass(frozen=True)
class ThreeDimMatchingInstance:
    x: int
    y: int
    z: int
    triples: tuple[tuple[int, int, int], ...]

    @classmethod
    def build(cls, x: int, y: int, z: int, triples: Iterable[Sequence[int]]) -> "ThreeDimMatchingInstance":
        """Validated instance with triples sorted lexicographically."""
        ts = [tuple(int(v) for v in t) for t in triples]
        if min(x, y, z) < 0:
            raise MalformedHypergraph("element counts must be non-negative")
        for t in ts:
            if len(t) != 3 or not (0 <= t[0] < x and 0 <= t[1] < y and 0 <= t[2] < z):
                raise MalformedHypergraph(f"triple {t} out of range")
        if len(set(ts)) != len(ts):
            raise MalformedHypergraph("repeated triple")
        return cls(x, y, z, tuple(sorted(ts)))

    def is_two_regular(self) -> bool:
        for axis, size in enumerate((self.x, self.y, self.z)):
            counts = [0] * size
            for t in self.triples:
                counts[t[axis]] += 1
            if any(c != 2 for c in counts):
                return False
        return True

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "z": self.z,
                "triples": [[a + 1, b + 1, c + 1] for a, b, c in self.triples]}

    @classmethod
    def from_dict(cls, data: dict) -> "ThreeDimMatchingInstance":
        try:
            return cls.build(int(data["x"]), int(data["y"]), int(data["z"]),
                             [[int(v) - 1 for v in t] for t in data["triples"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedHypergraph(f"malformed 3DM document: {exc!r}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def fig4_3dm() -> ThreeDimMatchingInstance:
    """Two elements per class, four triples; every element lies in two triples."""
    return ThreeDimMatchingInstance.build(2, 2, 2, [(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)])


def is_3dm(h: ThreeDimMatchingInstance, chosen: Iterable[int]) -> bool:
    seen: list[set[int]] = [set(), set(), set()]
    for i in chosen:
        for axis in range(3):
            v = h.triples[i][axis]
            if v in seen[axis]:
                return False
            seen[axis].add(v)
    return True


def max_3dm_bruteforce(h: ThreeDimMatchingInstance) -> list[int]:
    """Largest set of pairwise coordinate-disjoint triples (first found in index order)."""
    best: list[int] = []
    chosen: list[int] = []
    used: list[set[int]] = [set(), set(), set()]
    m = len(h.triples)

    def dfs(i: int) -> None:
        nonlocal best
        if len(chosen) + (m - i) <= len(best):
            return
        if i == m:
            best = list(chosen)
            return
        t = h.triples[i]
        if all(t[a] not in used[a] for a in range(3)):
            for a in range(3):
                used[a].add(t[a])
            chosen.append(i)
            dfs(i + 1)
            chosen.pop()
            for a in range(3):
                used[a].discard(t[a])
        dfs(i + 1)

    dfs(0)
    return best


def random_two_regular_3dm(q: int, seed: int, attempts: int = 1000) -> ThreeDimMatchingInstance:
    """Random instance with q elements per class, each element in exactly two triples."""
    if q < 2:
        raise InvalidParams("q must be >= 2 (q = 1 would repeat its only triple)")
    rng = random.Random(seed)
    for _ in range(attempts):
        cols = []
        for _axis in range(3):
            col = [v for v in range(q) for _ in range(2)]
            rng.shuffle(col)
            cols.append(col)
        triples = list(zip(*cols))
        if len(set(triples)) == len(triples):
            return ThreeDimMatchingInstance.build(q, q, q, triples)
    raise InvalidParams(f"no simple 2-regular instance found for q={q}")


# Gadget layout for triple i of a sorted instance with h triples:
#   S: e^X_i = i,  y_j = h + j,  e^Z_i = h + |Y| + i
#   T: x_j = j,  e^Y_i = |X| + i,  z_j = |X| + h + j
#   edges 5i..5i+4: e^X e^Y, e^Z e^Y, x e^X, y e^Y, z e^Z
INTERNAL = (0, 1)
ELEMENT = (2, 3, 4)


def gen_from_3dm(h: ThreeDimMatchingInstance) -> DoubleMatchingInstance:
    """Double-matching instance whose optimum is |F*| + 2|H| (= |F*| + 4|Z| when 2-regular)."""
    m = len(h.triples)
    s_count = 2 * m + h.y
    t_count = h.x + m + h.z
    edges: list[tuple[int, int]] = []
    for i, (x, y, z) in enumerate(h.triples):
        ex, ez, ey = i, m + h.y + i, h.x + i
        edges += [(ex, ey), (ez, ey), (ex, x), (m + y, ey), (ez, h.x + m + z)]
    s1 = frozenset(range(m + h.y))
    s2 = frozenset(range(m, s_count))
    return DoubleMatchingInstance(s_count, t_count, tuple(edges), s1, s2)


def solution_from_3dm(h: ThreeDimMatchingInstance, chosen: Iterable[int]) -> list[int]:
    """Element edges for chosen triples, internal pair for the rest."""
    chosen = set(chosen)
    out = []
    for i in range(len(h.triples)):
        out += [5 * i + j for j in (ELEMENT if i in chosen else INTERNAL)]
    return out


def extract_3dm(solution: Iterable[int], h: ThreeDimMatchingInstance) -> tuple[list[int], list[int]]:
    """Canonicalize a double matching and read off a 3-dimensional matching.

    Gadgets holding fewer than three edges are reset to their internal pair,
    which never shrinks the solution. Returns (triple indices, canonical edges).
    """
    dm = gen_from_3dm(h)
    sol = set(solution)
    if any(not 0 <= i < len(dm.edges) for i in sol) or not is_double_matching(dm, sol):
        raise InfeasibleInput("not a feasible double matching of the reduction")
    chosen = [i for i in range(len(h.triples)) if len(sol & set(range(5 * i, 5 * i + 5))) == 3]
    return chosen, solution_from_3dm(h, chosen)


# --------------------------------------------------------------------------- Hamiltonian path


@dataclass(frozen=True)
class SimpleGraph:
    nodes: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, nodes: int, edges: Iterable[Sequence[int]]) -> "SimpleGraph":
        out = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < nodes and 0 <= v < nodes):
                raise InvalidParams(f"edge {e} out of range")
            if u == v:
                raise InvalidParams(f"loop at {u}")
            key = (min(u, v), max(u, v))
            if key in out:
                raise InvalidParams(f"parallel edge {key}")
            out.add(key)
        return cls(nodes, tuple(sorted(out)))

    def to_dict(self) -> dict:
        return {"nodes": self.nodes, "edges": [[u + 1, v + 1] for u, v in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "SimpleGraph":
        try:
            return cls.build(int(data["nodes"]), [[int(u) - 1, int(v) - 1] for u, v in data["edges"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParams(f"malformed graph document: {exc!r}") from exc


def all_graphs(nodes: int) -> Iterable[SimpleGraph]:
    pairs = list(itertools.combinations(range(nodes), 2))
    for mask in range(1 << len(pairs)):
        yield SimpleGraph(nodes, tuple(p for b, p in enumerate(pairs) if mask >> b & 1))


def has_hamiltonian_path(g: SimpleGraph) -> bool:
    adj = set(g.edges) | {(v, u) for u, v in g.edges}
    if g.nodes <= 1:
        return True
    return any(all((p[i], p[i + 1]) in adj for i in range(g.nodes - 1))
               for p in itertools.permutations(range(g.nodes)))


def gen_from_hampath(g: SimpleGraph) -> tuple[Instance, tuple[int, ...]]:
    """d = 2 instance: S = V, one T-node per non-adjacent pair, joined to both ends.

    The returned profile is the degree of every S-node. A perfect solution
    needs every edge, i.e. every non-adjacent pair at distance >= 2, so the
    order must place only adjacent nodes next to each other.
    The instance bound is max(profile, 1) since bounds must be positive.
    """
    present = set(g.edges)
    comp = [p for p in itertools.combinations(range(g.nodes), 2) if p not in present]
    edges = []
    for t, (u, v) in enumerate(comp):
        edges += [(u, t, 1), (v, t, 1)]
    deg = [0] * g.nodes
    for u, v in comp:
        deg[u] += 1
        deg[v] += 1
    inst = Instance.build(g.nodes, len(comp), edges, 2, cyclic=False, b_s=[max(x, 1) for x in deg])
    return inst, tuple(deg)


# --------------------------------------------------------------------------- random families


@dataclass(frozen=True)
class RandomParams:
    n: int
    t_count: int
    d: int
    cyclic: bool = False
    edge_prob: float = 0.5
    weight_min: int = 0
    weight_max: int = 10
    weight_den: int = 1
    b_s_min: int = 1
    b_s_max: int = 1
    b_t_min: int | None = None  # None: every b(t) unbounded
    b_t_max: int | None = None
    max_edges: int | None = None

    def validate(self) -> None:
        if self.n < 0 or self.t_count < 0 or self.d < 1:
            raise InvalidParams("need n >= 0, t_count >= 0, d >= 1")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise InvalidParams("edge_prob must lie in [0, 1]")
        if not 0 <= self.weight_min <= self.weight_max or self.weight_den < 1:
            raise InvalidParams("bad weight range")
        if not 1 <= self.b_s_min <= self.b_s_max:
            raise InvalidParams("bad b_s range")
        if (self.b_t_min is None) != (self.b_t_max is None):
            raise InvalidParams("give both b_t bounds or neither")
        if self.b_t_min is not None and not 1 <= self.b_t_min <= self.b_t_max:
            raise InvalidParams("bad b_t range")
        if self.max_edges is not None and self.max_edges < 0:
            raise InvalidParams("max_edges must be >= 0")


def gen_random(params: RandomParams, seed: int) -> Instance:
    params.validate()
    rng = random.Random(seed)
    p = params
    pairs = [(s, t) for s in range(p.n) for t in range(p.t_count) if rng.random() < p.edge_prob]
    if p.max_edges is not None and len(pairs) > p.max_edges:
        pairs = sorted(rng.sample(pairs, p.max_edges))
    edges = [(s, t, Fraction(rng.randint(p.weight_min * p.weight_den, p.weight_max * p.weight_den), p.weight_den))
             for s, t in pairs]
    b_s = [rng.randint(p.b_s_min, p.b_s_max) for _ in range(p.n)]
    b_t = None if p.b_t_min is None else [rng.randint(p.b_t_min, p.b_t_max) for _ in range(p.t_count)]
    return Instance.build(p.n, p.t_count, edges, p.d, p.cyclic, b_s, b_t)
