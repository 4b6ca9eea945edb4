"""Instances, matchings and the feasibility rules of (cyclic) d-distance b-matchings.

Indices are 0-based everywhere in the library. The JSON interchange format
uses 1-based indices; ``Instance.to_dict``/``Instance.from_dict`` translate.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import DuplicateEdge, IndexOutOfRange, NegativeWeight, NonPositiveBound


class _Unbounded:
    """Degree bound of +infinity. Compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __reduce__(self):
        return (_Unbounded, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("dbmatch.UNBOUNDED")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


UNBOUNDED = _Unbounded()


def is_unbounded(b) -> bool:
    return b is UNBOUNDED


def finite_cap(b, surrogate: int) -> int:
    """Replace UNBOUNDED by ``surrogate``; used only inside flow networks."""
    return surrogate if b is UNBOUNDED else min(b, surrogate)


class Edge(NamedTuple):
    s: int
    t: int
    w: Fraction


@dataclass(frozen=True)
class Instance:
    n: int
    t_count: int
    edges: tuple[Edge, ...]
    b_s: tuple[int, ...]
    b_t: tuple
    d: int
    cyclic: bool = False

    @classmethod
    def build(
        cls,
        n: int,
        t_count: int,
        edges: Iterable[Sequence],
        d: int,
        cyclic: bool = False,
        b_s: Sequence[int] | None = None,
        b_t: Sequence | None = None,
    ) -> "Instance":
        """Convenience constructor: b_s defaults to all ones, b_t to unbounded.

        ``b_t`` entries of ``None`` mean unbounded. The result is validated.
        """
        es = tuple(Edge(int(e[0]), int(e[1]), Fraction(e[2]) if len(e) > 2 else Fraction(1)) for e in edges)
        bs = tuple(b_s) if b_s is not None else (1,) * n
        bt = tuple(UNBOUNDED if b is None else b for b in b_t) if b_t is not None else (UNBOUNDED,) * t_count
        return validate_instance(cls(n, t_count, es, bs, bt, d, bool(cyclic)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edges_at_t(self, t: int) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.t == t]

    def edges_at_s(self, s: int) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.s == s]

    def with_edges(self, edge_ids: Iterable[int]) -> "Instance":
        """Same node sets and bounds, edge list restricted (ids are re-indexed)."""
        return Instance(self.n, self.t_count, tuple(self.edges[i] for i in edge_ids),
                        self.b_s, self.b_t, self.d, self.cyclic)

    def with_cyclic(self, cyclic: bool) -> "Instance":
        return Instance(self.n, self.t_count, self.edges, self.b_s, self.b_t, self.d, cyclic)

    def permuted(self, order: Sequence[int]) -> "Instance":
        """Reorder S so that original node ``order[p]`` sits at position ``p``.

        Edge ids are preserved, so a matching of the permuted instance can be
        reported with the original ids.
        """
        pos = [0] * self.n
        for p, s in enumerate(order):
            pos[s] = p
        edges = tuple(Edge(pos[e.s], e.t, e.w) for e in self.edges)
        b_s = tuple(self.b_s[s] for s in order)
        return Instance(self.n, self.t_count, edges, b_s, self.b_t, self.d, self.cyclic)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t_count": self.t_count,
            "d": self.d,
            "cyclic": self.cyclic,
            "b_s": list(self.b_s),
            "b_t": [None if b is UNBOUNDED else b for b in self.b_t],
            "edges": [[e.s + 1, e.t + 1, e.w.numerator, e.w.denominator] for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        try:
            edges = []
            for row in data["edges"]:
                s, t, num = int(row[0]), int(row[1]), int(row[2])
                den = int(row[3]) if len(row) > 3 else 1
                if den <= 0:
                    raise NegativeWeight(f"non-positive weight denominator in edge {row}")
                edges.append(Edge(s - 1, t - 1, Fraction(num, den)))
            b_t = tuple(UNBOUNDED if b is None else int(b) for b in data["b_t"])
            inst = cls(int(data["n"]), int(data["t_count"]), tuple(edges),
                       tuple(int(b) for b in data["b_s"]), b_t, int(data["d"]),
                       bool(data.get("cyclic", False)))
        except (KeyError, TypeError, IndexError) as exc:
            raise IndexOutOfRange(f"malformed instance document: {exc!r}") from exc
        return validate_instance(inst)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


def validate_instance(raw: Instance) -> Instance:
    if raw.d < 1:
        raise NonPositiveBound(f"d must be >= 1, got {raw.d}")
    if raw.n < 0 or raw.t_count < 0:
        raise IndexOutOfRange("node counts must be non-negative")
    if len(raw.b_s) != raw.n or len(raw.b_t) != raw.t_count:
        raise IndexOutOfRange("bound vectors do not match node counts")
    for b in raw.b_s:
        if b is UNBOUNDED or b < 1:
            raise NonPositiveBound(f"b(s) must be a positive integer, got {b!r}")
    for b in raw.b_t:
        if b is not UNBOUNDED and b < 1:
            raise NonPositiveBound(f"b(t) must be positive or UNBOUNDED, got {b!r}")
    seen = set()
    for e in raw.edges:
        if not (0 <= e.s < raw.n and 0 <= e.t < raw.t_count):
            raise IndexOutOfRange(f"edge {e} references a missing node")
        if e.w < 0:
            raise NegativeWeight(f"edge {e} has negative weight")
        if (e.s, e.t) in seen:
            raise DuplicateEdge(f"parallel edge s={e.s} t={e.t}")
        seen.add((e.s, e.t))
    return raw


@dataclass(frozen=True)
class Matching:
    edge_ids: frozenset[int]
    deg_s: tuple[int, ...]
    deg_t: tuple[int, ...]

    @classmethod
    def of(cls, inst: Instance, edge_ids: Iterable[int]) -> "Matching":
        ids = frozenset(edge_ids)
        deg_s = [0] * inst.n
        deg_t = [0] * inst.t_count
        for i in ids:
            e = inst.edges[i]
            deg_s[e.s] += 1
            deg_t[e.t] += 1
        return cls(ids, tuple(deg_s), tuple(deg_t))

    def sorted_ids(self) -> list[int]:
        return sorted(self.edge_ids)

    def __len__(self) -> int:
        return len(self.edge_ids)


class Side(enum.Enum):
    L = "L"
    R = "R"


def window(inst: Instance, i: int, side: Side | str) -> set[int]:
    """L_d(s_i) or R_d(s_i): the length-d interval ending or starting at ``i``."""
    side = Side(side)
    n, d = inst.n, inst.d
    if inst.cyclic:
        step = -1 if side is Side.L else 1
        return {(i + step * j) % n for j in range(d)}
    if side is Side.L:
        return set(range(max(i - d + 1, 0), i + 1))
    return set(range(i, min(i + d - 1, n - 1) + 1))


def distance_ok(n: int, d: int, cyclic: bool, i: int, j: int) -> bool:
    """Whether positions i != j may share a T-node."""
    gap = abs(i - j)
    if gap < d:
        return False
    return not cyclic or gap <= n - d


class ViolationKind(enum.Enum):
    DEGREE_S = "DegreeS"
    DEGREE_T = "DegreeT"
    DISTANCE = "Distance"
    CYCLIC_DISTANCE = "CyclicDistance"


class Violation(NamedTuple):
    kind: ViolationKind
    where: tuple


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...] = field(default=())

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.feasible


def check_feasible(inst: Instance, M: Matching | Iterable[int]) -> FeasibilityReport:
    if not isinstance(M, Matching):
        M = Matching.of(inst, M)
    out: list[Violation] = []
    for s, deg in enumerate(M.deg_s):
        if deg > inst.b_s[s]:
            out.append(Violation(ViolationKind.DEGREE_S, (s,)))
    for t, deg in enumerate(M.deg_t):
        if deg > inst.b_t[t]:
            out.append(Violation(ViolationKind.DEGREE_T, (t,)))
    by_t: dict[int, list[int]] = {}
    for i in sorted(M.edge_ids):
        by_t.setdefault(inst.edges[i].t, []).append(i)
    for ids in by_t.values():
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                i, j = inst.edges[ids[a]].s, inst.edges[ids[b]].s
                gap = abs(i - j)
                if gap < inst.d:
                    out.append(Violation(ViolationKind.DISTANCE, (ids[a], ids[b])))
                elif inst.cyclic and gap > inst.n - inst.d:
                    out.append(Violation(ViolationKind.CYCLIC_DISTANCE, (ids[a], ids[b])))
    return FeasibilityReport(tuple(out))


def weight(inst: Instance, M: Matching | Iterable[int]) -> Fraction:
    ids = M.edge_ids if isinstance(M, Matching) else M
    return sum((inst.edges[i].w for i in ids), Fraction(0))


def is_perfect(inst: Instance, M: Matching, b_profile: Sequence[int] | None = None) -> bool:
    """True iff every S-node meets its bound exactly.

    ``b_profile`` overrides ``inst.b_s``; reductions whose bound vector may
    contain zeros pass their own profile here.
    """
    if not isinstance(M, Matching):
        M = Matching.of(inst, M)
    target = inst.b_s if b_profile is None else b_profile
    return all(M.deg_s[s] == target[s] for s in range(inst.n))
