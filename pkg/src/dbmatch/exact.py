"""Ground-truth solvers: exhaustive search, the exact rational LP relaxation, integrality gaps."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import UNBOUNDED, Instance, Matching, distance_ok, window
from .errors import InstanceTooLarge

DEFAULT_EDGE_LIMIT = 26


def solve_bruteforce(inst: Instance, limit: int = DEFAULT_EDGE_LIMIT) -> Matching:
    """Exact maximum-weight feasible matching by depth-first search.

    Edges are decided in index order, "take" before "skip", and an optimum is
    only replaced by a strictly heavier one. Among equal-weight optima the
    result is therefore the first in that order, i.e. the one whose 0/1
    characteristic vector is lexicographically largest.
    """
    m = inst.m
    if m > limit:
        raise InstanceTooLarge(f"{m} edges exceeds brute-force limit {limit}")
    edges = inst.edges
    n, d, cyc = inst.n, inst.d, inst.cyclic
    suffix = [Fraction(0)] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + edges[i].w
    deg_s = [0] * n
    deg_t = [0] * inst.t_count
    at_t: list[list[int]] = [[] for _ in range(inst.t_count)]
    chosen: list[int] = []
    best_w = Fraction(-1)
    best: list[int] = []

    def dfs(i: int, cur: Fraction) -> None:
        nonlocal best_w, best
        if cur + suffix[i] <= best_w:
            return
        if i == m:
            best_w, best = cur, list(chosen)
            return
        s, t, w = edges[i]
        if (deg_s[s] < inst.b_s[s] and deg_t[t] < inst.b_t[t]
                and all(distance_ok(n, d, cyc, s, j) for j in at_t[t])):
            deg_s[s] += 1
            deg_t[t] += 1
            at_t[t].append(s)
            chosen.append(i)
            dfs(i + 1, cur + w)
            chosen.pop()
            at_t[t].pop()
            deg_t[t] -= 1
            deg_s[s] -= 1
        dfs(i + 1, cur)

    dfs(0, Fraction(0))
    return Matching.of(inst, best)


class RowKind(enum.Enum):
    DEGREE_S = "DegreeS"
    DEGREE_T = "DegreeT"
    WINDOW = "DistanceWindow"
    BOX = "Box"


class LpRow(NamedTuple):
    coeffs: dict
    rhs: Fraction
    kind: RowKind
    key: tuple


@dataclass(frozen=True)
class LpModel:
    objective: tuple[Fraction, ...]
    rows: tuple[LpRow, ...]

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if any(v < 0 for v in x):
            return False
        return all(sum(c * x[j] for j, c in row.coeffs.items()) <= row.rhs for row in self.rows)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))


def window_starts(inst: Instance) -> range:
    """Start positions of the distance rows.

    Cyclic: every position. Non-cyclic: every start of a full-length window,
    plus position 0 when d > n so that the single truncated window is kept.
    """
    if inst.cyclic:
        return range(inst.n)
    return range(max(1, inst.n - inst.d + 1))


def build_lp(inst: Instance) -> LpModel:
    rows: list[LpRow] = []
    one = Fraction(1)
    for s in range(inst.n):
        rows.append(LpRow({i: one for i in inst.edges_at_s(s)}, Fraction(inst.b_s[s]), RowKind.DEGREE_S, (s,)))
    for t in range(inst.t_count):
        if inst.b_t[t] is not UNBOUNDED:
            rows.append(LpRow({i: one for i in inst.edges_at_t(t)}, Fraction(inst.b_t[t]), RowKind.DEGREE_T, (t,)))
    covered: set[int] = set()
    starts = window_starts(inst) if inst.n else range(0)
    for t in range(inst.t_count):
        at_t = inst.edges_at_t(t)
        for i in starts:
            win = window(inst, i, "R")
            coeffs = {e: one for e in at_t if inst.edges[e].s in win}
            covered.update(coeffs)
            rows.append(LpRow(coeffs, one, RowKind.WINDOW, (t, i)))
    for e in range(inst.m):
        if e not in covered:
            rows.append(LpRow({e: one}, one, RowKind.BOX, (e,)))
    return LpModel(tuple(e.w for e in inst.edges), tuple(rows))


def lp_solve(model: LpModel) -> tuple[Fraction, list[Fraction]]:
    """Maximise the objective over {x >= 0 : rows} with exact rational simplex.

    Every row is a <= constraint with non-negative right-hand side, so the
    slack basis is feasible and no phase one is needed. Bland's rule
    (lowest-label entering and leaving variable) prevents cycling.
    """
    nv = model.n_vars
    m = len(model.rows)
    # dictionary form: x_B[i] = b[i] - sum_j A[i][j] * x_N[j];  z = z0 + sum_j c[j] * x_N[j]
    A = [[Fraction(0)] * nv for _ in range(m)]
    b = [Fraction(row.rhs) for row in model.rows]
    for i, row in enumerate(model.rows):
        if row.rhs < 0:
            raise ValueError("negative right-hand side is not supported")
        for j, c in row.coeffs.items():
            A[i][j] = Fraction(c)
    c = list(model.objective)
    z = Fraction(0)
    nonbasic = list(range(nv))  # labels: originals 0..nv-1, slacks nv..nv+m-1
    basic = list(range(nv, nv + m))

    while True:
        enter = None
        for j in sorted(range(nv), key=lambda j: nonbasic[j]):
            if c[j] > 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = A[i][enter]
            if a > 0:
                ratio = b[i] / a
                if best is None or ratio < best or (ratio == best and basic[i] < basic[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise ArithmeticError("LP is unbounded")
        piv = A[leave][enter]
        row = A[leave]
        for j in range(nv):
            row[j] = row[j] / piv if j != enter else 1 / piv
        b[leave] /= piv
        for i in range(m):
            if i == leave:
                continue
            f = A[i][enter]
            if f == 0:
                continue
            Ai = A[i]
            for j in range(nv):
                if j == enter:
                    Ai[j] = -f * row[j]
                elif row[j]:
                    Ai[j] -= f * row[j]
            b[i] -= f * b[leave]
        f = c[enter]
        z += f * b[leave]
        for j in range(nv):
            if j == enter:
                c[j] = -f * row[j]
            elif row[j]:
                c[j] -= f * row[j]
        nonbasic[enter], basic[leave] = basic[leave], nonbasic[enter]

    x = [Fraction(0)] * nv
    for i, label in enumerate(basic):
        if label < nv:
            x[label] = b[i]
    return z, x


@dataclass(frozen=True)
class GapReport:
    lp_opt: Fraction
    ip_opt: Fraction
    gap: Fraction

    def to_dict(self) -> dict:
        return {
            "lp_num": self.lp_opt.numerator, "lp_den": self.lp_opt.denominator,
            "ip_num": self.ip_opt.numerator, "ip_den": self.ip_opt.denominator,
            "gap_num": self.gap.numerator, "gap_den": self.gap.denominator,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def integrality_gap(inst: Instance, limit: int = DEFAULT_EDGE_LIMIT) -> GapReport:
    M = solve_bruteforce(inst, limit)
    ip = sum((inst.edges[i].w for i in M.edge_ids), Fraction(0))
    lp, _ = lp_solve(build_lp(inst))
    gap = Fraction(1) if ip == 0 else lp / ip
    return GapReport(lp, ip, gap)


@dataclass(frozen=True)
class DoubleMatchingInstance:
    """Bipartite graph whose S-side is covered by two (possibly overlapping) classes."""

    s_count: int
    t_count: int
    edges: tuple[tuple[int, int], ...]
    s1: frozenset[int]
    s2: frozenset[int]

    def __post_init__(self):
        if self.s1 | self.s2 != frozenset(range(self.s_count)):
            raise ValueError("S1 and S2 must cover S")

    def to_dict(self) -> dict:
        return {
            "s_count": self.s_count,
            "t_count": self.t_count,
            "edges": [[s + 1, t + 1] for s, t in self.edges],
            "s1": sorted(s + 1 for s in self.s1),
            "s2": sorted(s + 1 for s in self.s2),
        }


def is_double_matching(dm: DoubleMatchingInstance, edge_ids) -> bool:
    seen_s: set[int] = set()
    seen_t1: set[int] = set()
    seen_t2: set[int] = set()
    for i in edge_ids:
        s, t = dm.edges[i]
        if s in seen_s:
            return False
        seen_s.add(s)
        if s in dm.s1:
            if t in seen_t1:
                return False
            seen_t1.add(t)
        if s in dm.s2:
            if t in seen_t2:
                return False
            seen_t2.add(t)
    return True


def solve_double_matching_bruteforce(dm: DoubleMatchingInstance, limit: int = 64) -> list[int]:
    """Maximum-size double matching by search over S-nodes.

    Every S-node lies in S1 or S2, so it takes at most one edge; each node of T
    takes at most one edge from S1 and at most one from S2.
    """
    if len(dm.edges) > limit:
        raise InstanceTooLarge(f"{len(dm.edges)} edges exceeds limit {limit}")
    inc: list[list[int]] = [[] for _ in range(dm.s_count)]
    for i, (s, _) in enumerate(dm.edges):
        inc[s].append(i)
    order = [s for s in range(dm.s_count) if inc[s]]
    used1 = [False] * dm.t_count
    used2 = [False] * dm.t_count
    chosen: list[int] = []
    best: list[int] = []

    def dfs(k: int) -> None:
        nonlocal best
        if len(chosen) + (len(order) - k) <= len(best):
            return
        if k == len(order):
            best = list(chosen)
            return
        s = order[k]
        in1, in2 = s in dm.s1, s in dm.s2
        for i in inc[s]:
            t = dm.edges[i][1]
            if (in1 and used1[t]) or (in2 and used2[t]):
                continue
            if in1:
                used1[t] = True
            if in2:
                used2[t] = True
            chosen.append(i)
            dfs(k + 1)
            chosen.pop()
            if in1:
                used1[t] = False
            if in2:
                used2[t] = False
        dfs(k + 1)

    dfs(0)
    return sorted(best)
