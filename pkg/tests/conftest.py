"""Shared strategies and independent oracles."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from dbmatch.core import UNBOUNDED, Instance

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def random_instance(rng: random.Random, n: int, t_count: int, d: int, cyclic: bool,
                    p: float = 0.5, max_edges: int | None = None, b_s_max: int = 1,
                    b_t_choices=(None,), w_max: int = 5, dens=(1,)) -> Instance:
    pairs = [(s, t) for s in range(n) for t in range(t_count) if rng.random() < p]
    if max_edges is not None and len(pairs) > max_edges:
        pairs = sorted(rng.sample(pairs, max_edges))
    edges = [(s, t, Fraction(rng.randint(0, w_max), rng.choice(dens))) for s, t in pairs]
    b_s = [rng.randint(1, b_s_max) for _ in range(n)]
    b_t = [rng.choice(b_t_choices) for _ in range(t_count)]
    return Instance.build(n, t_count, edges, d, cyclic, b_s, b_t)


@pytest.fixture
def rng():
    return random.Random(20240601)


@st.composite
def instances(draw, max_n=7, max_t=3, max_d=4, cyclic=None, finite_bt=True, max_b=2, max_edges=None):
    n = draw(st.integers(1, max_n))
    t_count = draw(st.integers(1, max_t))
    d = draw(st.integers(1, max_d))
    cyc = draw(st.booleans()) if cyclic is None else cyclic
    pairs = [(s, t) for s in range(n) for t in range(t_count)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges or len(pairs))) if pairs else []
    edges = [(s, t, draw(st.fractions(0, 6, max_denominator=3))) for s, t in sorted(chosen)]
    b_s = [draw(st.integers(1, max_b)) for _ in range(n)]
    bt_options = st.one_of(st.none(), st.integers(1, max_b)) if finite_bt else st.none()
    b_t = [draw(bt_options) for _ in range(t_count)]
    return Instance.build(n, t_count, edges, d, cyc, b_s, b_t)


# ---------------------------------------------------------------- oracles written independently of the package


def naive_feasible(inst: Instance, ids) -> bool:
    ids = list(ids)
    for s in range(inst.n):
        if sum(1 for i in ids if inst.edges[i].s == s) > inst.b_s[s]:
            return False
    for t in range(inst.t_count):
        if inst.b_t[t] is not UNBOUNDED and sum(1 for i in ids if inst.edges[i].t == t) > inst.b_t[t]:
            return False
    for a, b in itertools.combinations(ids, 2):
        ea, eb = inst.edges[a], inst.edges[b]
        if ea.t != eb.t:
            continue
        gap = abs(ea.s - eb.s)
        if gap < inst.d or (inst.cyclic and gap > inst.n - inst.d):
            return False
    return True


def subsets(m: int):
    for mask in range(1 << m):
        yield [i for i in range(m) if mask >> i & 1]


def subset_optimum(inst: Instance, ok) -> Fraction:
    best = Fraction(0)
    for ids in subsets(inst.m):
        if ok(ids):
            best = max(best, sum((inst.edges[i].w for i in ids), Fraction(0)))
    return best


def degree_ok(inst: Instance, ids, cap_s, cap_t) -> bool:
    ds = [0] * inst.n
    dt = [0] * inst.t_count
    for i in ids:
        ds[inst.edges[i].s] += 1
        dt[inst.edges[i].t] += 1
    return all(ds[s] <= cap_s[s] for s in range(inst.n)) and all(dt[t] <= cap_t[t] for t in range(inst.t_count))
