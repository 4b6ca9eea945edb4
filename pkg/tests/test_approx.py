import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dbmatch.approx import (
    RestrictedMode, approximate, decompose, decompose_cyclic, decompose_noncyclic, guarantee_factor,
    restrict_instance, restricted_edge_ids, solve_restricted,
)
from dbmatch.core import Instance, check_feasible, weight
from dbmatch.errors import DivisibilityViolated, DNotSupported, PreconditionViolated
from dbmatch.exact import build_lp, lp_solve, solve_bruteforce

from conftest import naive_feasible, random_instance


def bare(n, d, cyclic):
    return Instance.build(n, 1, [], d, cyclic)


class TestDecomposition:
    def test_cyclic_example(self):
        dec = decompose_cyclic(bare(6, 2, True))
        assert len(dec) == 3
        assert dec.pieces[0] == ((0, 1), (3, 4))
        assert dec.pieces[2] == ((2, 3), (5, 0))
        assert dec.classes[2] == frozenset({2, 3, 5, 0})

    def test_noncyclic_example(self):
        dec = decompose_noncyclic(bare(5, 3, False))
        assert len(dec) == 4 and dec.padded_n == 8
        assert dec.pieces[0] == ((0, 1, 2), (4, 5, 6))
        assert dec.pieces[3] == ((0, 1), (3, 4, 5), (7,))
        assert dec.classes[3] == frozenset({0, 1, 3, 4})

    def test_noncyclic_pads_short_orders(self):
        assert decompose_noncyclic(bare(1, 3, False)).padded_n == 4

    @pytest.mark.parametrize("n,d,cyclic", [(3, 2, True), (10, 3, True), (15, 3, True), (14, 4, True),
                                            (1, 2, False), (7, 2, False), (11, 3, False), (13, 4, False)])
    def test_each_position_in_exactly_d_classes(self, n, d, cyclic):
        dec = decompose(bare(n, d, cyclic))
        for p in range(n):
            assert sum(p in c for c in dec.classes) == d
        for pieces in dec.pieces:
            for piece in pieces:
                expect = [(piece[0] + j) % (n if cyclic else dec.padded_n) for j in range(len(piece))]
                assert list(piece) == expect
        assert len(dec) == (2 * d - 1 if cyclic else 2 * d - 2)

    @pytest.mark.parametrize("n,d", [(4, 2), (9, 3), (0, 2)])
    def test_divisibility(self, n, d):
        with pytest.raises(DivisibilityViolated):
            decompose_cyclic(bare(n, d, True))

    def test_unit_distance_rejected(self):
        with pytest.raises(DNotSupported):
            decompose_noncyclic(bare(4, 1, False))

    def test_pieces_within_class_are_far_apart(self):
        # cyclic pieces are d apart; non-cyclic neighbours sit exactly d-1 apart (a boundary pair)
        for n, d, cyclic in [(10, 3, True), (10, 3, False), (12, 4, False), (14, 4, True)]:
            dec = decompose(bare(n, d, cyclic))
            for pieces in dec.pieces:
                for a in pieces:
                    for b in pieces:
                        if a is b:
                            continue
                        for x in a:
                            for y in b:
                                if x < n and y < n:
                                    gap = abs(x - y)
                                    if cyclic:
                                        gap = min(gap, n - gap)
                                    assert gap >= (d if cyclic else d - 1)


def class_oracle(inst, cls):
    """Best subset of class edges that is feasible in the full instance."""
    ids = restricted_edge_ids(inst, cls)
    best = Fraction(0)
    for mask in range(1 << len(ids)):
        sub = [ids[j] for j in range(len(ids)) if mask >> j & 1]
        if naive_feasible(inst, sub):
            best = max(best, sum((inst.edges[i].w for i in sub), Fraction(0)))
    return best


def draw(rng, cyclic):
    d = rng.choice((2, 3, 4)) if not cyclic else rng.choice((2, 3))
    if cyclic:
        n = (2 * d - 1) * rng.randint(1, 3 if d == 2 else 2)
        bt = (None, 1, 2)
    else:
        n = rng.randint(1, 12)
        bt = (None,)
    return random_instance(rng, n, rng.randint(1, 3), d, cyclic, p=0.45, max_edges=12,
                           b_s_max=2, b_t_choices=bt, dens=(1, 2, 3))


class TestRestricted:
    @pytest.mark.parametrize("cyclic", [True, False])
    def test_matches_subset_oracle(self, cyclic):
        rng = random.Random(41 if cyclic else 43)
        for _ in range(250):
            inst = draw(rng, cyclic)
            dec = decompose(inst)
            for i, cls in enumerate(dec.classes):
                M = solve_restricted(inst, dec, i)
                assert all(inst.edges[e].s in cls for e in M.edge_ids)
                assert naive_feasible(inst, M.edge_ids)
                assert weight(inst, M) == class_oracle(inst, cls)

    @pytest.mark.parametrize("cyclic", [True, False])
    def test_restricted_lp_is_integral(self, cyclic):
        rng = random.Random(47 if cyclic else 53)
        for _ in range(60):
            inst = draw(rng, cyclic)
            dec = decompose(inst)
            for i, cls in enumerate(dec.classes):
                sub = restrict_instance(inst, cls)
                z, x = lp_solve(build_lp(sub))
                assert z == weight(inst, solve_restricted(inst, dec, i))
                assert all(v.denominator == 1 for v in x)

    def test_noncyclic_rejects_finite_bt(self):
        inst = Instance.build(4, 1, [(0, 0)], 2, b_t=[1])
        with pytest.raises(PreconditionViolated):
            solve_restricted(inst, decompose(inst), 0)

    def test_cyclic_mode_on_cyclic_decomposition(self):
        inst = Instance.build(3, 1, [(0, 0, 2), (1, 0, 3)], 2, cyclic=True)
        M = solve_restricted(inst, decompose(inst), 0, RestrictedMode.CYCLIC)
        assert weight(inst, M) == 3


class TestApproximate:
    @pytest.mark.parametrize("cyclic", [True, False])
    def test_guarantee(self, cyclic):
        rng = random.Random(59 if cyclic else 61)
        for _ in range(150):
            inst = draw(rng, cyclic)
            res = approximate(inst)
            opt = weight(inst, solve_bruteforce(inst))
            assert check_feasible(inst, res.matching)
            assert res.achieved_weight == weight(inst, res.matching) == max(res.class_weights)
            assert res.achieved_weight >= res.guarantee * opt
            if not cyclic and inst.d == 2:
                assert res.achieved_weight == opt

    def test_guarantee_factor(self):
        assert guarantee_factor(2, True) == Fraction(2, 3)
        assert guarantee_factor(3, False) == Fraction(3, 4)
        assert guarantee_factor(2, False) == 1
        assert guarantee_factor(1, True) == 1

    def test_tight_star(self):
        inst = Instance.build(3, 1, [(s, 0) for s in range(3)], 2, cyclic=True)
        res = approximate(inst)
        assert res.achieved_weight == 1 and res.best_class == 0

    def test_unit_distance_noncyclic_uses_b_matching(self):
        inst = Instance.build(2, 1, [(0, 0, 1), (1, 0, 2)], 1, b_t=[1])
        assert approximate(inst).achieved_weight == 2

    def test_noncyclic_finite_bt_rejected(self):
        with pytest.raises(PreconditionViolated):
            approximate(Instance.build(4, 1, [(0, 0)], 2, b_t=[2]))

    @settings(max_examples=80, deadline=None)
    @given(data=st.data())
    def test_feasible_and_bounded_by_lp(self, data):
        d = data.draw(st.integers(2, 3))
        n = (2 * d - 1) * data.draw(st.integers(1, 2))
        rng = random.Random(data.draw(st.integers(0, 10**6)))
        inst = random_instance(rng, n, 2, d, True, p=0.4, max_edges=10, b_s_max=2, b_t_choices=(None, 1))
        res = approximate(inst)
        z, _ = lp_solve(build_lp(inst))
        assert check_feasible(inst, res.matching)
        assert res.guarantee * z <= res.achieved_weight <= z
