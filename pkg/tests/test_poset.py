import itertools

import pytest

from blocklat.poset import Poset, PosetCycleError, poset_from_json, poset_to_json


def vee():
    return Poset.from_covers(3, [(0, 2), (1, 2)])


class TestConstruction:
    def test_antichain(self):
        p = Poset.antichain(2)
        assert p.covers() == []

    def test_chain(self):
        p = Poset.chain(2)
        assert p.leq[0][1] and not p.leq[1][0]

    def test_vee_covers(self):
        assert sorted(vee().covers()) == [(0, 2), (1, 2)]

    def test_transitive_closure(self):
        p = Poset.from_covers(3, [(0, 1), (1, 2)])
        assert p.leq[0][2]

    def test_cycle_detected(self):
        with pytest.raises(PosetCycleError):
            Poset.from_covers(2, [(0, 1), (1, 0)])

    def test_json_roundtrip(self):
        p = vee()
        assert poset_from_json(poset_to_json(p)) == p


class TestDownsets:
    def test_antichain_has_all_subsets(self):
        assert len(Poset.antichain(2).downsets()) == 4

    def test_chain_counts(self):
        assert len(Poset.chain(2).downsets()) == 3

    def test_vee_downsets(self):
        expected = {frozenset(), frozenset({0}), frozenset({1}),
                    frozenset({0, 1}), frozenset({0, 1, 2})}
        assert set(vee().downsets()) == expected

    def test_enumeration_matches_filter_oracle(self):
        for p in [vee(), Poset.chain(4), Poset.antichain(3),
                  Poset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])]:
            brute = set()
            n = p.size
            for r in range(n + 1):
                for sub in itertools.combinations(range(n), r):
                    if p.is_downset(sub):
                        brute.add(frozenset(sub))
            assert set(p.downsets()) == brute

    def test_closed_under_union_and_intersection(self):
        downs = set(vee().downsets())
        for a in downs:
            for b in downs:
                assert a & b in downs and a | b in downs

    def test_canonical_order(self):
        downs = Poset.antichain(2).downsets()
        assert downs == [frozenset(), frozenset({0}), frozenset({1}),
                         frozenset({0, 1})]


class TestAncestors:
    def test_vee_node0(self):
        p = vee()
        assert p.ancestors_strict(0) == {2}
        assert p.descendants_strict(0) == frozenset()
        assert p.ancestors_weak(0) == {0, 2}

    def test_chain_top(self):
        p = Poset.chain(2)
        assert p.ancestors_strict(1) == frozenset()
        assert p.descendants_strict(1) == {0}

    def test_antichain_everything_empty(self):
        p = Poset.antichain(3)
        assert all(not p.ancestors_strict(i) for i in range(3))

    def test_duality(self):
        p = Poset.from_covers(4, [(0, 1), (0, 2), (1, 3)])
        for i in range(4):
            for j in range(4):
                assert (j in p.ancestors_strict(i)) == (i in p.descendants_strict(j))


class TestLinearExtensions:
    def test_antichain_two(self):
        assert len(Poset.antichain(2).linear_extensions()) == 2

    def test_chain_one(self):
        assert Poset.chain(3).linear_extensions() == [(0, 1, 2)]

    def test_vee_two(self):
        assert sorted(vee().linear_extensions()) == [(0, 1, 2), (1, 0, 2)]

    def test_extensions_contain_the_order(self):
        p = Poset.from_covers(4, [(0, 1), (2, 3)])
        for order in p.linear_extensions():
            rank = {x: i for i, x in enumerate(order)}
            for i in range(4):
                for j in range(4):
                    if p.leq[i][j]:
                        assert rank[i] <= rank[j]


class TestIntersect:
    def test_opposite_chains_give_antichain(self):
        up = Poset.chain(2)
        down = Poset.from_covers(2, [(1, 0)])
        assert up.intersect(down) == Poset.antichain(2)

    def test_self_intersection(self):
        p = vee()
        assert p.intersect(p) == p

    def test_linext_intersection_recovers_vee(self):
        p = vee()
        out = None
        for order in p.linear_extensions():
            chain = Poset.total_order(order)
            out = chain if out is None else out.intersect(chain)
        assert out == p

    @pytest.mark.parametrize("p", [
        Poset.antichain(3), Poset.chain(4), vee(),
        Poset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)]),
        Poset.from_covers(5, [(0, 2), (1, 2), (2, 3), (2, 4)]),
        Poset.from_covers(6, [(0, 3), (1, 3), (1, 4), (2, 4), (3, 5)]),
    ])
    def test_intersection_of_all_linexts(self, p):
        out = None
        for order in p.linear_extensions():
            chain = Poset.total_order(order)
            out = chain if out is None else out.intersect(chain)
        assert out == p

    def test_includes(self):
        assert Poset.chain(2).includes(Poset.antichain(2))
        assert not Poset.antichain(2).includes(Poset.chain(2))


class TestRestriction:
    def test_restrict_keeps_order(self):
        p = Poset.from_covers(3, [(0, 1), (1, 2)])
        sub = p.restrict([0, 2])
        assert sub.leq[0][1]

    def test_isomorphic_to_relabelled(self):
        p = vee()
        q = Poset.from_covers(3, [(2, 0), (1, 0)])
        assert p.is_isomorphic(q)
        assert not p.is_isomorphic(Poset.chain(3))
