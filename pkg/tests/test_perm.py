import json

import pytest

from blocklat import named_groups as ng
from blocklat.partition import Partition
from blocklat.perm import CapExceeded, PermGroup, Permutation, compose, \
    coset_action, direct_product_product_action, group_from_generators, \
    group_from_json, group_to_json, induced_action, kernel_on_parts, same_group, \
    wreath_imprimitive


def perm(*images):
    return Permutation(images)


class TestCompose:
    def test_square_of_four_cycle(self):
        p = perm(1, 2, 3, 0)
        assert compose(p, p).images == (2, 3, 0, 1)

    def test_inverse_gives_identity(self):
        p = perm(2, 0, 3, 1)
        assert compose(p, p.inverse()).is_identity()

    def test_pointwise_hand_evaluation(self):
        # i -> q(p(i)): 0 -> q(1)=2, 1 -> q(0)=0, 2 -> q(2)=1
        assert compose(perm(1, 0, 2), perm(0, 2, 1)).images == (2, 0, 1)

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            compose(perm(0, 1), perm(0, 1, 2))

    def test_not_a_permutation(self):
        with pytest.raises(ValueError):
            Permutation([0, 0, 1])


class TestGroupFromGenerators:
    def test_cyclic_order(self):
        assert group_from_generators(4, [perm(1, 2, 3, 0)]).order() == 4

    def test_dihedral_closure_count(self):
        g = group_from_generators(4, [perm(1, 2, 3, 0), perm(2, 1, 0, 3)])
        assert g.order() == 8

    def test_trivial_group(self):
        assert group_from_generators(3, []).order() == 1

    def test_cap_exceeded(self):
        g = PermGroup(5, ng.symmetric(5).generators, element_cap=10)
        with pytest.raises(CapExceeded):
            g.elements()


class TestOrbit:
    def test_transitive_cycle(self):
        assert sorted(ng.cyclic(4).orbit(0)) == [0, 1, 2, 3]

    def test_fixed_point(self):
        g = group_from_generators(3, [perm(1, 0, 2)])
        assert sorted(g.orbit(2)) == [2]

    def test_two_cycles(self):
        g = group_from_generators(4, [perm(1, 0, 3, 2)])
        assert sorted(g.orbit(0)) == [0, 1]

    def test_transversal_words_map_basepoint(self):
        g = ng.symmetric(4)
        for beta, t in g.orbit(1).items():
            assert t(1) == beta


class TestPointStabiliser:
    def test_s3_stabiliser(self):
        s3 = ng.symmetric(3)
        stab = s3.point_stabiliser(0)
        assert stab.order() == 2
        assert all(g(0) == 0 for g in stab.generators)

    def test_regular_stabiliser_trivial(self):
        assert ng.cyclic(4).point_stabiliser(2).order() == 1

    def test_d4_stabiliser(self):
        assert ng.dihedral(4).point_stabiliser(0).order() == 2

    @pytest.mark.parametrize("group", [ng.symmetric(4), ng.dihedral(5),
                                       ng.alternating(5), ng.a5_on15()])
    def test_orbit_stabiliser_product(self, group):
        stab = group.point_stabiliser(0)
        assert len(group.orbit(0)) * stab.order() == group.order()


class TestCosetAction:
    def test_s3_on_transposition_cosets_recovers_natural(self):
        s3 = ng.symmetric(3)
        sub = [Permutation([1, 0, 2])]
        image, labels = coset_action(s3, sub)
        assert image.degree == 3
        assert image.order() == 6

    def test_a5_on_15_points(self):
        group = ng.a5_on15()
        assert group.degree == 15
        assert group.is_transitive()
        assert group.order() == 60

    def test_flag_action_has_degree_21(self):
        group = ng.gl32_flags21()
        assert group.degree == 21  # index 168/8
        assert group.is_transitive()

    def test_subgroup_not_contained(self):
        with pytest.raises(ValueError):
            coset_action(ng.alternating(4), [Permutation([1, 0, 2, 3])])

    def test_point_stabiliser_cosets_relabel_to_original(self):
        g = ng.dihedral(4)
        stab = g.point_stabiliser(0)
        image, labels = coset_action(g, list(stab.generators))
        # coset Hx corresponds to the point 0*x; the relabelled action is g's
        point_of = [rep(0) for rep in labels]
        assert sorted(point_of) == list(range(4))
        lookup = {point_of[i]: i for i in range(4)}
        for g_gen, h_gen in zip(g.generators, image.generators):
            for point in range(4):
                assert point_of[h_gen(lookup[point])] == g_gen(point)


class TestInducedAndKernel:
    def test_d4_on_diagonals(self):
        d4 = ng.dihedral(4)
        diag = Partition(4, [[0, 2], [1, 3]])
        record = induced_action(d4, diag)
        assert record.target_degree == 2
        assert record.image_group().order() == 2
        assert record.verify()

    def test_universal_partition_gives_trivial_action(self):
        record = induced_action(ng.symmetric(3), Partition.universal(3))
        assert record.target_degree == 1
        assert record.image_group().order() == 1

    def test_wreath_block_quotient(self):
        w = wreath_imprimitive(ng.cyclic(2), ng.cyclic(2))
        blocks = Partition(4, [[0, 1], [2, 3]])
        assert induced_action(w, blocks).image_group().order() == 2
        kernel = kernel_on_parts(w, blocks)
        assert kernel.order() == 4  # base group of the wreath

    def test_product_row_kernel(self):
        p = direct_product_product_action(ng.cyclic(2), ng.cyclic(2))
        rows = Partition(4, [[0, 1], [2, 3]])  # fixed second coordinate
        assert kernel_on_parts(p, rows).order() == 2

    def test_kernel_of_equality_is_trivial(self):
        assert kernel_on_parts(ng.symmetric(3), Partition.equality(3)).order() == 1

    def test_not_invariant_raises(self):
        with pytest.raises(ValueError):
            induced_action(ng.symmetric(3), Partition(3, [[0, 1], [2]]))

    def test_kernel_is_normal(self):
        w = wreath_imprimitive(ng.cyclic(2), ng.cyclic(2))
        blocks = Partition(4, [[0, 1], [2, 3]])
        kernel = kernel_on_parts(w, blocks)
        kset = kernel.elements()
        for g in w.generators:
            for k in kernel.generators:
                assert g.inverse() * k * g in kset

    @pytest.mark.parametrize("blocks", [[[0, 1], [2, 3]], [[0, 2], [1, 3]]])
    def test_order_factorises(self, blocks):
        w = wreath_imprimitive(ng.cyclic(2), ng.cyclic(2))
        part = Partition(4, blocks)
        try:
            record = induced_action(w, part)
        except ValueError:
            return  # not invariant; nothing to factorise
        kernel = kernel_on_parts(w, part)
        assert kernel.order() * record.image_group().order() == w.order()


class TestSameGroup:
    def test_inverse_generator(self):
        assert same_group(group_from_generators(4, [perm(1, 2, 3, 0)]),
                          group_from_generators(4, [perm(3, 0, 1, 2)]))

    def test_c4_vs_d4(self):
        assert not same_group(ng.cyclic(4), ng.dihedral(4))

    def test_wreath_intersection_is_direct_product(self):
        c2 = ng.cyclic(2)
        w1 = wreath_imprimitive(c2, c2)
        els = w1.elements()
        # reversed chain: blocks are the stride-2 sets {0,2}, {1,3}
        rev = PermGroup(4, [perm(2, 1, 0, 3), perm(0, 3, 2, 1), perm(1, 0, 3, 2)])
        inter = els & rev.elements()
        dp = direct_product_product_action(c2, c2)
        assert inter == dp.elements()


class TestProducts:
    def test_direct_product_order(self):
        assert direct_product_product_action(ng.cyclic(2), ng.cyclic(2)).order() == 4

    def test_wreath_order(self):
        assert wreath_imprimitive(ng.cyclic(2), ng.cyclic(2)).order() == 8

    def test_s3_wr_c2_order(self):
        assert wreath_imprimitive(ng.symmetric(3), ng.cyclic(2)).order() == 72

    def test_wreath_preserves_blocks(self):
        w = wreath_imprimitive(ng.symmetric(3), ng.cyclic(2))
        blocks = Partition(6, [[0, 1, 2], [3, 4, 5]])
        assert all(blocks.is_invariant_under(g) for g in w.generators)

    def test_product_preserves_rows_and_columns(self):
        p = direct_product_product_action(ng.cyclic(2), ng.cyclic(3))
        rows = Partition.from_labels([i % 2 for i in range(6)])
        cols = Partition.from_labels([i // 2 for i in range(6)])
        for g in p.generators:
            assert rows.is_invariant_under(g)
            assert cols.is_invariant_under(g)


class TestGroupFiles:
    def test_roundtrip(self):
        g = ng.dihedral(4)
        data = json.loads(json.dumps(group_to_json(g)))
        back = group_from_json(data)
        assert back.degree == 4 and same_group(back, g)

    def test_bad_payload(self):
        with pytest.raises(ValueError):
            group_from_json({"degree": 3})
