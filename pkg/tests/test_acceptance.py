"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import itertools
import json
import os

import numpy as np
import pytest

from blocklat import named_groups as ng
from blocklat.blockstruct import association_scheme, latin_square_obs, schemes_equal
from blocklat.groupprops import invariant_partitions, is_ob, is_pb, is_preprimitive, \
    is_quasihamiltonian, is_quasiprimitive, is_stratifiable, \
    subgroups_commute_via_partitions, two_closure
from blocklat.gwp import GwpSpec, gwp_generators, gwp_intersection, \
    pb_obstruction, semidirect_decomposition, verify_embedding
from blocklat.lattice import PartitionLattice
from blocklat.partition import commutes
from blocklat.perm import direct_product_product_action, same_group, \
    wreath_imprimitive
from blocklat.poset import Poset


def report(criterion, ok, text):
    print("ACCEPTANCE %2s: %s - %s" % (criterion, "PASS" if ok else "FAIL", text))
    assert ok, "criterion %s: %s" % (criterion, text)


def test_criterion_1_regular_order8_ob():
    expected = {"C8": True, "C4xC2": True, "C2^3": True, "Q8": True,
                "D4-regular": False}
    got = {name: is_ob(group)[0]
           for name, group in ng.order8_regular_groups().items()}
    report(1, got == expected,
           "regular order-8 OB verdicts %s" % sorted(got.items()))


def test_criterion_2_quasihamiltonian():
    q8 = ng.quaternion()
    q8q8 = ng.q8xq8_regular()
    qh = (is_quasihamiltonian(q8), is_quasihamiltonian(q8q8))
    ob = (is_ob(q8)[0], is_ob(q8q8)[0])
    report(2, qh == (True, False) and qh == ob,
           "Q8/Q8xQ8 quasi-hamiltonian %s matches regular-action OB %s"
           % (qh, ob))


def test_criterion_3_a5_on_15():
    group = ng.a5_on15()
    inv = invariant_partitions(group)
    shapes = [(p.num_blocks, p.block_sizes()[0]) for p in inv.partitions]
    ok = (shapes == [(15, 1), (5, 3), (1, 15)]
          and is_quasiprimitive(group)
          and not is_preprimitive(group, inv)[0]
          and is_ob(group, inv)[0])
    report(3, ok, "A5 on 15: lattice %s, quasiprimitive, not pre-primitive, OB"
           % shapes)


def test_criterion_4_flag_actions():
    flags21 = ng.gl32_flags21()
    inv = invariant_partitions(flags21)
    borel_ok = (inv.size == 4 and inv.lattice.is_distributive()
                and not is_ob(flags21, inv)[0])
    pentagon = PartitionLattice.close(list(ng.flag_partitions12()))
    witness = pentagon.find_forbidden_sublattice()
    pentagon_ok = (pentagon.size == 5 and not pentagon.is_modular()
                   and witness is not None and witness[0] == "P5")
    report(4, borel_ok and pentagon_ok,
           "GL(3,2) flags: Boolean 4, distributive, not OB; "
           "12-flag lattice is the pentagon with a P5 witness")


def test_criterion_5_latin_square_schemes():
    complete2 = association_scheme(latin_square_obs(2))
    plain2 = association_scheme(latin_square_obs(2, letters=0))
    ok = schemes_equal(complete2, plain2) and complete2.num_classes == 4

    def su_class_nonempty(obs):
        nontrivial = [p for p in obs.partitions if not p.is_universal()]
        return any(all(p.block_of[a] != p.block_of[b] for p in nontrivial)
                   for a in range(obs.degree) for b in range(obs.degree)
                   if a != b)

    for q in (2, 3):
        complete = association_scheme(latin_square_obs(q))
        ok = ok and complete.num_classes == q + 2  # q+1 classes plus diagonal
        ok = ok and not su_class_nonempty(latin_square_obs(q))
        ok = ok and su_class_nonempty(latin_square_obs(q, letters=q - 2))
    report(5, ok, "Latin-square schemes: q=2 with/without letters equal, "
                  "q+1 classes for q in {2,3}, S_U empty iff complete")


def test_criterion_6_gwp_degenerations():
    c2 = ng.cyclic(2)
    anti = gwp_generators(GwpSpec(Poset.antichain(2), [c2, c2]))
    chain = gwp_generators(GwpSpec(Poset.chain(2), [c2, c2]))
    ok = (anti.order() == 4
          and same_group(anti, direct_product_product_action(c2, c2))
          and chain.order() == 8
          and same_group(chain, wreath_imprimitive(c2, c2)))
    report(6, ok, "2-antichain = direct product (order 4), "
                  "2-chain = imprimitive wreath (order 8)")


def _all_posets(n):
    """Every partial order on n labelled points."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = []
    for mask in range(1 << len(pairs)):
        leq = np.eye(n, dtype=bool)
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                leq[i][j] = True
        try:
            poset = Poset(leq)
        except ValueError:
            continue
        if poset not in seen:
            seen.append(poset)
    return seen


def _spec_key(poset, names):
    """Canonical key of a spec up to simultaneous node relabelling."""
    n = poset.size
    best = None
    for sigma in itertools.permutations(range(n)):
        leq = tuple(bool(poset.leq[sigma[i]][sigma[j]])
                    for i in range(n) for j in range(n))
        key = (leq, tuple(names[sigma[i]] for i in range(n)))
        if best is None or key < best:
            best = key
    return best


def test_criterion_7_gwp_pb_theorem():
    c2 = ng.cyclic(2)
    anti22 = GwpSpec(Poset.antichain(2), [c2, c2])
    rep = gwp_generators(anti22)
    inv = invariant_partitions(rep)
    ok = (is_preprimitive(rep, inv)[0] and is_ob(rep, inv)[0]
          and not (is_ob(rep, inv)[0] and inv.lattice.is_distributive())
          and inv.size == 5 and len(anti22.poset.downsets()) == 4)
    anti23 = GwpSpec(Poset.antichain(2), [c2, ng.cyclic(3)])
    inv23 = invariant_partitions(gwp_generators(anti23))
    ok = ok and is_pb(gwp_generators(anti23), inv23) and inv23.size == 4

    # exhaustive sweep: every spec with <= 3 nodes over {C2, C3, S3}
    # (isomorphic relabellings deduplicated; verdicts are relabel-invariant)
    components = {"C2": ng.cyclic(2), "C3": ng.cyclic(3), "S3": ng.symmetric(3)}
    checked = 0
    seen = set()
    for n in (1, 2, 3):
        for poset in _all_posets(n):
            for names in itertools.product(sorted(components), repeat=n):
                key = _spec_key(poset, names)
                if key in seen:
                    continue
                seen.add(key)
                spec = GwpSpec(poset, [components[x] for x in names])
                if spec.total > 64:
                    continue
                group = gwp_generators(spec)
                lat = invariant_partitions(group)
                pb = is_ob(group, lat)[0] and lat.lattice.is_distributive()
                down = len(spec.poset.downsets())
                obstruction = pb_obstruction(spec)
                assert (obstruction is None) == pb, (poset, names)
                assert (lat.size == down) == pb, (poset, names)
                checked += 1
    report(7, ok and checked >= 100,
           "thm-gwpPP: C2,C2 antichain pre-primitive/OB/not PB (5 > 4), "
           "C2,C3 PB (4 = 4); obstruction agrees on %d specs" % checked)


def test_criterion_8_semidirect_decomposition():
    c2 = ng.cyclic(2)
    specs = {
        "vee": GwpSpec(Poset.from_covers(3, [(0, 2), (1, 2)]), [c2] * 3),
        "chain": GwpSpec(Poset.chain(2), [c2] * 2),
        "antichain2": GwpSpec(Poset.antichain(2), [c2] * 2),
        "antichain3": GwpSpec(Poset.antichain(3), [c2] * 3),
    }
    details = {}
    for name, spec in specs.items():
        rep = semidirect_decomposition(spec, 0)
        details[name] = (rep.kernel.order(), len(rep.classes),
                         rep.kernel_order_ok, rep.quotient_matches_subspec,
                         rep.classes_match_bruteforce)
    vee = details["vee"]
    ok = (vee[0] == 4 and vee[1] == 2
          and all(all(d[2:]) for d in details.values()))
    report(8, ok, "t:gwp_sdp: V-poset |N|=4 with 2 classes; kernel order, "
                  "sub-spec quotient and brute-force classes agree on %s"
           % sorted(details))


def test_criterion_9_linear_extension_intersection():
    c2 = ng.cyclic(2)
    vee = Poset.from_covers(3, [(0, 2), (1, 2)])
    vspec = GwpSpec(vee, [c2] * 3)
    wreaths = [GwpSpec(Poset.total_order(e), vspec.components)
               for e in vee.linear_extensions()]
    orders = [gwp_generators(w).order() for w in wreaths]
    inter = gwp_intersection(wreaths[0], wreaths[1])
    opposite = gwp_intersection(
        GwpSpec(Poset.chain(2), [c2] * 2),
        GwpSpec(Poset.from_covers(2, [(1, 0)]), [c2] * 2))
    ok = (orders == [128, 128] and inter.intersection_order == 32
          and inter.matches
          and inter.intersection_order == gwp_generators(vspec).order()
          and opposite.intersection_order == 4 and opposite.matches)
    report(9, ok, "c:linext: V-poset wreaths (128 each) intersect to 32; "
                  "opposite chains intersect to the direct product (4)")


def test_criterion_10_embedding_theorem():
    d4 = verify_embedding(ng.dihedral(4))
    d4_ok = (d4.verdict and d4.gwp_order == 8
             and [d.group.order() for d in d4.node_data] == [2, 2])
    s6 = verify_embedding(ng.s6_square36())
    s6_ok = (s6.verdict
             and sorted(d.naive_group.order() for d in s6.node_data) == [120, 120]
             and sorted(d.group.order() for d in s6.node_data) == [720, 720]
             and all(s6.membership) and not any(s6.naive_membership))
    report(10, d4_ok and s6_ok,
           "t:embed: D4-on-4 = C2 wr C2 (order 8); S6-on-36 star components "
           "(720) pass, naive PGL(2,5) components (120) fail membership")


def test_criterion_11_implication_suite(fixture_groups, invariant_lattices):
    assert len(fixture_groups) >= 15
    degrees = sorted(g.degree for g in fixture_groups.values())
    assert degrees[0] >= 3 and degrees[-1] <= 64
    failures = []
    for name, group in sorted(fixture_groups.items()):
        inv = invariant_lattices[name]
        ob = is_ob(group, inv)[0]
        pb = ob and inv.lattice.is_distributive()
        pre = is_preprimitive(group, inv)[0]
        prim = inv.size == 2
        strat = is_stratifiable(group)
        qp = is_quasiprimitive(group)
        lat = inv.lattice
        chain_lattice = all(lat.leq[i][j] or lat.leq[j][i]
                            for i in range(lat.size) for j in range(lat.size))
        pairwise_commuting = all(
            commutes(lat.elements[i], lat.elements[j])
            for i in range(lat.size) for j in range(i + 1, lat.size))

        def check(cond, label):
            if not cond:
                failures.append("%s: %s" % (name, label))

        check(not prim or (qp and pre), "primitive => quasiprimitive+preprim")
        check(not pre or ob, "pre-primitive => OB")
        check(not strat or ob, "stratifiable => OB")
        check(not pb or ob, "PB => OB")
        check(not chain_lattice or ob, "chain lattice => OB")
        check(not lat.is_distributive() or lat.is_modular(),
              "distributive => modular")
        check(not pairwise_commuting or lat.is_modular(),
              "commuting lattice => modular")
        for i in range(inv.size):
            for j in range(i + 1, inv.size):
                a, b = subgroups_commute_via_partitions(
                    group, inv.partitions[i], inv.partitions[j])
                check(a == b, "t:com disagreement at pair (%d,%d)" % (i, j))
        if group.degree <= 12:
            check(ob == is_ob(two_closure(group))[0], "OB != OB(2-closure)")
        if group.degree in (9, 25):
            check(ob, "degree p^2 fixture must be OB")
    f21 = ng.frobenius21()
    if not is_ob(f21)[0] is False:
        failures.append("F21 regular should fail OB")
    report(11, not failures,
           "implications on %d fixtures, zero violations%s"
           % (len(fixture_groups),
              "" if not failures else ": " + "; ".join(failures[:5])))


CATALOG_DIR = os.environ.get("BLOCKLAT_CATALOG_DIR",
                             os.path.join(os.path.dirname(__file__), "..",
                                          "catalogs"))


def test_criterion_12_table1_survey(capsys):
    expected = {"10": {"transitive": 45, "ob": 44, "preprimitive": 42},
                "14": {"transitive": 63, "ob": 62, "preprimitive": 59}}
    manifests = {deg: os.path.join(CATALOG_DIR, "degree%s.json" % deg)
                 for deg in expected}
    if not all(os.path.exists(p) for p in manifests.values()):
        print("ACCEPTANCE 12: SKIP - transitive-group catalogs not present "
              "under %s; criterion 12 is catalog-conditional" % CATALOG_DIR)
        pytest.skip("transitive-group catalogs not present; survey "
                    "criterion skipped")
    from blocklat.cli import main
    for deg, path in manifests.items():
        code = main(["survey", path])
        out = capsys.readouterr().out
        rows = json.loads(out)["degrees"]
        report(12, code == 0 and rows[deg] == expected[deg],
               "Table 1 row for degree %s: %s" % (deg, rows.get(deg)))
