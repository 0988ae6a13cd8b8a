"""Generalised wreath products of permutation groups over posets.

Elements are explicit function tables: node i carries a map from the
ancestor product (the coordinates strictly above i in the poset) into the
component group G(m_i).  The action is coordinate-wise,

    (w f)_i = w_i applied-to f_i(ancestor tuple of w),

with every lookup using the original point w.  A 2-element antichain
degenerates to the direct product, a 2-chain to the imprimitive wreath
product, bit-exactly in the shared coordinate-fastest point encoding.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import groupprops, perm
from .blockstruct import downset_partition, point_to_tuple, product_size, \
    tuple_to_point
from .groupprops import InvariantLattice, invariant_partitions, \
    part_stabiliser_elements
from .lattice import PartitionLattice
from .partition import Partition, commutes
from .perm import CapExceeded, PermGroup, Permutation
from .poset import Poset

GWP_POINT_CAP = 4096


class GwpSpec:
    """A poset together with one transitive component group per node."""

    def __init__(self, poset: Poset, components, name=""):
        if len(components) != poset.size:
            raise ValueError("need one component group per poset element")
        self.poset = poset
        self.components = list(components)
        self.sizes = [g.degree for g in components]
        if any(n < 1 for n in self.sizes):
            raise ValueError("component degrees must be positive")
        self.total = product_size(self.sizes)
        if self.total > GWP_POINT_CAP:
            raise CapExceeded("domain of %d points beyond cap" % self.total)
        self.name = name
        n = poset.size
        self.anc = [sorted(poset.ancestors_strict(i)) for i in range(n)]
        self.anc_sizes = [[self.sizes[j] for j in self.anc[i]] for i in range(n)]
        self.n_anc = [product_size(s) for s in self.anc_sizes]
        # position of ancestor j inside anc[i], for nested lookups
        self._anc_pos = [{j: k for k, j in enumerate(self.anc[i])} for i in range(n)]
        self._component_elements = [None] * n

    @property
    def num_nodes(self):
        return self.poset.size

    def point_tuple(self, point):
        return point_to_tuple(self.sizes, point)

    def point_of(self, coords):
        return tuple_to_point(self.sizes, coords)

    def anc_tuple(self, coords, i):
        return tuple(coords[j] for j in self.anc[i])

    def anc_rank(self, i, anc_coords):
        return tuple_to_point(self.anc_sizes[i], anc_coords)

    def anc_unrank(self, i, rank):
        return point_to_tuple(self.anc_sizes[i], rank)

    def component_elements(self, i):
        if self._component_elements[i] is None:
            self._component_elements[i] = self.components[i].elements()
        return self._component_elements[i]

    def component_order(self, i):
        return len(self.component_elements(i))

    def order(self):
        """prod over nodes of |G(m_i)| ^ |ancestor product of i|."""
        total = 1
        for i in range(self.num_nodes):
            total *= self.component_order(i) ** self.n_anc[i]
        return total

    def identity_element(self):
        return GwpElement(tuple(
            tuple(Permutation.identity(self.sizes[i]) for _ in range(self.n_anc[i]))
            for i in range(self.num_nodes)))

    def downset_partition(self, downset) -> Partition:
        """Partition of the domain for a down-set of the poset."""
        if not self.poset.is_downset(downset):
            raise ValueError("%r is not a down-set" % (sorted(downset),))
        return downset_partition(self.poset, self.sizes, downset)

    def sub_spec(self, nodes) -> "GwpSpec":
        """Spec restricted to a subset of nodes (ascending order kept)."""
        nodes = sorted(nodes)
        return GwpSpec(self.poset.restrict(nodes),
                       [self.components[i] for i in nodes])


@dataclass(frozen=True)
class GwpElement:
    """Function tables: tables[i][ancestor rank] is an element of G(m_i)."""

    tables: tuple

    def node_table(self, i):
        return self.tables[i]


def gwp_act(spec: GwpSpec, f: GwpElement, point) -> int:
    """Image of a point: coordinate i moves by f_i at the ancestor tuple."""
    coords = spec.point_tuple(point)
    out = []
    for i in range(spec.num_nodes):
        g = f.tables[i][spec.anc_rank(i, spec.anc_tuple(coords, i))]
        out.append(g(coords[i]))
    return spec.point_of(out)


def gwp_realize(spec: GwpSpec, f: GwpElement) -> Permutation:
    """The element as a permutation of the whole domain."""
    return Permutation(gwp_act(spec, f, p) for p in range(spec.total))


def gwp_generators(spec: GwpSpec, name="") -> PermGroup:
    """The product group: one generator per (node, ancestor tuple, component gen)."""
    gens = []
    identity = spec.identity_element()
    for i in range(spec.num_nodes):
        for rank in range(spec.n_anc[i]):
            for g in spec.components[i].generators:
                tables = [list(t) for t in identity.tables]
                tables[i][rank] = g
                gens.append(gwp_realize(
                    spec, GwpElement(tuple(tuple(t) for t in tables))))
    return PermGroup(spec.total, gens, name=name or spec.name or "gwp")


def act_on_ancestors(spec: GwpSpec, f: GwpElement, i, anc_coords):
    """Image of an ancestor tuple of node i under f.

    Well-defined because ancestors of ancestors are ancestors: coordinate
    j in A(i) moves by f_j evaluated at its own ancestor tuple, which is a
    sub-tuple of anc_coords.
    """
    pos = spec._anc_pos[i]
    out = []
    for k, j in enumerate(spec.anc[i]):
        sub = tuple(anc_coords[pos[m]] for m in spec.anc[j])
        g = f.tables[j][spec.anc_rank(j, sub)]
        out.append(g(anc_coords[k]))
    return tuple(out)


def gwp_multiply(spec: GwpSpec, f: GwpElement, h: GwpElement) -> GwpElement:
    """(f h)_i(x) = f_i(x) * h_i(x moved by f)."""
    tables = []
    for i in range(spec.num_nodes):
        row = []
        for rank in range(spec.n_anc[i]):
            anc = spec.anc_unrank(i, rank)
            moved = spec.anc_rank(i, act_on_ancestors(spec, f, i, anc))
            row.append(f.tables[i][rank] * h.tables[i][moved])
        tables.append(tuple(row))
    return GwpElement(tuple(tables))


def gwp_inverse(spec: GwpSpec, f: GwpElement) -> GwpElement:
    """The element with f * f^-1 the identity."""
    tables = []
    for i in range(spec.num_nodes):
        moved = [spec.anc_rank(i, act_on_ancestors(spec, f, i, spec.anc_unrank(i, r)))
                 for r in range(spec.n_anc[i])]
        row = [None] * spec.n_anc[i]
        for rank, target in enumerate(moved):
            row[target] = f.tables[i][rank].inverse()
        tables.append(tuple(row))
    return GwpElement(tuple(tables))


def gwp_membership(spec: GwpSpec, p: Permutation):
    """Decompose a permutation into a GWP element, if possible.

    Returns (element, None) on success and (None, node) on failure, where
    node is the first coordinate whose induced maps either depend on a
    non-ancestor coordinate or fall outside the component group.
    """
    if p.degree != spec.total:
        raise ValueError("degree mismatch")
    maps = [[{} for _ in range(spec.n_anc[i])] for i in range(spec.num_nodes)]
    for point in range(spec.total):
        coords = spec.point_tuple(point)
        image = spec.point_tuple(p(point))
        for i in range(spec.num_nodes):
            m = maps[i][spec.anc_rank(i, spec.anc_tuple(coords, i))]
            prev = m.setdefault(coords[i], image[i])
            if prev != image[i]:
                return None, i
    tables = []
    for i in range(spec.num_nodes):
        row = []
        for m in maps[i]:
            images = [m[v] for v in range(spec.sizes[i])]
            if sorted(images) != list(range(spec.sizes[i])):
                return None, i
            g = Permutation(images)
            if g not in spec.component_elements(i):
                return None, i
            row.append(g)
        tables.append(tuple(row))
    element = GwpElement(tuple(tables))
    if gwp_realize(spec, element) != p:
        raise AssertionError("membership reconstruction failed to act like p")
    return element, None


def gwp_element_to_json(spec: GwpSpec, f: GwpElement) -> dict:
    """Per-node tables as image arrays, indexed by ancestor-tuple rank."""
    return {"tables": [[list(g.images) for g in f.tables[i]]
                       for i in range(spec.num_nodes)]}


def gwp_element_from_json(spec: GwpSpec, data) -> GwpElement:
    try:
        tables = tuple(
            tuple(Permutation(images) for images in data["tables"][i])
            for i in range(spec.num_nodes))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError("bad element dump: %s" % exc) from exc
    for i in range(spec.num_nodes):
        if len(tables[i]) != spec.n_anc[i]:
            raise ValueError("node %d table has %d entries, expected %d"
                             % (i, len(tables[i]), spec.n_anc[i]))
        for g in tables[i]:
            if g not in spec.component_elements(i):
                raise ValueError("node %d entry outside the component group" % i)
    return GwpElement(tables)


SDP_RELATION_NOTE = (
    "part classes use the join-based relation (same part of the partition "
    "for the down-set of all nodes not strictly above p); read literally, "
    "'same part of the join with every incomparable partition' would merge "
    "all parts whenever p has no incomparable elements, which contradicts "
    "the kernel of a plain wreath product, so the brute-force 'acts "
    "identically' relation is computed alongside for comparison")


@dataclass
class SdpReport:
    """Semidirect decomposition of a GWP at a minimal node."""

    part: Partition
    kernel: PermGroup
    quotient: PermGroup
    classes: list
    kernel_order_ok: bool
    quotient_matches_subspec: bool
    classes_match_bruteforce: bool
    relation_note: str = SDP_RELATION_NOTE


def _class_partition_of_parts(spec, p_node, part):
    """Group the parts of the node partition by the join-based relation:
    parts are equivalent when they lie in the same part of the partition
    for the down-set of all nodes not strictly above p.  See
    SDP_RELATION_NOTE and the brute-force cross-check in the report."""
    keep = set(range(spec.num_nodes)) - spec.poset.ancestors_strict(p_node)
    big = spec.downset_partition(keep)
    classes = {}
    for idx, block in enumerate(part.blocks):
        classes.setdefault(big.block_of[block[0]], []).append(idx)
    return [classes[k] for k in sorted(classes)]


def _bruteforce_part_classes(spec, p_node, part, kernel):
    """Parts equivalent iff every kernel element acts identically on them.

    Parts are copies of the node's domain via the p-coordinate; the
    signature of a part under a kernel element is the induced coordinate
    map.
    """
    kernel_elements = sorted(kernel.elements(), key=lambda q: q.images)
    sigs = []
    for block in part.blocks:
        by_coord = sorted(block, key=lambda pt: spec.point_tuple(pt)[p_node])
        sig = tuple(
            tuple(spec.point_tuple(n(pt))[p_node] for pt in by_coord)
            for n in kernel_elements)
        sigs.append(sig)
    classes = {}
    for idx, sig in enumerate(sigs):
        classes.setdefault(sig, []).append(idx)
    return sorted(classes.values(), key=lambda c: c[0])


def semidirect_decomposition(spec: GwpSpec, p_node) -> SdpReport:
    """Split the GWP as (parts kernel) by (group induced on the parts).

    p_node must be minimal.  The quotient is compared against the GWP of
    the remaining nodes, the kernel order against |G(p)|^(number of part
    classes), and the join-based class relation against the brute-force
    "acts identically" relation.
    """
    if spec.poset.descendants_strict(p_node):
        raise ValueError("node %d is not minimal" % p_node)
    part = spec.downset_partition({p_node})
    G = gwp_generators(spec)
    kernel = perm.kernel_on_parts(G, part)
    quotient = perm.induced_action(G, part).image_group(name="on-parts")
    sub = spec.sub_spec([q for q in range(spec.num_nodes) if q != p_node])
    expected = gwp_generators(sub)
    classes = _class_partition_of_parts(spec, p_node, part)
    brute = _bruteforce_part_classes(spec, p_node, part, kernel)
    return SdpReport(
        part=part,
        kernel=kernel,
        quotient=quotient,
        classes=classes,
        kernel_order_ok=(kernel.order()
                         == spec.component_order(p_node) ** len(classes)),
        quotient_matches_subspec=perm.same_group(quotient, expected),
        classes_match_bruteforce=(sorted(map(tuple, classes))
                                  == sorted(map(tuple, brute))),
    )


def interval_group(spec: GwpSpec, J, K) -> PermGroup:
    """Group induced by the stabiliser of a P_J-part on the P_K-parts in it.

    J and K are down-sets with K inside J.  Permutation-equal to the GWP
    of the sub-spec on J minus K (checked by the caller via same_group).
    """
    J, K = frozenset(J), frozenset(K)
    if not K <= J:
        raise ValueError("K must be contained in J")
    pj = spec.downset_partition(J)
    pk = spec.downset_partition(K)
    G = gwp_generators(spec)
    gamma = frozenset(pj.block_containing(0))
    inner = [i for i, block in enumerate(pk.blocks) if set(block) <= gamma]
    position = {b: i for i, b in enumerate(inner)}
    images = set()
    for g in G.elements():
        if any(g(x) not in gamma for x in gamma):
            continue
        images.add(Permutation(position[pk.block_of[g(pk.blocks[b][0])]]
                               for b in inner))
    return PermGroup(len(inner), sorted(images, key=lambda q: q.images),
                     _elements=images)


def pb_obstruction(spec: GwpSpec):
    """Incomparable nodes whose groups are cyclic of the same prime order.

    Requires every component to be primitive (the theorem's hypothesis);
    returns the first such pair or None.
    """
    for i, comp in enumerate(spec.components):
        if not groupprops.is_primitive(comp):
            raise ValueError("component %d is not primitive" % i)

    def is_prime(n):
        return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))

    for i in range(spec.num_nodes):
        for j in range(i + 1, spec.num_nodes):
            if spec.poset.leq[i][j] or spec.poset.leq[j][i]:
                continue
            oi, oj = spec.component_order(i), spec.component_order(j)
            if oi == oj and is_prime(oi):
                return (i, j)
    return None


@dataclass
class GwpPropertyReport:
    report: groupprops.PropertyReport
    obstruction: tuple | None
    invariant_count: int
    downset_count: int

    def consistent(self):
        """thm-gwpPP part (b): no obstruction <=> PB <=> only down-set partitions."""
        pb = self.report.pb
        return ((self.obstruction is None) == pb
                and (self.invariant_count == self.downset_count) == pb)


def gwp_properties(spec: GwpSpec, quasiprimitivity=True) -> GwpPropertyReport:
    """Property report of the realised group plus the PB obstruction data."""
    obstruction = pb_obstruction(spec)
    G = gwp_generators(spec)
    inv = invariant_partitions(G)
    report = groupprops.analyze(G, quasiprimitivity=quasiprimitivity)
    down = spec.poset.downsets()
    for d in down:
        if spec.downset_partition(d) not in inv.lattice:
            raise AssertionError("down-set partition missing from the "
                                 "invariant lattice")
    out = GwpPropertyReport(report, obstruction, inv.size, len(down))
    if not out.consistent():
        raise AssertionError("thm-gwpPP equivalences fail on this spec")
    return out


@dataclass
class IntersectionReport:
    intersection_order: int
    expected_order: int
    matches: bool
    subgroup_checks: list


def gwp_intersection(spec1: GwpSpec, spec2: GwpSpec) -> IntersectionReport:
    """Element-set intersection of two GWPs with the same components.

    Verified against the GWP over the intersection of the posets; when one
    poset includes the other, the subgroup relation is checked through
    generator membership.
    """
    if spec1.sizes != spec2.sizes:
        raise ValueError("specs must share components")
    for a, b in zip(spec1.components, spec2.components):
        if a.generators != b.generators:
            raise ValueError("specs must share components")
    g1 = gwp_generators(spec1)
    g2 = gwp_generators(spec2)
    inter = g1.elements() & g2.elements()
    meet_poset = spec1.poset.intersect(spec2.poset)
    expected = gwp_generators(GwpSpec(meet_poset, spec1.components))
    checks = []
    for small, big in ((spec1, spec2), (spec2, spec1)):
        if big.poset.includes(small.poset):
            ok = all(gwp_membership(big, g)[0] is not None
                     for g in gwp_generators(small).generators)
            checks.append((small.poset.labels, ok))
    return IntersectionReport(
        intersection_order=len(inter),
        expected_order=expected.order(),
        matches=inter == expected.elements(),
        subgroup_checks=checks,
    )


@dataclass
class GstarData:
    """The two factor groups the embedding theorem attaches to a JI element."""

    element_index: int
    predecessor_index: int
    gset: list
    psi_index: int
    outer_index: int
    group: PermGroup        # G*(m): stabiliser action on the Psi-parts
    naive_group: PermGroup  # stabiliser of a part acting inside it, relabelled


def _induced_on_blocks(elements, part, block_indices):
    """Action of part-preserving permutations on a listed set of blocks."""
    position = {b: i for i, b in enumerate(block_indices)}
    images = set()
    for g in elements:
        images.add(Permutation(position[part.block_of[g(part.blocks[b][0])]]
                               for b in block_indices))
    return images


def gstar(G: PermGroup, inv, m_index) -> GstarData:
    """Factor groups for a JI element of a G-invariant distributive lattice.

    gset collects the partitions whose meet with the element is its
    predecessor; their join Psi stays in gset (distributivity), and G*(m)
    is the stabiliser of a (Psi join Pi)-part acting on the Psi-parts
    inside it.  The naive group (stabiliser of a Pi-part on the
    predecessor-parts inside) is returned on the same labels via the cell
    bijection, so naive <= G* elementwise.
    """
    lat = inv.lattice if isinstance(inv, InvariantLattice) else inv
    if not lat.is_distributive():
        raise ValueError("lattice is not distributive")
    pred = lat.predecessor(m_index)
    gset = [j for j in range(lat.size) if lat.meet_table[j][m_index] == pred]
    psi = gset[0]
    for j in gset[1:]:
        psi = lat.join_table[psi][j]
    if psi not in gset:
        raise AssertionError("join of the gset left the gset")
    outer = lat.join_table[psi][m_index]
    psi_part = lat.elements[psi]
    outer_part = lat.elements[outer]
    stab = part_stabiliser_elements(G, outer_part, 0)
    base_outer = set(outer_part.block_containing(0))
    psi_inside = [i for i, b in enumerate(psi_part.blocks) if set(b) <= base_outer]
    star_images = _induced_on_blocks(stab, psi_part, psi_inside)
    star = PermGroup(len(psi_inside), sorted(star_images, key=lambda q: q.images),
                     _elements=star_images)

    pi_part = lat.elements[m_index]
    pred_part = lat.elements[pred]
    base_pi = set(pi_part.block_containing(0))
    pred_inside = [i for i, b in enumerate(pred_part.blocks) if set(b) <= base_pi]
    pi_stab = part_stabiliser_elements(G, pi_part, 0)
    naive_images = _induced_on_blocks(pi_stab, pred_part, pred_inside)
    # cell bijection: each Psi-part inside the base outer part meets the
    # base Pi-part in exactly one predecessor part
    pred_position = {b: i for i, b in enumerate(pred_inside)}
    cell_of_label = []
    for i in psi_inside:
        cell = set(psi_part.blocks[i]) & base_pi
        cell_of_label.append(pred_position[pred_part.block_of[min(cell)]])
    relabelled = set()
    for g in naive_images:
        relabelled.add(Permutation(
            cell_of_label.index(g(cell_of_label[j]))
            for j in range(len(psi_inside))))
    naive = PermGroup(len(psi_inside), sorted(relabelled, key=lambda q: q.images),
                      _elements=relabelled)
    return GstarData(m_index, pred, gset, psi, outer, star, naive)


class EmbeddingError(ValueError):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


@dataclass
class EmbeddingReport:
    """Outcome of the generalised Krasner-Kaloujnine embedding pipeline."""

    poset: Poset
    ji_indices: list
    node_data: list            # GstarData per node
    coordinates_bijective: bool
    spec: GwpSpec
    naive_spec: GwpSpec
    membership: list           # per generator: bool, star spec
    naive_membership: list     # per generator: bool, naive spec
    gwp_order: int
    note: str = ""

    @property
    def verdict(self):
        return self.coordinates_bijective and all(self.membership)


def _downset_partition_index(lat, ji, nodes):
    idx = next(i for i, p in enumerate(lat.elements) if p.is_equality())
    for t in nodes:
        idx = lat.join_table[idx][ji[t]]
    return idx


def verify_embedding(G: PermGroup, pbs: PartitionLattice | None = None,
                     inv: InvariantLattice | None = None) -> EmbeddingReport:
    """Embed G into the GWP of the G*(m) over the JI poset of its lattice.

    Coordinates: coordinate t of a point is the label of its
    Pi_{M minus A[t]}-part inside its Pi_{M minus A(t)}-part, labels being
    transported from the base-point part by fixed orbit-transversal
    elements.  Membership of every generator in the star spec gives the
    verdict; the naive spec (with the smaller naive groups) is run for
    comparison.  A membership failure only refutes this canonical
    labelling, not the theorem, and is reported as such.
    """
    if not G.is_transitive():
        raise EmbeddingError("group is not transitive")
    if pbs is not None:
        for p in pbs.elements:
            if any(not p.is_invariant_under(g) for g in G.generators):
                raise EmbeddingError("supplied lattice is not G-invariant")
        lat = pbs
    else:
        inv = inv or invariant_partitions(G)
        lat = inv.lattice
    for i in range(lat.size):
        for j in range(i + 1, lat.size):
            if not commutes(lat.elements[i], lat.elements[j]):
                raise EmbeddingError("not OB: invariant partitions do not commute")
    if not lat.is_distributive():
        raise EmbeddingError("not PB: lattice is not distributive")
    wrapped = InvariantLattice(G, lat)
    poset, ji = lat.ji_poset()
    n_nodes = poset.size
    node_data = [gstar(G, wrapped, ji[t]) for t in range(n_nodes)]

    transversal = G.orbit(0)
    coords = []
    label_maps = []
    sizes = []
    for t in range(n_nodes):
        outer_idx = _downset_partition_index(
            lat, ji, sorted(set(range(n_nodes)) - poset.ancestors_strict(t)))
        inner_idx = _downset_partition_index(
            lat, ji, sorted(set(range(n_nodes)) - poset.ancestors_weak(t)))
        if outer_idx != node_data[t].outer_index or inner_idx != node_data[t].psi_index:
            raise AssertionError("Birkhoff identities for Psi failed")
        outer = lat.elements[outer_idx]
        inner = lat.elements[inner_idx]
        base_outer = outer.block_containing(0)
        base_labels = [i for i, b in enumerate(inner.blocks)
                       if set(b) <= set(base_outer)]
        position = {b: i for i, b in enumerate(base_labels)}
        sizes.append(len(base_labels))
        label_maps.append((outer, inner, position))
    for point in range(G.degree):
        tup = []
        for t in range(n_nodes):
            outer, inner, position = label_maps[t]
            rho = outer.block_containing(point)[0]
            back = transversal[rho].inverse()(point)
            tup.append(position[inner.block_of[back]])
        coords.append(tuple(tup))
    expected_total = product_size(sizes)
    bijective = (expected_total == G.degree
                 and len(set(coords)) == G.degree)
    star_spec = GwpSpec(poset, [d.group for d in node_data])
    naive_spec = GwpSpec(poset, [d.naive_group for d in node_data])
    membership, naive_membership = [], []
    if bijective:
        rank = {c: tuple_to_point(sizes, c) for c in coords}
        for g in G.generators:
            relabelled = [0] * G.degree
            for point in range(G.degree):
                relabelled[rank[coords[point]]] = rank[coords[g(point)]]
            gp = Permutation(relabelled)
            membership.append(gwp_membership(star_spec, gp)[0] is not None)
            naive_membership.append(gwp_membership(naive_spec, gp)[0] is not None)
    note = ""
    if bijective and not all(membership):
        note = ("membership not verified under the canonical transversal "
                "labelling; this does not refute the embedding theorem")
    return EmbeddingReport(
        poset=poset,
        ji_indices=ji,
        node_data=node_data,
        coordinates_bijective=bijective,
        spec=star_spec,
        naive_spec=naive_spec,
        membership=membership,
        naive_membership=naive_membership,
        gwp_order=star_spec.order(),
        note=note,
    )
