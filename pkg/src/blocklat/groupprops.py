"""Permutation-group predicates built on invariant partition lattices.

OB: the invariant partitions pairwise commute (form an orthogonal block
structure).  PB: additionally the lattice is distributive.  The other
predicates (pre-primitivity, quasiprimitivity, stratifiability, 2-closure,
partition-orthogonality, quasi-hamiltonicity) feed the implication suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import perm
from .blockstruct import AssociationScheme, fibre_partition, projection_partition, \
    verify_scheme
from .lattice import PartitionLattice
from .partition import Partition, commutes
from .perm import CapExceeded, PermGroup, Permutation

CANDIDATE_SUBSET_CAP = 2 ** 20
SUBGROUP_ORDER_CAP = 128
TWO_CLOSURE_DEGREE_CAP = 16
# beyond this many stabiliser orbits the orbit-union enumeration is hopeless
ORBIT_UNION_LIMIT = 12


def block_closure(G: PermGroup, seed_block) -> Partition:
    """Finest G-invariant partition merging the seed points into one class.

    Union-find closure: repeatedly force x ~ rep(x) to imply gx ~ g(rep x)
    for every generator, until stable (the AllBlocks primitive).
    """
    n = G.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
            return True
        return False

    seed = list(seed_block)
    for x in seed[1:]:
        union(seed[0], x)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            for x in range(n):
                r = find(x)
                if r != x and union(g(x), g(r)):
                    changed = True
    return Partition.from_labels([find(x) for x in range(n)])


def minimal_block_partition(G: PermGroup, alpha, beta) -> Partition:
    """Finest G-invariant partition in which alpha and beta share a part."""
    return block_closure(G, [alpha, beta])


def mulclose(gens, cap, start=None):
    """Breadth-first closure of permutations under composition."""
    if not gens:
        raise ValueError("need at least one permutation")
    els = set(start) if start else {Permutation.identity(gens[0].degree)}
    els.update(gens)
    frontier = list(els)
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = p * g
                if q not in els:
                    els.add(q)
                    new.append(q)
                    if len(els) > cap:
                        raise CapExceeded("closure exceeds cap %d" % cap)
        frontier = new
    return frozenset(els)


def enumerate_subgroups(G: PermGroup, order_cap=SUBGROUP_ORDER_CAP):
    """All subgroups, as (element frozenset, generator tuple) pairs.

    Cyclic subgroups first, then pairwise joins with cyclic subgroups
    iterated to a fixpoint; every subgroup is such an iterated join.
    Capped at groups of order `order_cap`.
    """
    elements = G.elements()
    if len(elements) > order_cap:
        raise CapExceeded("subgroup enumeration capped at order %d" % order_cap)
    order = len(elements)
    identity = Permutation.identity(G.degree)
    cyclics = {}
    for g in sorted(elements, key=lambda p: p.images):
        cyc = frozenset(mulclose([g], order))
        cyclics.setdefault(cyc, g)
    subs = {frozenset([identity]): ()}
    for cyc, g in cyclics.items():
        subs.setdefault(cyc, (g,))
    worklist = list(subs.items())
    while worklist:
        hset, hgens = worklist.pop()
        for cyc, g in cyclics.items():
            if cyc <= hset:
                continue
            joined = mulclose(list(hgens) + [g], order)
            if joined not in subs:
                subs[joined] = tuple(hgens) + (g,)
                worklist.append((joined, subs[joined]))
    return sorted(subs.items(),
                  key=lambda kv: (len(kv[0]), sorted(p.images for p in kv[0])))


def _product_set(H, K):
    return {h * k for h in H for k in K}


def sets_commute(H, K) -> bool:
    """HK == KH as element sets (trivially true for nested subgroups)."""
    if H <= K or K <= H:
        return True
    return _product_set(H, K) == _product_set(K, H)


def is_quasihamiltonian(G: PermGroup) -> bool:
    """Whether all subgroups pairwise commute (HK = KH).

    Enumerates the subgroups as in enumerate_subgroups, testing each new
    subgroup against the ones already found and stopping at the first
    non-commuting pair.
    """
    found = []
    for hset, _ in enumerate_subgroups(G):
        for kset in found:
            if not sets_commute(hset, kset):
                return False
        found.append(hset)
    return True


@dataclass
class InvariantLattice:
    """The lattice of G-invariant partitions with per-partition shape data."""

    group: PermGroup
    lattice: PartitionLattice

    @property
    def partitions(self):
        return self.lattice.elements

    @property
    def size(self):
        return self.lattice.size

    def shapes(self):
        return [(p.num_blocks, p.block_sizes()[0]) for p in self.partitions]


def _regular_block_candidates(G: PermGroup):
    """Blocks through 0 of a regular group are exactly its subgroups."""
    candidates = []
    for hset, _ in enumerate_subgroups(G):
        candidates.append(frozenset(h.images[0] for h in hset))
    return candidates


def invariant_partitions(G: PermGroup,
                         candidate_cap=CANDIDATE_SUBSET_CAP) -> InvariantLattice:
    """All G-invariant partitions of a transitive group, as a closed lattice.

    Candidate blocks through 0 are unions of stabiliser orbits (the
    partition-subgroup correspondence); a candidate B is accepted when the
    minimal-block closure of B has exactly B as its part at 0.  Regular
    groups with many orbits are handled through subgroup enumeration
    instead, since every subgroup is a block through 0.
    """
    if not G.is_transitive():
        raise ValueError("invariant_partitions requires a transitive group")
    stab = G.point_stabiliser(0)
    orbs = stab.orbits()
    non_base = [o for o in orbs if 0 not in o]
    regular = all(len(o) == 1 for o in orbs)
    if regular and len(non_base) > ORBIT_UNION_LIMIT:
        candidates = _regular_block_candidates(G)
    else:
        if 2 ** len(non_base) > candidate_cap:
            raise CapExceeded("2^%d candidate blocks exceed cap" % len(non_base))
        candidates = []
        for mask in range(2 ** len(non_base)):
            block = {0}
            for i, orb in enumerate(non_base):
                if mask >> i & 1:
                    block.update(orb)
            candidates.append(frozenset(block))
    partitions = []
    for block in candidates:
        part = block_closure(G, block)
        if frozenset(part.block_containing(0)) == block:
            partitions.append(part)
    lat = PartitionLattice.close(partitions, degree=G.degree)
    if lat.size != len(partitions):
        raise AssertionError("invariant family was not meet/join closed")
    return InvariantLattice(G, lat)


def is_ob(G: PermGroup, inv: InvariantLattice | None = None):
    """(OB verdict, witness): do all invariant partitions commute pairwise?

    The witness is the first non-commuting pair, None when OB holds.
    """
    inv = inv or invariant_partitions(G)
    parts = inv.partitions
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if not commutes(parts[i], parts[j]):
                return False, (parts[i], parts[j])
    return True, None


def is_pb(G: PermGroup, inv: InvariantLattice | None = None) -> bool:
    """OB with a distributive invariant lattice."""
    inv = inv or invariant_partitions(G)
    ob, _ = is_ob(G, inv)
    return ob and inv.lattice.is_distributive()


def is_primitive(G: PermGroup) -> bool:
    """Only trivial invariant partitions (via minimal block systems)."""
    if not G.is_transitive():
        return False
    if G.degree == 1:
        return True
    return all(minimal_block_partition(G, 0, beta).is_universal()
               for beta in range(1, G.degree))


def is_quasiprimitive(G: PermGroup) -> bool:
    """Every non-trivial normal subgroup is transitive.

    Checks that the normal closure of every non-identity element acts
    transitively; one computation per conjugacy class.
    """
    if not G.is_transitive():
        return False
    n = G.degree
    seen = set()
    for g in G.elements():
        if g.is_identity() or g in seen:
            continue
        cls = {g}
        frontier = [g]
        while frontier:
            h = frontier.pop()
            for w in G.generators:
                c = w.inverse() * h * w
                if c not in cls:
                    cls.add(c)
                    frontier.append(c)
        seen.update(cls)
        reach = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for h in cls:
                y = h(x)
                if y not in reach:
                    reach.add(y)
                    frontier.append(y)
        if len(reach) != n:
            return False
    return True


def is_preprimitive(G: PermGroup, inv: InvariantLattice | None = None):
    """(verdict, witness): is every invariant partition the orbit partition
    of the kernel of the action on its parts?

    E and U are skipped (their kernels trivially work for transitive G).
    The witness is the first failing partition.
    """
    inv = inv or invariant_partitions(G)
    for part in inv.partitions:
        if part.is_equality() or part.is_universal():
            continue
        kernel = perm.kernel_on_parts(G, part)
        if kernel.orbit_partition() != part:
            return False, part
    return True, None


def orbitals(G: PermGroup) -> np.ndarray:
    """Class matrix of the G-orbits on ordered pairs (pair breadth-first)."""
    n = G.degree
    cls = np.full((n, n), -1, dtype=int)
    c = 0
    for a in range(n):
        for b in range(n):
            if cls[a][b] != -1:
                continue
            cls[a][b] = c
            queue = [(a, b)]
            while queue:
                x, y = queue.pop()
                for g in G.generators:
                    gx, gy = g(x), g(y)
                    if cls[gx][gy] == -1:
                        cls[gx][gy] = c
                        queue.append((gx, gy))
            c += 1
    return cls


def is_stratifiable(G: PermGroup) -> bool:
    """Do the symmetrised orbitals form an association scheme?

    Transitive case only: paired orbital classes are merged and the
    intersection numbers checked directly.
    """
    if not G.is_transitive():
        raise ValueError("stratifiability implemented for transitive groups only")
    cls = orbitals(G)
    sym = np.minimum(cls, cls.T)
    return verify_scheme(AssociationScheme(sym))


def two_closure(G: PermGroup, degree_cap=TWO_CLOSURE_DEGREE_CAP) -> PermGroup:
    """Largest group with the same orbits on ordered pairs.

    Backtracking search for all permutations preserving the orbital class
    matrix (colour-preserving automorphisms); the returned group carries
    its full element set and a greedily reduced generating set.
    """
    n = G.degree
    if n > degree_cap:
        raise CapExceeded("two_closure capped at degree %d" % degree_cap)
    colour = orbitals(G)
    found = []
    img = [0] * n
    used = [False] * n

    def extend(k):
        if k == n:
            found.append(Permutation(list(img)))
            return
        for c in range(n):
            if used[c] or colour[k][k] != colour[c][c]:
                continue
            ok = True
            for i in range(k):
                if (colour[i][k] != colour[img[i]][c]
                        or colour[k][i] != colour[c][img[i]]):
                    ok = False
                    break
            if ok:
                img[k] = c
                used[c] = True
                extend(k + 1)
                used[c] = False

    extend(0)
    closure = frozenset(found)
    gens = []
    span = {Permutation.identity(n)}
    for p in sorted(closure, key=lambda q: q.images):
        if p not in span:
            gens.append(p)
            span = mulclose(gens, len(closure))
    return PermGroup(n, gens, name="2-closure", element_cap=G.element_cap,
                     _elements=closure)


def part_stabiliser_elements(G: PermGroup, part: Partition, point=0):
    """Elements of G fixing (setwise) the part containing the given point."""
    target = part.block_of[point]
    block = part.blocks[target]
    return frozenset(g for g in G.elements()
                     if all(part.block_of[g(x)] == target for x in block))


def subgroups_commute_via_partitions(G: PermGroup, p1: Partition, p2: Partition):
    """(partitions commute, HK == KH) for the part stabilisers at point 0.

    The two booleans agree by the partition-subgroup correspondence; both
    are computed independently so tests can assert the agreement.
    """
    c = commutes(p1, p2)
    H = part_stabiliser_elements(G, p1)
    K = part_stabiliser_elements(G, p2)
    return c, sets_commute(H, K)


def partition_orthogonal(G: PermGroup, H: PermGroup) -> bool:
    """Are all invariant partitions of the product action crossings?

    Checked via fibre == projection on both sides for every invariant
    partition of G x H acting coordinate-wise.
    """
    prod = perm.direct_product_product_action(G, H)
    sizes = (G.degree, H.degree)
    inv = invariant_partitions(prod)
    for part in inv.partitions:
        for side in (0, 1):
            try:
                proj = projection_partition(part, sizes, side)
            except ValueError:
                return False  # overlapping projections: not a crossing
            if fibre_partition(part, sizes, side) != proj:
                return False
    return True


def regular_normal_ob(G: PermGroup, normal_gens) -> bool:
    """OB test via a regular normal subgroup N.

    Enumerates the subgroups of N invariant under conjugation by the point
    stabiliser and checks they pairwise commute; agrees with is_ob by the
    regular-normal-subgroup theorem.
    """
    N = PermGroup(G.degree, normal_gens, element_cap=G.element_cap)
    n_elements = N.elements()
    if len(n_elements) != G.degree or len(N.orbit(0)) != G.degree:
        raise ValueError("supplied subgroup is not regular")
    g_elements = G.elements()
    for g in G.generators:
        for h in N.generators:
            if g.inverse() * h * g not in n_elements:
                raise ValueError("supplied subgroup is not normal in G")
        if g not in g_elements:
            raise ValueError("generator outside G")
    stab = G.point_stabiliser(0)
    invariant = []
    for hset, _ in enumerate_subgroups(N):
        if all(frozenset(s.inverse() * h * s for h in hset) == hset
               for s in stab.generators):
            invariant.append(hset)
    return all(sets_commute(invariant[i], invariant[j])
               for i in range(len(invariant)) for j in range(i + 1, len(invariant)))


@dataclass
class PropertyReport:
    """Named property booleans with witnesses for the failing ones."""

    transitive: bool
    primitive: bool = False
    quasiprimitive: bool = False
    preprimitive: bool = False
    ob: bool = False
    pb: bool = False
    stratifiable: bool = False
    lattice_size: int = 0
    witnesses: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "transitive": self.transitive,
            "primitive": self.primitive,
            "quasiprimitive": self.quasiprimitive,
            "preprimitive": self.preprimitive,
            "ob": self.ob,
            "pb": self.pb,
            "stratifiable": self.stratifiable,
            "lattice_size": self.lattice_size,
            "witnesses": self.witnesses,
        }


def analyze(G: PermGroup, quasiprimitivity=True) -> PropertyReport:
    """Full property report for a transitive group.

    quasiprimitivity=False skips the one check that always needs the full
    element set.
    """
    if not G.is_transitive():
        return PropertyReport(transitive=False)
    inv = invariant_partitions(G)
    ob, ob_witness = is_ob(G, inv)
    pre, pre_witness = is_preprimitive(G, inv)
    report = PropertyReport(
        transitive=True,
        primitive=inv.size == 2 if G.degree > 1 else True,
        quasiprimitive=is_quasiprimitive(G) if quasiprimitivity else False,
        preprimitive=pre,
        ob=ob,
        pb=ob and inv.lattice.is_distributive(),
        stratifiable=is_stratifiable(G),
        lattice_size=inv.size,
    )
    if ob_witness:
        report.witnesses["ob"] = [[list(b) for b in p.blocks] for p in ob_witness]
    if pre_witness:
        report.witnesses["preprimitive"] = [list(b) for b in pre_witness.blocks]
    return report
