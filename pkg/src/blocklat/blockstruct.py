"""Orthogonal and poset block structures, and derived association schemes.

Product domains are encoded mixed-radix with coordinate 1 fastest:
point(w) = w_1 + n_1*(w_2 + n_2*(...)).  The gwp module shares these
helpers so both modules agree bit-exactly on point labels.
"""

from __future__ import annotations

import numpy as np

from .lattice import PartitionLattice
from .partition import Partition, commutes, join, meet
from .poset import Poset

POINT_CAP = 4096


def point_to_tuple(sizes, point):
    """Coordinates of a point of the mixed-radix product (coordinate 0 fastest)."""
    out = []
    for n in sizes:
        out.append(point % n)
        point //= n
    return tuple(out)


def tuple_to_point(sizes, coords):
    point, stride = 0, 1
    for n, c in zip(sizes, coords):
        point += c * stride
        stride *= n
    return point


def product_size(sizes):
    total = 1
    for n in sizes:
        total *= n
    return total


def partition_by_coords(sizes, fixed_coords) -> Partition:
    """Points in one part iff they agree on every coordinate in fixed_coords."""
    total = product_size(sizes)
    if total > POINT_CAP:
        raise ValueError("product domain of %d points beyond cap %d"
                         % (total, POINT_CAP))
    fixed = sorted(fixed_coords)
    labels = []
    for p in range(total):
        t = point_to_tuple(sizes, p)
        labels.append(tuple(t[i] for i in fixed))
    return Partition.from_labels(labels)


def downset_partition(poset: Poset, sizes, downset) -> Partition:
    """Partition identifying tuples that agree on all coordinates outside D."""
    return partition_by_coords(sizes, set(range(poset.size)) - set(downset))


def product_partition(p1: Partition, p2: Partition) -> Partition:
    """R1 x R2 on the product of the two domains (coordinate 1 fastest)."""
    a = p1.degree
    labels = []
    for p in range(a * p2.degree):
        labels.append((p1.block_of[p % a], p2.block_of[p // a]))
    return Partition.from_labels(labels)


class ObsViolation(ValueError):
    """A family of partitions fails one of the OBS axioms."""

    def __init__(self, axiom, message, witness=None):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


class OBS:
    """A validated orthogonal block structure."""

    def __init__(self, lattice: PartitionLattice):
        self.lattice = lattice
        self.degree = lattice.degree

    @property
    def partitions(self):
        return self.lattice.elements

    @property
    def size(self):
        return self.lattice.size

    def is_distributive(self):
        return self.lattice.is_distributive()


class PosetBlockStructure(OBS):
    """An OBS built from a poset; keeps the down-set -> partition map."""

    def __init__(self, lattice, poset, sizes, downset_index):
        super().__init__(lattice)
        self.poset = poset
        self.sizes = tuple(sizes)
        self.downset_index = downset_index  # frozenset -> lattice element index


def validate_obs(degree, partitions) -> OBS:
    """Close the family and check the OBS axioms; raise ObsViolation if broken.

    Uniformity is checked on every element of the closure, commuting on
    every pair; the reported witness names the offender.
    """
    lattice = PartitionLattice.close(partitions, degree=degree)
    for p in lattice.elements:
        if not p.is_uniform():
            raise ObsViolation("uniform", "non-uniform partition %r" % (p,),
                               witness=p)
    k = lattice.size
    for i in range(k):
        for j in range(i + 1, k):
            if not commutes(lattice.elements[i], lattice.elements[j]):
                raise ObsViolation(
                    "commute", "partitions %d and %d do not commute" % (i, j),
                    witness=(lattice.elements[i], lattice.elements[j]))
    return OBS(lattice)


def cross(b1: OBS, b2: OBS) -> OBS:
    """Crossing: all products R1 x R2 on the product domain."""
    parts = [product_partition(p1, p2)
             for p1 in b1.partitions for p2 in b2.partitions]
    return validate_obs(b1.degree * b2.degree, parts)


def nest(b1: OBS, b2: OBS) -> OBS:
    """Nesting b2 within b1: {R1 x U2} plus {E1 x R2}."""
    u2 = Partition.universal(b2.degree)
    e1 = Partition.equality(b1.degree)
    parts = [product_partition(p1, u2) for p1 in b1.partitions]
    parts += [product_partition(e1, p2) for p2 in b2.partitions]
    return validate_obs(b1.degree * b2.degree, parts)


def trivial_obs(n) -> OBS:
    return validate_obs(n, [])


def pbs_from_poset(poset: Poset, sizes) -> PosetBlockStructure:
    """Poset block structure on the product of the attached sets.

    One partition per down-set D, identifying tuples that agree outside D.
    Verifies the meet/join correspondence with intersection/union, and that
    the result is a distributive OBS.
    """
    sizes = list(sizes)
    if len(sizes) != poset.size:
        raise ValueError("need one size per poset element")
    if any(n < 2 for n in sizes):
        raise ValueError("attached sets must have at least 2 elements")
    downsets = poset.downsets()
    by_downset = {d: downset_partition(poset, sizes, d) for d in downsets}
    for d1 in downsets:
        for d2 in downsets:
            if by_downset[d1 & d2] != meet(by_downset[d1], by_downset[d2]):
                raise AssertionError("meet does not match down-set intersection")
            if by_downset[d1 | d2] != join(by_downset[d1], by_downset[d2]):
                raise AssertionError("join does not match down-set union")
    obs = validate_obs(product_size(sizes), list(by_downset.values()))
    if len(obs.partitions) != len(downsets):
        raise AssertionError("closure added elements beyond the down-sets")
    if not obs.lattice.is_distributive():
        raise AssertionError("poset block structure must be distributive")
    index = {d: obs.lattice.index_of(p) for d, p in by_downset.items()}
    return PosetBlockStructure(obs.lattice, poset, sizes, index)


def is_pbs(b: OBS) -> bool:
    """A poset block structure is an OBS with a distributive lattice."""
    return b.lattice.is_distributive()


class AssociationScheme:
    """Classes of pairs with constant intersection numbers.

    class_of is an n x n integer matrix; class 0 is the diagonal and the
    remaining classes are numbered by (size, lexicographically least pair),
    which makes equality-after-renumbering a plain matrix comparison.
    """

    __slots__ = ("class_of", "num_classes")

    def __init__(self, class_of):
        raw = np.asarray(class_of)
        n = raw.shape[0]
        first = {}
        sizes = {}
        for a in range(n):
            for b in range(n):
                c = int(raw[a][b])
                sizes[c] = sizes.get(c, 0) + 1
                first.setdefault(c, (a, b))
        diag = int(raw[0][0])
        rest = sorted((c for c in sizes if c != diag),
                      key=lambda c: (sizes[c], first[c]))
        renumber = {diag: 0}
        renumber.update({c: i + 1 for i, c in enumerate(rest)})
        self.class_of = np.array([[renumber[int(raw[a][b])] for b in range(n)]
                                  for a in range(n)])
        self.class_of.setflags(write=False)
        self.num_classes = len(sizes)

    @property
    def degree(self):
        return self.class_of.shape[0]

    def class_matrix_text(self):
        """n rows of n space-separated class indices."""
        return "\n".join(" ".join(str(c) for c in row) for row in self.class_of)


def verify_scheme(scheme: AssociationScheme) -> bool:
    """Triple-loop check of symmetry, diagonal class, and p^k_ij constancy."""
    m = scheme.class_of
    n = scheme.degree
    if not np.array_equal(m, m.T):
        return False
    if not all((m[a][b] == 0) == (a == b) for a in range(n) for b in range(n)):
        return False
    profiles = {}
    for a in range(n):
        for b in range(n):
            counts = {}
            for c in range(n):
                key = (m[a][c], m[c][b])
                counts[key] = counts.get(key, 0) + 1
            k = m[a][b]
            canon = tuple(sorted(counts.items()))
            if profiles.setdefault(k, canon) != canon:
                return False
    return True


def schemes_equal(s1: AssociationScheme, s2: AssociationScheme) -> bool:
    """Equality up to class renumbering (both are canonically renumbered)."""
    return (s1.degree == s2.degree
            and np.array_equal(s1.class_of, s2.class_of))


def association_scheme(b: OBS) -> AssociationScheme:
    """Scheme whose class at (a,b) is the minimal lattice element containing it.

    Equivalent to the inclusion-exclusion S_i = R_i minus all R_j strictly
    inside R_i, with empty classes dropped; the brute-force version is kept
    as a test oracle.
    """
    lat = b.lattice
    n = b.degree
    top = lat.size - 1  # U is last in the canonical element order
    block_ofs = [p.block_of for p in lat.elements]
    class_of = [[0] * n for _ in range(n)]
    for a in range(n):
        for c in range(n):
            m = top
            for e in range(lat.size):
                if block_ofs[e][a] == block_ofs[e][c]:
                    m = lat.meet_table[m][e]
            class_of[a][c] = m
    scheme = AssociationScheme(class_of)
    if not verify_scheme(scheme):
        raise AssertionError("derived scheme fails intersection-number check")
    return scheme


def projection_partition(pi: Partition, sizes, side) -> Partition:
    """Projection of a partition of a 2-factor product onto one side.

    Each part P maps to {x : some point of P has coordinate x on the
    chosen side}; distinct parts may project to the same set, but the
    distinct projections must be pairwise disjoint (this needs the
    partition to be invariant under a product group, so a partial overlap
    raises ValueError).
    """
    a, b = sizes
    n = a if side == 0 else b
    shadows = []
    for part in pi.blocks:
        shadow = frozenset(p % a if side == 0 else p // a for p in part)
        if shadow not in shadows:
            shadows.append(shadow)
    labels = [None] * n
    for idx, shadow in enumerate(shadows):
        for x in shadow:
            if labels[x] is not None:
                raise ValueError("projection parts partially overlap; the "
                                 "partition is not product-group invariant")
            labels[x] = idx
    return Partition.from_labels(labels)


def fibre_partition(pi: Partition, sizes, side) -> Partition:
    """Restriction of the partition to the fibre through the smallest
    other-side coordinate, projected onto the chosen side."""
    a, b = sizes
    if side == 0:
        points = [tuple_to_point((a, b), (x, 0)) for x in range(a)]
    else:
        points = [tuple_to_point((a, b), (0, x)) for x in range(b)]
    return Partition.from_labels([pi.block_of[p] for p in points])


def latin_square_obs(q, letters=None) -> OBS:
    """OBS of the cells of the Cayley-table Latin squares of order q.

    For prime q the squares L_m(r,c) = r + m*c (m = 1..q-1) form a complete
    set of mutually orthogonal Latin squares; `letters` picks how many of
    them to include (default all q-1).
    """
    if letters is None:
        letters = q - 1
    sizes = (q, q)
    rows = partition_by_coords(sizes, {0})    # cell (r,c): same row = same r
    cols = partition_by_coords(sizes, {1})
    parts = [rows, cols]
    for m in range(1, letters + 1):
        labels = []
        for p in range(q * q):
            r, c = point_to_tuple(sizes, p)
            labels.append((r + m * c) % q)
        parts.append(Partition.from_labels(labels))
    return validate_obs(q * q, parts)


def obs_to_json(b: OBS) -> dict:
    return {"degree": b.degree,
            "partitions": [[list(block) for block in p.blocks]
                           for p in b.partitions]}


def obs_from_json(data) -> OBS:
    try:
        degree = int(data["degree"])
        parts = [Partition(degree, blocks) for blocks in data["partitions"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("bad OBS file: %s" % exc) from exc
    return validate_obs(degree, parts)
