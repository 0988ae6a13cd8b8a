"""Permutations of {0..n-1} and finitely generated permutation groups.

Action convention: permutations act on the right, and composition reads
left to right, so (p * q) sends i to q(p(i)).  Every other module relies
on this.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .partition import Partition

DEFAULT_ELEMENT_CAP = int(os.environ.get("BLOCKLAT_CAP_ELEMENTS", 2_000_000))


class CapExceeded(RuntimeError):
    """An operation would enumerate more elements than the configured cap."""


class Permutation:
    """A permutation stored as its image tuple: images[i] is the image of i."""

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("not a permutation of 0..n-1: %r" % (images,))
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n, cycles):
        """Build a degree-n permutation from a list of disjoint cycles."""
        images = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:]):
                images[a] = b
            if cycle:
                images[cycle[-1]] = cycle[0]
        return cls(images)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, point):
        return self.images[point]

    def __mul__(self, other):
        return compose(self, other)

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def order(self):
        k, p = 1, self
        while not p.is_identity():
            p = p * self
            k += 1
        return k

    def cycles(self):
        """Nontrivial cycles, each rotated to start at its minimum."""
        seen, out = set(), []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cycle, j = [i], self.images[i]
            while j != i:
                seen.add(j)
                cycle.append(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(%s)" % " ".join(map(str, c)) for c in cycles)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p followed by q: the result sends i to q(p(i))."""
    if p.degree != q.degree:
        raise ValueError("degree mismatch: %d vs %d" % (p.degree, q.degree))
    qi = q.images
    return Permutation(qi[i] for i in p.images)


class PermGroup:
    """A permutation group given by generators.

    Elements are materialised lazily by breadth-first closure under
    composition, stopping with CapExceeded beyond element_cap.  Values are
    immutable apart from the memoised caches, whose fills are idempotent.
    """

    def __init__(self, degree, generators, name="", element_cap=None,
                 _elements=None):
        self.degree = degree
        gens = []
        for g in generators:
            if g.degree != degree:
                raise ValueError("generator degree %d != %d" % (g.degree, degree))
            if not g.is_identity() and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)
        self.name = name
        self.element_cap = element_cap if element_cap else DEFAULT_ELEMENT_CAP
        self._elements = frozenset(_elements) if _elements is not None else None
        self._orbit_cache = {}

    def __repr__(self):
        label = self.name or "PermGroup"
        return "<%s degree=%d gens=%d>" % (label, self.degree, len(self.generators))

    def elements(self):
        """The full element set (breadth-first closure of the generators)."""
        if self._elements is None:
            els = {Permutation.identity(self.degree)}
            frontier = list(els)
            while frontier:
                new = []
                for p in frontier:
                    for g in self.generators:
                        q = p * g
                        if q not in els:
                            els.add(q)
                            new.append(q)
                            if len(els) > self.element_cap:
                                raise CapExceeded(
                                    "group closure exceeds cap %d" % self.element_cap)
                frontier = new
            self._elements = frozenset(els)
        return self._elements

    def order(self):
        return len(self.elements())

    def __contains__(self, p):
        return p in self.elements()

    def identity(self):
        return Permutation.identity(self.degree)

    def is_trivial(self):
        return not self.generators

    def orbit(self, alpha):
        """Orbit of a point, as a dict point -> transversal permutation.

        The transversal entry for beta is a product of generators mapping
        alpha to beta (the materialised group word).
        """
        if alpha >= self.degree:
            raise ValueError("point %d out of range" % alpha)
        cached = self._orbit_cache.get(alpha)
        if cached is not None:
            return cached
        transversal = {alpha: Permutation.identity(self.degree)}
        queue = [alpha]
        while queue:
            beta = queue.pop(0)
            t = transversal[beta]
            for g in self.generators:
                gamma = g(beta)
                if gamma not in transversal:
                    transversal[gamma] = t * g
                    queue.append(gamma)
        self._orbit_cache[alpha] = transversal
        return transversal

    def orbits(self):
        """All orbits, as sorted lists, ordered by minimal point."""
        seen, out = set(), []
        for alpha in range(self.degree):
            if alpha in seen:
                continue
            orb = sorted(self.orbit(alpha))
            seen.update(orb)
            out.append(orb)
        return out

    def is_transitive(self):
        return self.degree == 0 or len(self.orbit(0)) == self.degree

    def orbit_partition(self) -> Partition:
        """Partition of the domain into orbits."""
        return Partition(self.degree, self.orbits())

    def point_stabiliser(self, alpha):
        """Stabiliser of a point, generated by Schreier generators."""
        transversal = self.orbit(alpha)
        gens = []
        for beta, t in transversal.items():
            for g in self.generators:
                u = t * g
                s = u * transversal[g(beta)].inverse()
                if not s.is_identity() and s not in gens:
                    gens.append(s)
        return PermGroup(self.degree, gens,
                         name="%s_stab%d" % (self.name, alpha) if self.name else "",
                         element_cap=self.element_cap)

    def conjugate(self, w):
        """The group w^-1 G w (same degree)."""
        wi = w.inverse()
        return PermGroup(self.degree, [wi * g * w for g in self.generators],
                         element_cap=self.element_cap)


def group_from_generators(degree, gens, name="", element_cap=None) -> PermGroup:
    """Group object for the given generators; elements materialised lazily."""
    return PermGroup(degree, gens, name=name, element_cap=element_cap)


@dataclass
class ActionRecord:
    """Images of a group's generators under some action of degree target_degree."""

    source: PermGroup
    target_degree: int
    images_of_generators: list = field(default_factory=list)

    def image_group(self, name="") -> PermGroup:
        return PermGroup(self.target_degree, self.images_of_generators, name=name,
                         element_cap=self.source.element_cap)

    def verify(self):
        """Check the generator map extends to a homomorphism.

        Element-level: the joint group generated by g_i acting on the
        disjoint union has the same order as the source, so no source word
        collapses without its image collapsing too.  Desk scale only.
        """
        n, m = self.source.degree, self.target_degree
        joint = []
        for g, h in zip(self.source.generators, self.images_of_generators):
            joint.append(Permutation(list(g.images) + [n + x for x in h.images]))
        diag = PermGroup(n + m, joint, element_cap=self.source.element_cap)
        return diag.order() == self.source.order()


def coset_action(G: PermGroup, subgroup_gens):
    """Action of G on the right cosets of the subgroup the gens generate.

    Returns (image group of degree |G:H|, coset representative labels).
    Cosets are represented canonically by their lexicographically least
    element; point 0 is the coset H itself.
    """
    H = PermGroup(G.degree, subgroup_gens, element_cap=G.element_cap)
    h_elems = sorted(H.elements(), key=lambda p: p.images)
    g_elems = G.elements()
    for h in H.generators:
        if h not in g_elems:
            raise ValueError("subgroup generator %r not a member of G" % (h,))

    def rep(p):
        return min((h * p for h in h_elems), key=lambda x: x.images)

    start = rep(Permutation.identity(G.degree))
    labels = [start]
    index = {start: 0}
    queue = [start]
    while queue:
        p = queue.pop(0)
        for g in G.generators:
            q = rep(p * g)
            if q not in index:
                index[q] = len(labels)
                labels.append(q)
                queue.append(q)
    images = []
    for g in G.generators:
        images.append(Permutation(index[rep(p * g)] for p in labels))
    group = PermGroup(len(labels), images,
                      name="%s/cosets" % G.name if G.name else "coset action",
                      element_cap=G.element_cap)
    return group, labels


def induced_action(G: PermGroup, part: Partition) -> ActionRecord:
    """Action induced on the parts of a G-invariant partition.

    Parts are indexed by their minimal element (the Partition block order).
    Raises ValueError if some generator fails to permute the parts.
    """
    if part.degree != G.degree:
        raise ValueError("partition degree mismatch")
    images = []
    for g in G.generators:
        img = [None] * part.num_blocks
        for b, block in enumerate(part.blocks):
            targets = {part.block_of[g(x)] for x in block}
            if len(targets) != 1:
                raise ValueError("partition not invariant under %r" % (g,))
            img[b] = targets.pop()
        images.append(Permutation(img))
    return ActionRecord(G, part.num_blocks, images)


def kernel_on_parts(G: PermGroup, part: Partition) -> PermGroup:
    """Subgroup of G mapping every part of the partition to itself.

    Found by filtering the full element set, so |G| must be within cap.
    """
    block_of = part.block_of
    kernel = [p for p in G.elements()
              if all(block_of[p.images[x]] == block_of[x] for x in range(G.degree))]
    return PermGroup(G.degree, kernel, name="kernel", element_cap=G.element_cap,
                     _elements=kernel)


def same_group(G: PermGroup, H: PermGroup) -> bool:
    """True iff the two groups have identical element sets."""
    if G.degree != H.degree:
        raise ValueError("degree mismatch")
    return G.elements() == H.elements()


def pair_index(a, gamma, delta):
    """Index of (gamma, delta) in a product with the first coordinate fastest."""
    return gamma + a * delta


def direct_product_product_action(G: PermGroup, H: PermGroup) -> PermGroup:
    """G x H acting coordinate-wise on pairs (gamma, delta).

    Points are indexed gamma + |Gamma|*delta (first coordinate fastest,
    the convention shared with blockstruct and gwp).
    """
    a, b = G.degree, H.degree
    gens = []
    for g in G.generators:
        gens.append(Permutation([pair_index(a, g(p % a), p // a) for p in range(a * b)]))
    for h in H.generators:
        gens.append(Permutation([pair_index(a, p % a, h(p // a)) for p in range(a * b)]))
    name = "%sx%s" % (G.name, H.name) if G.name and H.name else ""
    return PermGroup(a * b, gens, name=name, element_cap=max(G.element_cap, H.element_cap))


def wreath_imprimitive(G: PermGroup, H: PermGroup) -> PermGroup:
    """G wr H in its imprimitive action on pairs (gamma, delta).

    One copy of G per delta acts on the gamma coordinate of its block;
    H permutes the blocks.  Order |G|^|Delta| * |H|.  Indexing as in
    direct_product_product_action, so block delta is the contiguous run
    [delta*a, (delta+1)*a).
    """
    a, b = G.degree, H.degree
    gens = []
    for delta in range(b):
        for g in G.generators:
            images = list(range(a * b))
            for gamma in range(a):
                images[pair_index(a, gamma, delta)] = pair_index(a, g(gamma), delta)
            gens.append(Permutation(images))
    for h in H.generators:
        gens.append(Permutation([pair_index(a, p % a, h(p // a)) for p in range(a * b)]))
    name = "%swr%s" % (G.name, H.name) if G.name and H.name else ""
    return PermGroup(a * b, gens, name=name, element_cap=max(G.element_cap, H.element_cap))


def group_to_json(G: PermGroup) -> dict:
    """Group file payload: zero-based image arrays."""
    return {"name": G.name, "degree": G.degree,
            "generators": [list(g.images) for g in G.generators]}


def group_from_json(data) -> PermGroup:
    """Parse a group file payload ({"name", "degree", "generators"})."""
    try:
        degree = int(data["degree"])
        gens = [Permutation(images) for images in data["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("bad group file: %s" % exc) from exc
    return PermGroup(degree, gens, name=str(data.get("name", "")))


def action_from_json(data) -> PermGroup:
    """Like group_from_json, but a "subgroup_generators" entry switches to
    the coset action of the group on that subgroup."""
    group = group_from_json(data)
    if "subgroup_generators" not in data:
        return group
    try:
        sub = [Permutation(images) for images in data["subgroup_generators"]]
    except (TypeError, ValueError) as exc:
        raise ValueError("bad subgroup generators: %s" % exc) from exc
    image, _ = coset_action(group, sub)
    image.name = "%s/cosets" % group.name if group.name else "coset action"
    return image
