"""Standard groups and actions used by the tests, docs and CLI fixtures."""

from __future__ import annotations

from .perm import PermGroup, Permutation, coset_action, \
    direct_product_product_action, wreath_imprimitive


def cyclic(n) -> PermGroup:
    """C_n in its regular action."""
    return PermGroup(n, [Permutation([(i + 1) % n for i in range(n)])],
                     name="C%d" % n)


def symmetric(n) -> PermGroup:
    gens = []
    if n >= 2:
        gens.append(Permutation([1, 0] + list(range(2, n))))
    if n >= 3:
        gens.append(Permutation([(i + 1) % n for i in range(n)]))
    return PermGroup(n, gens, name="S%d" % n)


def alternating(n) -> PermGroup:
    if n < 3:
        return PermGroup(n, [], name="A%d" % n)
    three = Permutation.from_cycles(n, [(0, 1, 2)])
    if n % 2:
        rest = Permutation.from_cycles(n, [tuple(range(n))])
    else:
        rest = Permutation.from_cycles(n, [tuple(range(1, n))])
    return PermGroup(n, [three, rest], name="A%d" % n)


def dihedral(n) -> PermGroup:
    """D_n of order 2n acting naturally on the n-gon."""
    rot = Permutation([(i + 1) % n for i in range(n)])
    flip = Permutation([(n - i) % n for i in range(n)])
    return PermGroup(n, [rot, flip], name="D%d" % n)


def regular_representation(G: PermGroup, name="") -> PermGroup:
    """Right regular action of G on its own (sorted) element list."""
    elements = sorted(G.elements(), key=lambda p: p.images)
    index = {p: i for i, p in enumerate(elements)}
    gens = [Permutation(index[p * g] for p in elements) for g in G.generators]
    return PermGroup(len(elements), gens,
                     name=name or ("%s-regular" % G.name if G.name else "regular"))


def quaternion() -> PermGroup:
    """Q8 in its regular action; points ordered 1,-1,i,-i,j,-j,k,-k."""
    i = Permutation([2, 3, 1, 0, 7, 6, 4, 5])   # right multiplication by i
    j = Permutation([4, 5, 6, 7, 1, 0, 3, 2])   # right multiplication by j
    return PermGroup(8, [i, j], name="Q8")


def _metacyclic_regular(m, k, r, name):
    """Regular action of <a, b | a^m = b^k = 1, b a b^-1 = a^r>."""
    elements = [(x, y) for y in range(k) for x in range(m)]
    index = {e: i for i, e in enumerate(elements)}

    def mul(e1, e2):
        (x1, y1), (x2, y2) = e1, e2
        return ((x1 + x2 * pow(r, y1, m)) % m, (y1 + y2) % k)

    gens = [Permutation(index[mul(e, (1, 0))] for e in elements),
            Permutation(index[mul(e, (0, 1))] for e in elements)]
    return PermGroup(m * k, gens, name=name)


def modular16() -> PermGroup:
    """The modular group of order 16 (a^8 = b^2 = 1, b^-1 a b = a^5), regular."""
    return _metacyclic_regular(8, 2, 5, "Mod16")


def frobenius21() -> PermGroup:
    """The nonabelian group of order 21, acting regularly."""
    return _metacyclic_regular(7, 3, 2, "F21")


def agl15() -> PermGroup:
    """AGL(1,5) = C5 : C4 on 5 points (x -> x+1 and x -> 2x)."""
    return PermGroup(5, [Permutation([1, 2, 3, 4, 0]),
                         Permutation([0, 2, 4, 1, 3])], name="AGL(1,5)")


def gl32_on7() -> PermGroup:
    """GL(3,2) of order 168 on the 7 nonzero vectors of GF(2)^3.

    Built from the full matrix group (point v-1 for the vector with binary
    value v), with a small generating set extracted greedily.
    """
    import itertools

    def apply(mat, v):
        bits = [(v >> r) & 1 for r in range(3)]
        out = 0
        for r in range(3):
            if sum(mat[r][c] * bits[c] for c in range(3)) % 2:
                out |= 1 << r
        return out

    perms = set()
    for entries in itertools.product((0, 1), repeat=9):
        mat = [entries[0:3], entries[3:6], entries[6:9]]
        images = [apply(mat, v + 1) - 1 for v in range(7)]
        if sorted(images) == list(range(7)):
            perms.add(Permutation(images))
    gens = []
    span = {Permutation.identity(7)}
    for p in sorted(perms, key=lambda q: q.images):
        if p not in span:
            gens.append(p)
            probe = PermGroup(7, gens)
            span = probe.elements()
    return PermGroup(7, gens, name="GL(3,2)", _elements=perms)


def gl32_sylow2_gens():
    """Generators of a Sylow 2-subgroup of GL(3,2) on 7 points.

    Deterministic search: the first order-4 element a (sorted order) and
    the first involution t with |<a,t>| = 8.
    """
    G = gl32_on7()
    elements = sorted(G.elements(), key=lambda p: p.images)
    a = next(p for p in elements if p.order() == 4)
    for t in elements:
        if t.order() == 2:
            probe = PermGroup(7, [a, t])
            if probe.order() == 8:
                return [a, t]
    raise AssertionError("no dihedral Sylow 2-subgroup found")


def gl32_flags21() -> PermGroup:
    """GL(3,2) acting on its 21 cosets of a Borel (Sylow 2) subgroup."""
    group, _ = coset_action(gl32_on7(), gl32_sylow2_gens())
    group.name = "GL(3,2)-flags21"
    return group


def a5_on15() -> PermGroup:
    """A5 acting on the 15 cosets of a Klein four-subgroup."""
    a5 = alternating(5)
    v4 = [Permutation.from_cycles(5, [(0, 1), (2, 3)]),
          Permutation.from_cycles(5, [(0, 2), (1, 3)])]
    group, _ = coset_action(a5, v4)
    group.name = "A5-on15"
    return group


def affine_flags12() -> PermGroup:
    """AGL(2,2) = S4 on the 12 flags of the order-2 affine plane.

    A flag (point, line through it) is an ordered pair of distinct points;
    pairs are listed lexicographically.
    """
    pairs = [(p, q) for p in range(4) for q in range(4) if p != q]
    index = {pq: i for i, pq in enumerate(pairs)}
    gens = []
    for g in symmetric(4).generators:
        gens.append(Permutation(index[(g(p), g(q))] for p, q in pairs))
    return PermGroup(12, gens, name="AGL(2,2)-flags12")


def flag_partitions12():
    """Same-line, parallel-lines and same-point partitions of the 12 flags.

    With E and U these five form the pentagon lattice (q=2 case); two
    lines of the order-2 affine plane are parallel iff equal or disjoint.
    """
    from .partition import Partition
    pairs = [(p, q) for p in range(4) for q in range(4) if p != q]
    same_line = Partition.from_labels([frozenset(pq) for pq in pairs])

    def parallel_class(p, q):
        rest = frozenset(range(4)) - {p, q}
        return frozenset({frozenset((p, q)), rest})

    parallel = Partition.from_labels([parallel_class(p, q) for p, q in pairs])
    same_point = Partition.from_labels([p for p, _ in pairs])
    return same_line, parallel, same_point


def pgl25_in_s6() -> PermGroup:
    """A transitive PGL(2,5)-copy of order 120 inside S6.

    Acts on the projective line over GF(5) with infinity as point 5:
    x -> x+1, x -> 2x and x -> 1/x.
    """
    return PermGroup(6, [Permutation([1, 2, 3, 4, 0, 5]),
                         Permutation([0, 2, 4, 1, 3, 5]),
                         Permutation([5, 1, 3, 2, 4, 0])], name="PGL(2,5)")


def s6_twisted6():
    """S6 acting on the 6 cosets of a PGL(2,5)-copy: the outer action.

    Returns (image group, generator images) aligned with symmetric(6)'s
    generator list.
    """
    s6 = symmetric(6)
    group, _ = coset_action(s6, list(pgl25_in_s6().generators))
    return group


def s6_square36() -> PermGroup:
    """Diagonal S6 on the 36 cells of the two inequivalent 6-point actions.

    Each generator acts as itself on one side and as its image under the
    outer twist on the other; points are indexed gamma + 6*delta.
    """
    s6 = symmetric(6)
    twisted = s6_twisted6()
    gens = []
    for g, h in zip(s6.generators, twisted.generators):
        gens.append(Permutation(g(p % 6) + 6 * h(p // 6) for p in range(36)))
    return PermGroup(36, gens, name="S6-square36")


def d4_on4() -> PermGroup:
    return dihedral(4)


def elementary_abelian8() -> PermGroup:
    """C2 x C2 x C2 acting regularly on 8 points."""
    g = direct_product_product_action(cyclic(2), cyclic(2))
    g = direct_product_product_action(g, cyclic(2))
    g.name = "C2^3"
    return g


def order8_regular_groups():
    """The five regular groups of degree 8, keyed by name."""
    return {
        "C8": cyclic(8),
        "C4xC2": direct_product_product_action(cyclic(4), cyclic(2)),
        "C2^3": elementary_abelian8(),
        "Q8": quaternion(),
        "D4-regular": regular_representation(dihedral(4), name="D4-regular"),
    }


def q8xq8_regular() -> PermGroup:
    g = direct_product_product_action(quaternion(), quaternion())
    g.name = "Q8xQ8"
    return g


def standard_fixtures():
    """The fixture repository for the implication suite (degrees 3..64)."""
    fixtures = {
        "C3": cyclic(3),
        "S3": symmetric(3),
        "C4": cyclic(4),
        "C2xC2": direct_product_product_action(cyclic(2), cyclic(2)),
        "D4-on4": dihedral(4),
        "C2wrC2": wreath_imprimitive(cyclic(2), cyclic(2)),
        "AGL(1,5)": agl15(),
        "C6": cyclic(6),
        "S3wrC2": wreath_imprimitive(symmetric(3), cyclic(2)),
        "GL(3,2)-on7": gl32_on7(),
        "S3xS3": direct_product_product_action(symmetric(3), symmetric(3)),
        "AGL(2,2)-flags12": affine_flags12(),
        "A5-on15": a5_on15(),
        "Mod16": modular16(),
        "F21": frobenius21(),
        "GL(3,2)-flags21": gl32_flags21(),
        "C5xC5": direct_product_product_action(cyclic(5), cyclic(5)),
        "S6-square36": s6_square36(),
        "Q8xQ8": q8xq8_regular(),
    }
    fixtures.update(order8_regular_groups())
    return fixtures
