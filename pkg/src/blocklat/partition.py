"""Partitions of {0..n-1} viewed interchangeably as equivalence relations.

E denotes the partition into singletons, U the one-block partition.
Refinement is written Pi1 <= Pi2 (every block of Pi1 inside a block of
Pi2).  All values are immutable and all operations pure.
"""

from __future__ import annotations

import numpy as np

RELATION_DEGREE_LIMIT = 4096


class Partition:
    """A partition stored both as sorted blocks and a point -> block map.

    Blocks are sorted point lists, numbered 0..k-1 by minimal element, so
    two equal partitions are structurally identical.
    """

    __slots__ = ("degree", "blocks", "block_of", "_key")

    def __init__(self, degree, blocks):
        cleaned = sorted((sorted(b) for b in blocks if b), key=lambda b: b[0])
        block_of = [-1] * degree
        count = 0
        for i, block in enumerate(cleaned):
            for x in block:
                if not 0 <= x < degree or block_of[x] != -1:
                    raise ValueError("blocks must disjointly cover 0..%d" % (degree - 1))
                block_of[x] = i
            count += len(block)
        if count != degree:
            raise ValueError("blocks must cover all %d points" % degree)
        self.degree = degree
        self.blocks = tuple(tuple(b) for b in cleaned)
        self.block_of = tuple(block_of)
        self._key = self.blocks

    @classmethod
    def from_labels(cls, labels):
        """Partition grouping points with equal labels."""
        groups = {}
        for x, lab in enumerate(labels):
            groups.setdefault(lab, []).append(x)
        return cls(len(labels), groups.values())

    @classmethod
    def equality(cls, n):
        """E: the partition into singletons."""
        return cls(n, [[i] for i in range(n)])

    @classmethod
    def universal(cls, n):
        """U: the single-block partition."""
        return cls(n, [list(range(n))])

    @property
    def num_blocks(self):
        return len(self.blocks)

    def block_sizes(self):
        return tuple(len(b) for b in self.blocks)

    def block_containing(self, x):
        return self.blocks[self.block_of[x]]

    def is_uniform(self):
        """True iff all blocks have the same size."""
        sizes = self.block_sizes()
        return len(set(sizes)) <= 1

    def is_equality(self):
        return self.num_blocks == self.degree

    def is_universal(self):
        return self.num_blocks == 1

    def apply(self, perm):
        """Image partition under a permutation of the points."""
        return Partition(self.degree, [[perm(x) for x in b] for b in self.blocks])

    def is_invariant_under(self, perm):
        return self.apply(perm) == self

    def relation(self):
        """Dense boolean matrix of the 'same block' relation."""
        if self.degree > RELATION_DEGREE_LIMIT:
            raise ValueError("degree %d beyond relation limit %d"
                             % (self.degree, RELATION_DEGREE_LIMIT))
        labels = np.asarray(self.block_of)
        return BinaryRelation(labels[:, None] == labels[None, :])

    def __eq__(self, other):
        return isinstance(other, Partition) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __le__(self, other):
        return is_refinement(self, other)

    def __repr__(self):
        return "Partition(%d, %s)" % (self.degree, [list(b) for b in self.blocks])


class BinaryRelation:
    """A binary relation on {0..n-1} as a dense boolean matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("relation matrix must be square")
        self.matrix = m
        self.matrix.setflags(write=False)

    @property
    def degree(self):
        return self.matrix.shape[0]

    def compose(self, other):
        """(a,b) related iff some c has (a,c) in self and (c,b) in other."""
        prod = self.matrix.astype(np.uint8) @ other.matrix.astype(np.uint8)
        return BinaryRelation(prod > 0)

    def __eq__(self, other):
        return (isinstance(other, BinaryRelation)
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())


def _check_degrees(p1, p2):
    if p1.degree != p2.degree:
        raise ValueError("degree mismatch: %d vs %d" % (p1.degree, p2.degree))


def meet(p1: Partition, p2: Partition) -> Partition:
    """Coarsest common refinement: nonempty intersections of blocks."""
    _check_degrees(p1, p2)
    return Partition.from_labels(list(zip(p1.block_of, p2.block_of)))


def join(p1: Partition, p2: Partition) -> Partition:
    """Finest common coarsening, by union-find seeded with both partitions."""
    _check_degrees(p1, p2)
    parent = list(range(p1.degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p1, p2):
        for block in part.blocks:
            r = find(block[0])
            for x in block[1:]:
                parent[find(x)] = r
    return Partition.from_labels([find(x) for x in range(p1.degree)])


def is_refinement(p1: Partition, p2: Partition) -> bool:
    """True iff every block of p1 lies inside a block of p2."""
    _check_degrees(p1, p2)
    return all(len({p2.block_of[x] for x in b}) == 1 for b in p1.blocks)


def compose_relations(p1: Partition, p2: Partition) -> BinaryRelation:
    """Relation composition R1 o R2 of the two block relations."""
    _check_degrees(p1, p2)
    return p1.relation().compose(p2.relation())


def commutes(p1: Partition, p2: Partition) -> bool:
    """Whether the two equivalence relations commute.

    Fast criterion: within every block of the join, every block of p1
    meets every block of p2.  Equivalent to R1 o R2 == R2 o R1 (and to
    R1 o R2 being the join relation); the matrix comparison is kept as a
    test oracle.
    """
    _check_degrees(p1, p2)
    for block in join(p1, p2).blocks:
        seen = {(p1.block_of[x], p2.block_of[x]) for x in block}
        left = {a for a, _ in seen}
        right = {b for _, b in seen}
        if len(seen) != len(left) * len(right):
            return False
    return True


def is_uniform(p: Partition) -> bool:
    return p.is_uniform()


def partition_to_json(p: Partition) -> dict:
    return {"degree": p.degree, "blocks": [list(b) for b in p.blocks]}


def partition_from_json(data) -> Partition:
    try:
        return Partition(int(data["degree"]), data["blocks"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("bad partition literal: %s" % exc) from exc
