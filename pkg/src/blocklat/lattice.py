"""Finite lattices of partitions: closure, law checks, Birkhoff machinery.

A PartitionLattice is a meet/join-closed family of partitions of one set,
always containing E and U.  AbstractLattice carries bare meet/join tables
for the forbidden-sublattice patterns P5 and N3.
"""

from __future__ import annotations

import numpy as np

from .partition import Partition, meet, join
from .poset import Poset

LATTICE_ELEMENT_CAP = 2 ** 16


class LatticeCapExceeded(RuntimeError):
    pass


def _modular_from_tables(meet_t, join_t):
    k = len(meet_t)
    for a in range(k):
        for c in range(k):
            if meet_t[a][c] != a:  # need a <= c
                continue
            for b in range(k):
                if join_t[a][meet_t[b][c]] != meet_t[join_t[a][b]][c]:
                    return False
    return True


def _distributive_from_tables(meet_t, join_t):
    k = len(meet_t)
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if meet_t[join_t[a][b]][c] != join_t[meet_t[a][c]][meet_t[b][c]]:
                    return False
    return True


def _forbidden_from_tables(meet_t, join_t):
    """P5 or N3 witness as a closed 5-subset, or None when distributive.

    Targeted O(k^3) searches: a pentagon comes from a < b sharing meet and
    join with a third element, a diamond from three elements with equal
    pairwise meets and equal pairwise joins.  Either witness set is closed
    under the tables by construction.
    """
    k = len(meet_t)
    for a in range(k):
        for b in range(k):
            if a == b or meet_t[a][b] != a:  # need a < b
                continue
            for c in range(k):
                if meet_t[a][c] in (a, c) or meet_t[b][c] in (b, c):
                    continue  # c comparable with a or b
                if meet_t[a][c] == meet_t[b][c] and join_t[a][c] == join_t[b][c]:
                    return ("P5", (meet_t[a][c], a, b, c, join_t[a][c]))
    for x in range(k):
        for y in range(x + 1, k):
            m, j = meet_t[x][y], join_t[x][y]
            if m in (x, y) or j in (x, y):
                continue
            for z in range(y + 1, k):
                if (meet_t[x][z] == m and meet_t[y][z] == m
                        and join_t[x][z] == j and join_t[y][z] == j
                        and z not in (m, j)):
                    return ("N3", (m, x, y, z, j))
    return None


class AbstractLattice:
    """A lattice given purely by its meet and join tables."""

    def __init__(self, meet_table, join_table):
        self.size = len(meet_table)
        self.meet_table = [list(r) for r in meet_table]
        self.join_table = [list(r) for r in join_table]

    def validate(self):
        """Check the lattice axioms on all pairs/triples."""
        k, m, j = self.size, self.meet_table, self.join_table
        for a in range(k):
            if m[a][a] != a or j[a][a] != a:
                return False
            for b in range(k):
                if m[a][b] != m[b][a] or j[a][b] != j[b][a]:
                    return False
                if m[a][j[a][b]] != a or j[a][m[a][b]] != a:  # absorption
                    return False
                for c in range(k):
                    if m[m[a][b]][c] != m[a][m[b][c]]:
                        return False
                    if j[j[a][b]][c] != j[a][j[b][c]]:
                        return False
        return True

    def is_modular(self):
        return _modular_from_tables(self.meet_table, self.join_table)

    def is_distributive(self):
        return _distributive_from_tables(self.meet_table, self.join_table)

    def find_forbidden_sublattice(self):
        return _forbidden_from_tables(self.meet_table, self.join_table)

    @classmethod
    def pentagon(cls):
        """P5: 0 < 1 < 2 < 4 with 3 incomparable to 1 and 2."""
        leq = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)}
        return cls._from_order(5, leq)

    @classmethod
    def diamond(cls):
        """N3: three incomparable midpoints 1,2,3 between 0 and 4."""
        leq = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)}
        return cls._from_order(5, leq)

    @classmethod
    def _from_order(cls, k, strict_pairs):
        le = [[i == j or (i, j) in strict_pairs for j in range(k)] for i in range(k)]

        def bound(i, j, lower):
            cands = [c for c in range(k)
                     if (le[c][i] and le[c][j] if lower else le[i][c] and le[j][c])]
            for c in cands:
                if all(le[d][c] if lower else le[c][d] for d in cands):
                    return c
            raise ValueError("order is not a lattice")

        meet_t = [[bound(i, j, True) for j in range(k)] for i in range(k)]
        join_t = [[bound(i, j, False) for j in range(k)] for i in range(k)]
        return cls(meet_t, join_t)


class PartitionLattice:
    """A closed family of partitions with meet/join tables and Hasse covers.

    Elements are sorted E first, U last (decreasing block count, then by
    canonical block encoding), and tables are indexed by position.
    """

    def __init__(self, elements):
        elements = sorted(set(elements), key=lambda p: (-p.num_blocks, p.blocks))
        if not elements:
            raise ValueError("empty lattice")
        self.degree = elements[0].degree
        self.elements = elements
        index = {p: i for i, p in enumerate(elements)}
        k = len(elements)
        self.meet_table = [[0] * k for _ in range(k)]
        self.join_table = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                m = index.get(meet(elements[i], elements[j]))
                v = index.get(join(elements[i], elements[j]))
                if m is None or v is None:
                    raise ValueError("family not closed under meet/join")
                self.meet_table[i][j] = self.meet_table[j][i] = m
                self.join_table[i][j] = self.join_table[j][i] = v
        self.leq = np.array([[self.meet_table[i][j] == i for j in range(k)]
                             for i in range(k)])
        self.hasse = self._covers()
        self._index = index

    @property
    def size(self):
        return len(self.elements)

    def index_of(self, p) -> int:
        return self._index[p]

    def __contains__(self, p):
        return p in self._index

    def _covers(self):
        k = len(self.elements)
        strict = self.leq & ~np.eye(k, dtype=bool)
        via = (strict.astype(np.uint8) @ strict.astype(np.uint8)) > 0
        return [(i, j) for i in range(k) for j in range(k)
                if strict[i][j] and not via[i][j]]

    @classmethod
    def close(cls, partitions, degree=None, cap=LATTICE_ELEMENT_CAP):
        """Smallest lattice containing the inputs, E and U."""
        partitions = list(partitions)
        if degree is None:
            if not partitions:
                raise ValueError("degree required for an empty family")
            degree = partitions[0].degree
        els = {Partition.equality(degree), Partition.universal(degree)}
        els.update(partitions)
        frontier = list(els)
        while frontier:
            new = []
            current = list(els)
            for p in frontier:
                for q in current:
                    for r in (meet(p, q), join(p, q)):
                        if r not in els:
                            els.add(r)
                            new.append(r)
                            if len(els) > cap:
                                raise LatticeCapExceeded(
                                    "closure exceeds %d elements" % cap)
            frontier = new
        return cls(els)

    def is_modular(self):
        return _modular_from_tables(self.meet_table, self.join_table)

    def is_distributive(self):
        return _distributive_from_tables(self.meet_table, self.join_table)

    def find_forbidden_sublattice(self):
        """Witness 5-subset isomorphic to P5 (non-modular) or N3, else None."""
        return _forbidden_from_tables(self.meet_table, self.join_table)

    def join_indecomposables(self):
        """Indices of non-E JI elements, each with its unique predecessor.

        m is JI when m = a v b forces m in {a, b}; the predecessor is the
        unique maximal element strictly below m.
        """
        k = len(self.elements)
        out = []
        for m in range(k):
            if self.elements[m].is_equality():
                continue
            if any(self.join_table[a][b] == m and a != m and b != m
                   for a in range(k) for b in range(a, k)):
                continue
            out.append((m, self.predecessor(m)))
        return out

    def predecessor(self, m) -> int:
        """The unique maximal element strictly below m; error if not unique."""
        below = [x for x in range(self.size) if self.leq[x][m] and x != m]
        maximal = [x for x in below
                   if not any(self.leq[x][y] and y != x for y in below)]
        if len(maximal) != 1:
            raise ValueError("element %d has %d maximal elements below it "
                             "(not join-indecomposable)" % (m, len(maximal)))
        return maximal[0]

    def ji_poset(self):
        """Poset of the JI elements under refinement; returns (poset, indices)."""
        ji = [m for m, _ in self.join_indecomposables()]
        n = len(ji)
        leq = np.array([[bool(self.leq[ji[i]][ji[j]]) for j in range(n)]
                        for i in range(n)])
        return Poset(leq, labels=["m%d" % (t + 1) for t in range(n)]), ji

    def downset_to_index(self, poset_downset, ji_indices) -> int:
        """Lattice index of the join of the JI elements in a down-set."""
        idx = next(i for i, p in enumerate(self.elements) if p.is_equality())
        for t in poset_downset:
            idx = self.join_table[idx][ji_indices[t]]
        return idx

    def birkhoff_check(self):
        """Verify a -> {JI m : m <= a} is an isomorphism onto the down-sets.

        Returns (ok, reason).  Meant for distributive lattices; on others
        the returned reason names the first violation.
        """
        poset, ji = self.ji_poset()
        downsets = set(poset.downsets())
        ji_pos = {m: t for t, m in enumerate(ji)}
        image = {}
        for a in range(self.size):
            d = frozenset(ji_pos[m] for m in ji if self.leq[m][a])
            if d not in downsets:
                return False, "element %d maps outside the down-sets" % a
            if d in image.values():
                return False, "element %d collides with a previous image" % a
            image[a] = d
        if len(image) != len(downsets):
            return False, "down-set count %d != lattice size %d" % (
                len(downsets), self.size)
        for a in range(self.size):
            for b in range(self.size):
                if image[self.meet_table[a][b]] != image[a] & image[b]:
                    return False, "meet of %d,%d not intersection" % (a, b)
                if image[self.join_table[a][b]] != image[a] | image[b]:
                    return False, "join of %d,%d not union" % (a, b)
        return True, ""

    def to_dot(self):
        """Hasse diagram in DOT, nodes labelled by block shape, edges upward."""
        lines = ["digraph lattice {", "  rankdir=BT;"]
        for i, p in enumerate(self.elements):
            sizes = p.block_sizes()
            if len(set(sizes)) == 1:
                label = "%dx%d" % (p.num_blocks, sizes[0])
            else:
                label = "+".join(str(s) for s in sizes)
            lines.append('  n%d [label="%s"];' % (i, label))
        for i, j in sorted(self.hasse):
            lines.append("  n%d -> n%d;" % (i, j))
        lines.append("}")
        return "\n".join(lines)
