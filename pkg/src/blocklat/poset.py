"""Finite posets on index sets {0..N-1}.

The full order matrix is carried (not just covers) so that poset
intersection is a single boolean AND.  Ancestor/descendant notation:
A(i) strict ancestors, A[i] weak, D(i)/D[i] dually.
"""

from __future__ import annotations

import itertools

import numpy as np

DOWNSET_SIZE_CAP = 20
LINEAR_EXTENSION_CAP = 10_000


class PosetCycleError(ValueError):
    pass


class Poset:
    """A partial order via its reflexive N x N leq matrix."""

    def __init__(self, leq, labels=None):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise ValueError("leq must be square")
        if not all(leq[i][i] for i in range(n)):
            raise ValueError("leq must be reflexive")
        for i in range(n):
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise PosetCycleError("antisymmetry fails at %d,%d" % (i, j))
        closed = (leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0
        if not np.array_equal(closed, leq):
            raise ValueError("leq must be transitive")
        self.size = n
        self.leq = leq
        self.leq.setflags(write=False)
        self.labels = list(labels) if labels else ["m%d" % (i + 1) for i in range(n)]
        if len(self.labels) != n:
            raise ValueError("label count mismatch")

    @classmethod
    def from_covers(cls, n, covers, labels=None):
        """Reflexive-transitive closure of cover pairs (lower, upper)."""
        leq = np.eye(n, dtype=bool)
        for a, b in covers:
            leq[a][b] = True
        for k in range(n):  # Warshall
            leq |= np.outer(leq[:, k], leq[k, :])
        for i in range(n):
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise PosetCycleError("cover relation has a cycle through %d" % i)
        return cls(leq, labels=labels)

    @classmethod
    def antichain(cls, n, labels=None):
        return cls.from_covers(n, [], labels=labels)

    @classmethod
    def chain(cls, n, labels=None):
        return cls.from_covers(n, [(i, i + 1) for i in range(n - 1)], labels=labels)

    @classmethod
    def total_order(cls, order, labels=None):
        """Chain poset in which order[0] is the bottom element."""
        n = len(order)
        return cls.from_covers(n, [(order[i], order[i + 1]) for i in range(n - 1)],
                               labels=labels)

    def covers(self):
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        via = (strict.astype(np.uint8) @ strict.astype(np.uint8)) > 0
        return [(i, j) for i in range(self.size) for j in range(self.size)
                if strict[i][j] and not via[i][j]]

    def ancestors_strict(self, i):
        """A(i): elements strictly above i."""
        return frozenset(j for j in range(self.size) if self.leq[i][j] and j != i)

    def ancestors_weak(self, i):
        """A[i] = A(i) plus i itself."""
        return self.ancestors_strict(i) | {i}

    def descendants_strict(self, i):
        """D(i): elements strictly below i."""
        return frozenset(j for j in range(self.size) if self.leq[j][i] and j != i)

    def descendants_weak(self, i):
        return self.descendants_strict(i) | {i}

    def downsets(self):
        """All down-sets, sorted by size then lexicographically.

        Includes the empty set and the whole ground set.  Exponential;
        capped at 20 elements.
        """
        n = self.size
        if n > DOWNSET_SIZE_CAP:
            raise ValueError("down-set enumeration capped at %d elements"
                             % DOWNSET_SIZE_CAP)
        down_mask = [0] * n
        for i in range(n):
            for j in range(n):
                if self.leq[j][i]:
                    down_mask[i] |= 1 << j
        out = []
        for mask in range(1 << n):
            ok = True
            m = mask
            while m:
                i = (m & -m).bit_length() - 1
                if down_mask[i] & ~mask:
                    ok = False
                    break
                m &= m - 1
            if ok:
                out.append(frozenset(i for i in range(n) if mask >> i & 1))
        out.sort(key=lambda d: (len(d), tuple(sorted(d))))
        return out

    def is_downset(self, subset):
        subset = set(subset)
        return all(j in subset for i in subset for j in self.descendants_strict(i))

    def minimal_elements(self, within=None):
        ground = range(self.size) if within is None else within
        return [i for i in ground if not (self.descendants_strict(i) & set(ground))]

    def linear_extensions(self, cap=LINEAR_EXTENSION_CAP):
        """All total orders containing the relation, bottom element first."""
        out = []
        remaining = set(range(self.size))

        def backtrack(prefix):
            if len(out) > cap:
                raise ValueError("more than %d linear extensions" % cap)
            if not remaining:
                out.append(tuple(prefix))
                return
            for i in sorted(self.minimal_elements(remaining)):
                remaining.discard(i)
                prefix.append(i)
                backtrack(prefix)
                prefix.pop()
                remaining.add(i)

        backtrack([])
        return out

    def intersect(self, other):
        """Poset whose relation is the pairwise AND of the two leq matrices."""
        if self.size != other.size:
            raise ValueError("ground-set mismatch")
        return Poset(self.leq & other.leq, labels=self.labels)

    def includes(self, other):
        """True iff other's relation is a subset of this one's."""
        return self.size == other.size and bool(np.all(other.leq <= self.leq))

    def restrict(self, indices):
        """Induced subposet on the given indices (in the order given)."""
        idx = list(indices)
        leq = self.leq[np.ix_(idx, idx)]
        return Poset(leq, labels=[self.labels[i] for i in idx])

    def is_isomorphic(self, other):
        """Brute-force isomorphism test; fine for N <= 8."""
        if self.size != other.size:
            return False
        n = self.size
        for perm in itertools.permutations(range(n)):
            if all(self.leq[i][j] == other.leq[perm[i]][perm[j]]
                   for i in range(n) for j in range(n)):
                return True
        return False

    def __eq__(self, other):
        return (isinstance(other, Poset) and self.size == other.size
                and np.array_equal(self.leq, other.leq))

    def __hash__(self):
        return hash(self.leq.tobytes())

    def __repr__(self):
        return "Poset(%d, covers=%s)" % (self.size, self.covers())


def poset_to_json(p: Poset) -> dict:
    return {"elements": list(p.labels),
            "covers": [[p.labels[a], p.labels[b]] for a, b in sorted(p.covers())]}


def poset_from_json(data) -> Poset:
    try:
        labels = list(data["elements"])
        pos = {lab: i for i, lab in enumerate(labels)}
        covers = [(pos[a], pos[b]) for a, b in data["covers"]]
    except (KeyError, TypeError) as exc:
        raise ValueError("bad poset file: %s" % exc) from exc
    return Poset.from_covers(len(labels), covers, labels=labels)
