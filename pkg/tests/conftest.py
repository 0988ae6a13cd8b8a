"""Shared fixtures: the group repository and a few derived lattices."""

import pytest

from blocklat import named_groups as ng
from blocklat.groupprops import invariant_partitions


@pytest.fixture(scope="session")
def fixture_groups():
    """Name -> transitive group, degrees 3..64 (the implication-suite set)."""
    return ng.standard_fixtures()


@pytest.fixture(scope="session")
def invariant_lattices(fixture_groups):
    """Invariant lattices for every fixture group, computed once."""
    return {name: invariant_partitions(g) for name, g in fixture_groups.items()}


def set_partitions(points):
    """All partitions of a list of points (test oracle, Bell-number sized)."""
    points = list(points)
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for smaller in set_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]
        yield [[first]] + smaller
