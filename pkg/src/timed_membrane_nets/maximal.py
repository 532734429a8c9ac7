"""Search for maximal occurrence vectors.

Both formalisms pick, at every tick, a multiset of rule (transition)
occurrences whose summed demand fits the available resources and that
cannot be extended by one more occurrence of any rule. This module solves
that problem once for plain demand dictionaries; ``psystem`` keys resources
by ``(membrane, symbol)`` and ``petri`` by place.

Occurrence types that share no resource are independent, so the search runs
per connected component and combines the results by product.
"""

from __future__ import annotations

import itertools
import logging
from typing import Hashable, Iterator, Mapping, Sequence

logger = logging.getLogger(__name__)

Demand = Mapping[Hashable, int]


def fits_times(demand: Demand, residual: Mapping[Hashable, int]) -> int:
    """Return how many copies of ``demand`` fit in ``residual``."""
    return min(residual.get(key, 0) // need for key, need in demand.items())


def total_demand(
    demands: Sequence[Demand], vector: Sequence[int]
) -> dict[Hashable, int]:
    """Return the summed demand of an occurrence vector."""
    summed: dict[Hashable, int] = {}
    for demand, times in zip(demands, vector):
        if not times:
            continue
        for key, need in demand.items():
            summed[key] = summed.get(key, 0) + need * times
    return summed


def residual_after(
    demands: Sequence[Demand],
    available: Mapping[Hashable, int],
    vector: Sequence[int],
) -> dict[Hashable, int] | None:
    """Return what is left after the vector, or None if it does not fit."""
    residual = dict(available)
    for key, need in total_demand(demands, vector).items():
        left = residual.get(key, 0) - need
        if left < 0:
            return None
        residual[key] = left
    return residual


def is_maximal_vector(
    demands: Sequence[Demand],
    available: Mapping[Hashable, int],
    vector: Sequence[int],
) -> bool:
    """Return True when the vector fits and no single occurrence can be added."""
    residual = residual_after(demands, available, vector)
    if residual is None:
        return False
    return not any(fits_times(d, residual) for d in demands)


def _components(demands: Sequence[Demand]) -> list[list[int]]:
    """Group occurrence types that (transitively) share a resource."""
    parent = list(range(len(demands)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[Hashable, int] = {}
    for index, demand in enumerate(demands):
        for key in demand:
            if key in owner:
                parent[find(index)] = find(owner[key])
            else:
                owner[key] = index
    groups: dict[int, list[int]] = {}
    for index in range(len(demands)):
        groups.setdefault(find(index), []).append(index)
    return [groups[root] for root in sorted(groups)]


def _search_component(
    indices: Sequence[int],
    demands: Sequence[Demand],
    available: Mapping[Hashable, int],
) -> list[tuple[tuple[int, int], ...]]:
    """Depth-first extension over ``indices`` with residual capacities.

    Runs on an explicit stack, one frame per position. A count below the
    capacity of a rule is only tried when a later rule competes for one of
    its resources; otherwise the rule would still fit at the end.
    """
    size = len(indices)
    later: list[frozenset] = [frozenset()] * (size + 1)
    for position in range(size - 1, 0, -1):
        later[position - 1] = later[position] | frozenset(
            demands[indices[position]]
        )

    def options(position: int, residual: dict[Hashable, int]) -> Iterator[int]:
        demand = demands[indices[position]]
        capacity = fits_times(demand, residual)
        if later[position].isdisjoint(demand):
            return iter((capacity,))
        return iter(range(capacity, -1, -1))

    found: list[tuple[tuple[int, int], ...]] = []
    chosen: list[tuple[int, int]] = [(index, 0) for index in indices]
    start = dict(available)
    stack = [(0, start, options(0, start))]
    while stack:
        position, residual, counts = stack[-1]
        times = next(counts, None)
        if times is None:
            stack.pop()
            continue
        index = indices[position]
        reduced = residual
        if times:
            reduced = dict(residual)
            for key, need in demands[index].items():
                reduced[key] -= need * times
        chosen[position] = (index, times)
        if position == size - 1:
            if not any(fits_times(demands[i], reduced) for i in indices):
                found.append(tuple(chosen))
        else:
            stack.append((position + 1, reduced, options(position + 1, reduced)))
    return found


def maximal_vectors(
    demands: Sequence[Demand], available: Mapping[Hashable, int]
) -> list[tuple[int, ...]]:
    """Return every maximal applicable occurrence vector.

    The result is sorted in descending lexicographic order, so the first
    entry favours low indices. With no applicable occurrence the only
    result is the zero vector.
    """
    for index, demand in enumerate(demands):
        if not demand:
            raise ValueError(f"Occurrence type {index} has an empty demand")
    per_component = [
        _search_component(indices, demands, available)
        for indices in _components(demands)
    ]
    vectors: list[tuple[int, ...]] = []
    for combination in itertools.product(*per_component):
        dense = [0] * len(demands)
        for part in combination:
            for index, times in part:
                dense[index] = times
        vectors.append(tuple(dense))
    vectors.sort(reverse=True)
    logger.debug(
        "Found %d maximal vectors over %d occurrence types",
        len(vectors),
        len(demands),
    )
    return vectors
