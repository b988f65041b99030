"""Strict pairwise order constraints over success probabilities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .betabinom import DomainError

__all__ = ["CycleError", "ConstraintSet", "PointNull", "full_order", "validate", "satisfies", "find_cycle"]


class CycleError(ValueError):
    """The constraint relations contain a directed cycle, so no parameter vector satisfies them."""

    def __init__(self, cycle: Sequence[int], names: Sequence[str] | None = None):
        self.cycle = tuple(cycle)
        labels = [names[i] if names else f"theta[{i}]" for i in self.cycle]
        super().__init__("unsatisfiable constraints, cycle: " + " < ".join(labels + labels[:1]))


def find_cycle(k: int, relations: Iterable[tuple[int, int]]) -> list[int] | None:
    """Return the vertices of one directed cycle, or None when the graph is acyclic."""
    adjacency: dict[int, list[int]] = {v: [] for v in range(k)}
    for i, j in relations:
        adjacency[i].append(j)
    for v in adjacency:
        adjacency[v].sort()

    white, grey, black = 0, 1, 2
    colour = [white] * k
    parent = [-1] * k
    for root in range(k):
        if colour[root] != white:
            continue
        stack = [(root, iter(adjacency[root]))]
        colour[root] = grey
        while stack:
            node, children = stack[-1]
            for child in children:
                if colour[child] == white:
                    colour[child] = grey
                    parent[child] = node
                    stack.append((child, iter(adjacency[child])))
                    break
                if colour[child] == grey:
                    cycle = [node]
                    while cycle[-1] != child:
                        cycle.append(parent[cycle[-1]])
                    return cycle[::-1]
            else:
                colour[node] = black
                stack.pop()
    return None


@dataclass(frozen=True)
class ConstraintSet:
    """Relations ``(i, j)`` each meaning ``theta[i] < theta[j]`` over ``k`` parameters.

    Construction rejects out-of-range indices, self-relations, duplicates and
    cycles; a constructed set is always satisfiable.
    """

    k: int
    relations: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"dimension k must be a positive integer, got {self.k!r}")
        rels = tuple((int(i), int(j)) for i, j in self.relations)
        seen = set()
        for i, j in rels:
            if not (0 <= i < self.k and 0 <= j < self.k):
                raise ValueError(f"relation ({i}, {j}) has an index outside [0, {self.k})")
            if i == j:
                raise ValueError(f"relation ({i}, {j}) compares a parameter with itself")
            if (i, j) in seen:
                raise ValueError(f"duplicate relation ({i}, {j})")
            seen.add((i, j))
        object.__setattr__(self, "relations", rels)
        validate(self)

    def satisfies(self, theta) -> bool | np.ndarray:
        return satisfies(self, theta)

    def permuted(self, perm: Sequence[int]) -> "ConstraintSet":
        """Relabel index ``i`` as ``perm[i]``."""
        return ConstraintSet(self.k, tuple((perm[i], perm[j]) for i, j in self.relations))


def validate(cs: ConstraintSet) -> None:
    """Raise :class:`CycleError` if the relation digraph is cyclic."""
    cycle = find_cycle(cs.k, cs.relations)
    if cycle is not None:
        raise CycleError(cycle)


def satisfies(cs: ConstraintSet, theta) -> bool | np.ndarray:
    """Indicator of the restricted region.

    ``theta`` has ``cs.k`` along its first axis; extra trailing axes are
    evaluated elementwise, so a ``(k, m)`` array of draws yields ``m``
    booleans. Ties are outside the region.
    """
    arr = np.asarray(theta, dtype=float)
    if arr.ndim == 0 or arr.shape[0] != cs.k:
        raise ValueError(f"theta must have length {cs.k} along its first axis, got shape {arr.shape}")
    inside = np.ones(arr.shape[1:], dtype=bool)
    for i, j in cs.relations:
        inside &= arr[i] < arr[j]
    if inside.ndim == 0:
        return bool(inside)
    return inside


def full_order(k: int) -> ConstraintSet:
    """The chain ``theta[0] < theta[1] < ... < theta[k-1]``."""
    if k < 2:
        raise ValueError(f"a full order needs at least two parameters, got k={k}")
    return ConstraintSet(k, tuple((i, i + 1) for i in range(k - 1)))


@dataclass(frozen=True)
class PointNull:
    """Hypothesised value for each of ``k`` success probabilities."""

    k: int
    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) != self.k:
            raise ValueError(f"point null needs {self.k} values, got {len(values)}")
        for v in values:
            if not 0.0 < v < 1.0:
                raise DomainError(f"point-null values must lie strictly inside (0, 1), got {v}")
        object.__setattr__(self, "values", values)
