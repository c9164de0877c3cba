"""Rooted trace graph with status-labeled edges.

Every non-root vertex carries exactly one current parent edge, labeled
``active`` or ``closed``.  Upserting an edge for a child that already has
one moves the edge instead of duplicating it, so the structure stays a
functional graph rooted at vertex 0.  Adjacency lives in per
``(parent, state)`` buckets kept sorted by child id, which makes child
listings and breadth-first descendant enumeration deterministic.
"""

from __future__ import annotations

import json
from bisect import bisect_left, insort
from collections import deque
from enum import Enum
from itertools import chain
from typing import Iterable

ROOT: int = 0


class EdgeState(Enum):
    """Label carried by a parent edge."""

    ACTIVE = "active"
    CLOSED = "closed"


# Deterministic iteration order for state predicates.
_STATE_ORDER = (EdgeState.ACTIVE, EdgeState.CLOSED)

BOTH_STATES = frozenset(_STATE_ORDER)


class MissingChildError(KeyError):
    """An operation named a child that has no current edge."""


def _normalize_predicate(states: Iterable[EdgeState]) -> tuple[EdgeState, ...]:
    wanted = set(states)
    for st in wanted:
        if not isinstance(st, EdgeState):
            raise TypeError(f"state predicate accepts EdgeState members, got {st!r}")
    return tuple(st for st in _STATE_ORDER if st in wanted)


class TraceGraph:
    """Mutable rooted graph of trace vertices.

    Vertices are nonnegative integers; vertex 0 is the root and can never
    appear as a child.  The empty state predicate is legal everywhere and
    simply matches nothing.
    """

    def __init__(self) -> None:
        # child -> (parent, state); the single source of truth for edges.
        self._parent_of: dict[int, tuple[int, EdgeState]] = {}
        # (parent, state) -> sorted child ids; mirrors _parent_of exactly.
        self._buckets: dict[tuple[int, EdgeState], list[int]] = {}

    def __len__(self) -> int:
        return len(self._parent_of)

    def edge_count(self) -> int:
        """Number of current edges (one per non-root vertex)."""
        return len(self._parent_of)

    def upsert(self, parent: int, child: int, state: EdgeState) -> None:
        """Insert the edge (parent, child, state), displacing any prior edge of child."""
        if parent < 0 or child < 0:
            raise ValueError("vertex ids are nonnegative integers")
        if child == ROOT:
            raise ValueError("the root cannot be a child")
        if parent == child:
            raise ValueError("self-edges would break rootedness")
        if not isinstance(state, EdgeState):
            raise TypeError(f"state must be an EdgeState member, got {state!r}")
        prior = self._parent_of.get(child)
        if prior is not None:
            self._bucket_remove(prior, child)
        insort(self._buckets.setdefault((parent, state), []), child)
        self._parent_of[child] = (parent, state)

    def set_state(self, child: int, state: EdgeState) -> None:
        """Relabel the current edge of child in place."""
        try:
            parent, old = self._parent_of[child]
        except KeyError:
            raise MissingChildError(child) from None
        if old is state:
            return
        self._bucket_remove((parent, old), child)
        insort(self._buckets.setdefault((parent, state), []), child)
        self._parent_of[child] = (parent, state)

    def parent_of(self, child: int) -> tuple[int, EdgeState] | None:
        """Current (parent, state) of child, or None if child has no edge."""
        return self._parent_of.get(child)

    def children(self, parent: int, states: Iterable[EdgeState]) -> list[int]:
        """Children of parent whose edge state is in the predicate, ascending."""
        return list(self._accepted_children(parent, _normalize_predicate(states)))

    def descendants(self, start: int, states: Iterable[EdgeState]) -> list[int]:
        """Vertices reachable from start through accepted edges, in BFS order.

        The start vertex itself is excluded.  Within one parent, children are
        visited in ascending id order; the queue preserves first-discovery
        order across levels, so the output is fully deterministic.
        """
        accepted = _normalize_predicate(states)
        out: list[int] = []
        seen = {start}
        queue = deque([start])
        while queue:
            vertex = queue.popleft()
            for child in self._accepted_children(vertex, accepted):
                if child not in seen:
                    seen.add(child)
                    out.append(child)
                    queue.append(child)
        return out

    def has_vertex(self, vertex: int) -> bool:
        """True if vertex is the root or appears in any current edge."""
        if vertex == ROOT:
            return True
        if vertex in self._parent_of:
            return True
        return any(self._buckets.get((vertex, st)) for st in _STATE_ORDER)

    # ------------------------------------------------------------------
    # debug operations, used by tests

    def check_invariants(self) -> None:
        """Verify bucket/map agreement; raises ValueError on corruption."""
        seen: set[int] = set()
        for (parent, state), bucket in self._buckets.items():
            for i, child in enumerate(bucket):
                if i > 0 and bucket[i - 1] >= child:
                    raise ValueError(f"bucket {(parent, state)} not strictly sorted")
                if child in seen:
                    raise ValueError(f"child {child} appears in more than one bucket")
                seen.add(child)
                if self._parent_of.get(child) != (parent, state):
                    raise ValueError(f"bucket entry {child} disagrees with parent map")
        if seen != set(self._parent_of):
            raise ValueError("parent map and buckets cover different children")

    def check_acyclic(self) -> None:
        """Walk parent chains from every vertex; raises ValueError on a cycle."""
        safe: set[int] = {ROOT}
        for start in self._parent_of:
            path: list[int] = []
            on_path: set[int] = set()
            vertex = start
            while vertex not in safe:
                if vertex in on_path:
                    raise ValueError(f"cycle through vertex {vertex}")
                on_path.add(vertex)
                path.append(vertex)
                entry = self._parent_of.get(vertex)
                if entry is None:
                    break
                vertex = entry[0]
            safe.update(path)

    def debug_json(self) -> str:
        """Canonical JSON edge list, sorted by (parent, child)."""
        edges = sorted(
            (parent, child, state.value)
            for child, (parent, state) in self._parent_of.items()
        )
        return json.dumps(
            {"edges": [{"parent": p, "child": c, "state": s} for p, c, s in edges]},
            sort_keys=True,
            separators=(",", ":"),
        )

    # ------------------------------------------------------------------

    def _accepted_children(
        self, parent: int, accepted: tuple[EdgeState, ...]
    ) -> list[int]:
        buckets = [
            b for st in accepted if (b := self._buckets.get((parent, st)))
        ]
        if not buckets:
            return []
        if len(buckets) == 1:
            return buckets[0]
        return sorted(chain.from_iterable(buckets))

    def _bucket_remove(self, key: tuple[int, EdgeState], child: int) -> None:
        bucket = self._buckets[key]
        idx = bisect_left(bucket, child)
        # The bucket mirrors _parent_of, so the child is always present here.
        bucket.pop(idx)
        if not bucket:
            del self._buckets[key]
