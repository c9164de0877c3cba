"""Append-only history of trace items with epoch-scoped pagination.

A history is a list of items inside a numbered epoch.  Compaction replaces
the whole list and bumps the epoch; cursors remember the epoch they were
minted in so a reader can never silently page across a replacement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, TYPE_CHECKING

if TYPE_CHECKING:
    from .trace_graph import TraceGraph

SUMMARY_ID: int = 0


class StaleCursorError(LookupError):
    """The cursor was minted in a different epoch than the one being read."""


class PageOffsetError(IndexError):
    """The cursor offset lies beyond the end of the epoch."""


@dataclass(frozen=True)
class TraceItem:
    """One history entry: a vertex id, a payload string, and a summary flag."""

    id: int
    payload: str
    is_summary: bool = False

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError("item id is a nonnegative integer")
        if self.is_summary and self.id != SUMMARY_ID:
            raise ValueError("summary items carry the reserved id 0")
        if not isinstance(self.payload, str):
            raise TypeError("payload must be a str")


@dataclass(frozen=True)
class Cursor:
    """Read position: the epoch it was minted in plus an item offset."""

    epoch: int
    offset: int


class HistoryEpoch:
    """One epoch of history items.

    Clients only ever append; a summary item can enter solely as the first
    item of a replacement epoch built by compaction, so the constructor
    accepts one there and ``append`` rejects them outright.
    """

    def __init__(self, epoch: int = 0, items: Iterable[TraceItem] = ()) -> None:
        if epoch < 0:
            raise ValueError("epoch ordinals are nonnegative")
        self._epoch = epoch
        self._items: list[TraceItem] = list(items)
        for i, item in enumerate(self._items):
            if item.is_summary and i != 0:
                raise ValueError("only the first item of an epoch may be a summary")

    @property
    def epoch(self) -> int:
        return self._epoch

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, index):
        return self._items[index]

    def __iter__(self) -> Iterator[TraceItem]:
        return iter(self._items)

    def append(self, item: TraceItem) -> None:
        """Append one client item; summaries are rejected."""
        if item.is_summary:
            raise ValueError("summary items enter only through compaction")
        self._items.append(item)

    def first_cursor(self) -> Cursor:
        """Cursor addressing the start of this epoch."""
        return Cursor(self._epoch, 0)

    def page(self, cursor: Cursor, page_size: int) -> tuple[list[TraceItem], Cursor | None]:
        """Read up to page_size items at cursor; returns the page and the next cursor.

        The next cursor is None exactly when the page reaches the end of the
        epoch.  An offset equal to the length is legal and yields an empty
        final page.
        """
        if page_size < 1:
            raise ValueError("page_size is a positive integer")
        if cursor.epoch != self._epoch:
            raise StaleCursorError(
                f"cursor from epoch {cursor.epoch} used against epoch {self._epoch}"
            )
        n = len(self._items)
        if cursor.offset < 0 or cursor.offset > n:
            raise PageOffsetError(f"offset {cursor.offset} outside epoch of length {n}")
        page = self._items[cursor.offset : cursor.offset + page_size]
        if cursor.offset + page_size < n:
            return page, Cursor(self._epoch, cursor.offset + page_size)
        return page, None


def check_reference_consistency(
    history: HistoryEpoch,
    graph: "TraceGraph",
    external_ids: Iterable[int] = (),
) -> list[int]:
    """Indices of non-summary items whose id is neither a graph vertex nor external."""
    known = set(external_ids)
    out = []
    for i, item in enumerate(history):
        if item.is_summary:
            continue
        if item.id in known or graph.has_vertex(item.id):
            continue
        out.append(i)
    return out
