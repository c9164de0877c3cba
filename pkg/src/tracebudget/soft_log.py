"""Soft-capped byte log: a FIFO of strings trimmed in batches past a hard cap."""

from __future__ import annotations

import math
from collections import deque


class SoftCappedLog:
    """FIFO log of string entries bounded by a byte cap with hysteresis.

    Appends are O(1) amortized.  When the running total exceeds the hard
    cap, oldest entries are dropped until the total falls to the soft
    target, floor(ratio * cap), leaving slack so trims happen in occasional
    batches instead of on every append.  The newest entry is never dropped,
    even when it alone exceeds the cap.
    """

    def __init__(self, hard_cap_bytes: int, soft_ratio: float) -> None:
        if hard_cap_bytes <= 0:
            raise ValueError("hard cap is a positive byte count")
        if not 0.0 < soft_ratio <= 1.0:
            raise ValueError("soft ratio lies in (0, 1]")
        self._cap = hard_cap_bytes
        self._target = math.floor(soft_ratio * hard_cap_bytes)
        # (entry, utf-8 byte length); lengths cached so trims never re-encode.
        self._entries: deque[tuple[str, int]] = deque()
        self._total = 0

    def append(self, entry: str) -> int:
        """Add entry; returns how many old entries were trimmed to make room."""
        size = len(entry.encode("utf-8"))
        self._entries.append((entry, size))
        self._total += size
        if self._total <= self._cap:
            return 0
        # Never trim below the newest entry's own size, and never trim the
        # newest entry itself.
        target = max(self._target, size)
        trimmed = 0
        while self._total > target and len(self._entries) > 1:
            _, old_size = self._entries.popleft()
            self._total -= old_size
            trimmed += 1
        assert self._total == sum(n for _, n in self._entries)
        return trimmed

    def stats(self) -> tuple[int, int]:
        """(entry count, total byte size)."""
        return len(self._entries), self._total

    def entries(self) -> list[str]:
        """Current entries, oldest first."""
        return [entry for entry, _ in self._entries]
