"""Budget policies, payload cost measurement, and a bounded measurement cache."""

from __future__ import annotations

import hashlib
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum
from typing import Callable


class BudgetMode(Enum):
    BYTES = "bytes"
    TOKENS_APPROX = "tokens_approx"
    TOKENS_EXACT = "tokens_exact"


class MissingMeasurerError(ValueError):
    """tokens_exact measurement was requested without an injected measurer."""


@dataclass(frozen=True)
class BudgetPolicy:
    """A measurement mode, a nonnegative limit, and an optional exact measurer.

    The measurer is only consulted in tokens_exact mode; constructing a
    policy without one is fine as long as nothing is measured through it.
    """

    mode: BudgetMode
    limit: int
    exact_measurer: Callable[[str], int] | None = None

    def __post_init__(self) -> None:
        if self.limit < 0:
            raise ValueError("budget limit is a nonnegative integer")
        if not isinstance(self.mode, BudgetMode):
            raise TypeError(f"mode must be a BudgetMode member, got {self.mode!r}")


def measure(payload: str, policy: BudgetPolicy) -> int:
    """Cost of payload under the policy's mode.

    bytes: UTF-8 byte length.  tokens_approx: ceil(byte length / 4).
    tokens_exact: whatever the injected measurer reports.
    """
    if policy.mode is BudgetMode.BYTES:
        return len(payload.encode("utf-8"))
    if policy.mode is BudgetMode.TOKENS_APPROX:
        return (len(payload.encode("utf-8")) + 3) // 4
    if policy.exact_measurer is None:
        raise MissingMeasurerError("tokens_exact requires an injected measurer")
    return policy.exact_measurer(payload)


def _fingerprint(data: bytes, mode: BudgetMode) -> tuple[bytes, int, BudgetMode]:
    # Keying on (digest, byte length, mode) keeps collisions out of reach
    # while staying cheap next to an exact tokenizer call.
    return hashlib.blake2b(data, digest_size=8).digest(), len(data), mode


class CostCache:
    """LRU cache for measure(), keyed by content fingerprint and mode.

    capacity None means unbounded; capacity 0 stores nothing and degrades
    to plain measurement.  Hits refresh recency; insertion past capacity
    evicts the least recently used entry.
    """

    def __init__(self, capacity: int | None) -> None:
        if capacity is not None and capacity < 0:
            raise ValueError("capacity is a nonnegative integer or None")
        self._capacity = capacity
        self._entries: OrderedDict[tuple[bytes, int, BudgetMode], int] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._entries)

    def measure(self, payload: str, policy: BudgetPolicy) -> int:
        key = _fingerprint(payload.encode("utf-8"), policy.mode)
        cached = self._entries.get(key)
        if cached is not None:
            self.hits += 1
            self._entries.move_to_end(key)
            return cached
        self.misses += 1
        cost = measure(payload, policy)
        if self._capacity != 0:
            self._entries[key] = cost
            if self._capacity is not None:
                while len(self._entries) > self._capacity:
                    self._entries.popitem(last=False)
        return cost


def cached_measure(payload: str, policy: BudgetPolicy, cache: CostCache | None) -> int:
    """measure() routed through a cache when one is supplied."""
    if cache is None:
        return measure(payload, policy)
    return cache.measure(payload, policy)
