"""Registry of subscribers observing hierarchical keys, with change projection.

Keys are '/'-separated paths with non-empty segments.  A subscriber holds a
set of (key, mode) pairs; exact mode matches the key alone, recursive mode
matches the key and everything under it.  Per-pair reference counters give
each key an effective mode (recursive wins over exact) so callers can see
when a registration or removal actually changed coverage.
"""

from __future__ import annotations

import json
from enum import Enum
from typing import Hashable, Iterable

SubscriberId = Hashable


class ObsMode(Enum):
    EXACT = "exact"
    RECURSIVE = "recursive"


class MalformedKeyError(ValueError):
    """Key is empty, has an empty segment, or ends with a separator."""


Transition = tuple[str, "ObsMode | None", "ObsMode | None"]


def _validate_key(key: str) -> None:
    if not isinstance(key, str):
        raise MalformedKeyError(f"keys are strings, got {key!r}")
    if not key or any(seg == "" for seg in key.split("/")):
        raise MalformedKeyError(f"malformed key {key!r}")


def _pair_order(pair: tuple[str, ObsMode]) -> tuple[str, str]:
    return pair[0], pair[1].value


class ObservationRegistry:
    def __init__(self) -> None:
        self._per_subscriber: dict[SubscriberId, set[tuple[str, ObsMode]]] = {}
        self._counters: dict[tuple[str, ObsMode], int] = {}

    def effective_mode(self, key: str) -> ObsMode | None:
        """RECURSIVE if any subscriber holds it recursively, else EXACT, else None."""
        if self._counters.get((key, ObsMode.RECURSIVE), 0) > 0:
            return ObsMode.RECURSIVE
        if self._counters.get((key, ObsMode.EXACT), 0) > 0:
            return ObsMode.EXACT
        return None

    def register(
        self, subscriber: SubscriberId, pairs: Iterable[tuple[str, ObsMode]]
    ) -> list[Transition]:
        """Add (key, mode) pairs for subscriber; returns net effective-mode changes.

        Input is deduplicated and pairs the subscriber already holds are
        no-ops, so registration is idempotent per subscriber.
        """
        wanted = sorted(set(pairs), key=_pair_order)
        for key, mode in wanted:
            _validate_key(key)
            if not isinstance(mode, ObsMode):
                raise TypeError(f"mode must be an ObsMode member, got {mode!r}")
        before = self._snapshot_modes(key for key, _ in wanted)
        held = self._per_subscriber.setdefault(subscriber, set())
        for pair in wanted:
            if pair not in held:
                held.add(pair)
                self._counters[pair] = self._counters.get(pair, 0) + 1
        if not held:
            del self._per_subscriber[subscriber]
        return self._diff_modes(before)

    def unregister(
        self,
        subscriber: SubscriberId,
        pairs: Iterable[tuple[str, ObsMode]] | None = None,
    ) -> list[Transition]:
        """Remove pairs (all of them when pairs is None); returns net changes.

        Removing a pair the subscriber does not hold is a no-op, as is
        unregistering an unknown subscriber.
        """
        held = self._per_subscriber.get(subscriber)
        if not held:
            return []
        doomed = sorted(held if pairs is None else set(pairs) & held, key=_pair_order)
        before = self._snapshot_modes(key for key, _ in doomed)
        for pair in doomed:
            held.remove(pair)
            count = self._counters[pair] - 1
            if count:
                self._counters[pair] = count
            else:
                del self._counters[pair]
        if not held:
            del self._per_subscriber[subscriber]
        return self._diff_modes(before)

    def project(self, changed_key: str) -> set[SubscriberId]:
        """Subscribers whose registrations match a change at changed_key."""
        _validate_key(changed_key)
        out: set[SubscriberId] = set()
        for subscriber, held in self._per_subscriber.items():
            for key, mode in held:
                if changed_key == key or (
                    mode is ObsMode.RECURSIVE
                    and changed_key.startswith(key + "/")
                ):
                    out.add(subscriber)
                    break
        return out

    def holdings(self, subscriber: SubscriberId) -> set[tuple[str, ObsMode]]:
        """Copy of the subscriber's current (key, mode) pairs."""
        return set(self._per_subscriber.get(subscriber, ()))

    def subscribers(self) -> list[SubscriberId]:
        return list(self._per_subscriber)

    def counter(self, key: str, mode: ObsMode) -> int:
        return self._counters.get((key, mode), 0)

    def debug_json(self) -> str:
        """Canonical JSON of all registrations; subscriber ids must be strings."""
        body = {
            "subscribers": {
                str(sub): [[key, mode.value] for key, mode in sorted(held, key=_pair_order)]
                for sub, held in self._per_subscriber.items()
            }
        }
        return json.dumps(body, sort_keys=True, separators=(",", ":"))

    # ------------------------------------------------------------------

    def _snapshot_modes(self, keys: Iterable[str]) -> dict[str, ObsMode | None]:
        return {key: self.effective_mode(key) for key in keys}

    def _diff_modes(self, before: dict[str, ObsMode | None]) -> list[Transition]:
        out: list[Transition] = []
        for key in sorted(before):
            now = self.effective_mode(key)
            if now is not before[key]:
                out.append((key, before[key], now))
        return out
