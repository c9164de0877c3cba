"""Overlay that accumulates key-value deltas against an implicit baseline.

The overlay never sees the underlying store.  The first operation touching
a key seeds the baseline with the value the caller reports was there (None
for absent); later operations only move the current value.  Reads reduce
the accumulated operations to net changes, so add-then-delete cancels out
and intermediate values vanish.
"""

from __future__ import annotations


class OverlayInvalidatedError(RuntimeError):
    """A read was attempted on an invalidated overlay."""


class DeltaOverlay:
    def __init__(self) -> None:
        # Baseline and current always share a key set: every operation seeds
        # the baseline on first touch and writes the current value.
        self._baseline: dict[str, str | None] = {}
        self._current: dict[str, str | None] = {}
        self._origins: dict[str, str] = {}
        self._valid = True

    @property
    def valid(self) -> bool:
        return self._valid

    def invalidate(self) -> None:
        """Mark the overlay dead; later records are dropped and reads raise."""
        self._valid = False

    def record_add(self, key: str, new_value: str) -> None:
        if not self._valid:
            return
        self._seed(key, None)
        self._current[key] = new_value

    def record_update(self, key: str, old_value: str | None, new_value: str) -> None:
        if not self._valid:
            return
        self._seed(key, old_value)
        self._current[key] = new_value

    def record_delete(self, key: str, old_value: str | None) -> None:
        if not self._valid:
            return
        self._seed(key, old_value)
        self._current[key] = None

    def record_move_update(
        self,
        src: str,
        dst: str,
        new_value: str,
        src_old_value: str | None = None,
    ) -> None:
        """Value moves from src to dst, changing to new_value on the way.

        Composed as a delete of src plus an add of dst, remembering the
        origin.  The src value being deleted is the overlay's current one
        when src was already touched, else the caller-supplied old value.
        """
        if not self._valid:
            return
        old = self._current[src] if src in self._current else src_old_value
        self.record_delete(src, old)
        self.record_add(dst, new_value)
        self._origins[dst] = src

    def changed_keys(self) -> dict[str, tuple[str | None, str | None]]:
        """Net changes as key -> (baseline value, current value), keys ascending."""
        self._require_valid()
        out: dict[str, tuple[str | None, str | None]] = {}
        for key in sorted(self._baseline):
            pair = (self._baseline[key], self._current[key])
            if pair[0] != pair[1]:
                out[key] = pair
        return out

    def renames(self) -> set[tuple[str, str]]:
        """(src, dst) pairs where a value left src for dst and both ends held.

        Reported only when the baseline had a value at src, the current
        state has one at dst, and src is now empty; otherwise the recorded
        origin stays dormant.
        """
        self._require_valid()
        out = set()
        for dst, src in self._origins.items():
            if (
                self._baseline.get(src) is not None
                and self._current.get(dst) is not None
                and self._current.get(src) is None
            ):
                out.add((src, dst))
        return out

    def _seed(self, key: str, old_value: str | None) -> None:
        if key not in self._baseline:
            self._baseline[key] = old_value

    def _require_valid(self) -> None:
        if not self._valid:
            raise OverlayInvalidatedError("overlay was invalidated")
