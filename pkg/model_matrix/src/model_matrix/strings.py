"""Deterministic raw/compact string pair used for every model measurement.

The raw string is a synthetic event log; the compact string stands for its
budget-compacted form: one summary line plus the newest events verbatim.
Both are byte-for-byte reproducible so token counts are comparable across
runs and machines.
"""

from __future__ import annotations

RAW_LINES = 160
TAIL_LINES = 20
PAYLOAD_BYTES = 112

_FILLER = "the quick brown fox jumps over the lazy dog; "


def _payload() -> str:
    reps = _FILLER * (PAYLOAD_BYTES // len(_FILLER) + 2)
    return reps[:PAYLOAD_BYTES]


def build_strings() -> tuple[str, str]:
    """(raw, compact): 160 event lines, and a summary plus the last 20."""
    payload = _payload()
    lines = [f"event {i}: {payload}" for i in range(1, RAW_LINES + 1)]
    raw = "\n".join(lines)
    omitted = RAW_LINES - TAIL_LINES
    compact = "\n".join([f"summary: {omitted} events omitted...", *lines[-TAIL_LINES:]])
    return raw, compact
