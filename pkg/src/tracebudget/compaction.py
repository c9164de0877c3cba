"""Budgeted suffix compaction of a history epoch.

Compaction walks the history backwards, keeping whole items while they fit
the remaining budget.  The first item that does not fit whole is
middle-truncated into whatever budget is left (or dropped when none is),
everything older is discarded, and a single summary item is prepended.  The
replacement epoch's ordinal is the old one plus one, which invalidates
outstanding cursors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .budgeting import BudgetMode, BudgetPolicy, CostCache, cached_measure
from .history_store import SUMMARY_ID, HistoryEpoch, TraceItem

_MARKER_HEAD = "...["
_MARKER_TAIL = " chars omitted]..."


def omission_marker(count: int) -> str:
    """The exact marker text recording count omitted characters."""
    return f"{_MARKER_HEAD}{count}{_MARKER_TAIL}"


def _marker_reserve(total_chars: int) -> int:
    # Pessimistic: the count can never need more digits than the whole
    # payload's character count does.
    return len(_MARKER_HEAD) + len(str(total_chars)) + len(_MARKER_TAIL)


def truncate_middle(payload: str, byte_allowance: int) -> str:
    """Shrink payload to at most byte_allowance UTF-8 bytes, eliding the middle.

    Keeps a prefix and a suffix on character boundaries around a marker
    recording how many characters were dropped.  Returns payload unchanged
    when it already fits, and the empty string when the allowance cannot
    even fit the marker.  The result always encodes to at most
    byte_allowance bytes of valid UTF-8.
    """
    if byte_allowance < 0:
        raise ValueError("byte allowance is a nonnegative integer")
    data = payload.encode("utf-8")
    if len(data) <= byte_allowance:
        return payload
    total_chars = len(payload)
    reserve = _marker_reserve(total_chars)
    if byte_allowance < reserve:
        return ""
    split = byte_allowance - reserve
    prefix_budget = split // 2
    # errors="ignore" drops only the partial character at the cut, since the
    # source bytes are valid UTF-8 throughout.
    prefix = data[:prefix_budget].decode("utf-8", errors="ignore")
    suffix_budget = split - prefix_budget
    suffix = data[len(data) - suffix_budget :].decode("utf-8", errors="ignore") if suffix_budget else ""
    omitted = total_chars - len(prefix) - len(suffix)
    return prefix + omission_marker(omitted) + suffix


def _byte_allowance(limit: int, mode: BudgetMode) -> int:
    if mode is BudgetMode.BYTES:
        return limit
    # Four bytes per approximate token; exact mode starts from the same
    # optimistic guess and verifies afterwards.
    return 4 * limit


def _truncate_to_cost(
    payload: str, limit: int, policy: BudgetPolicy, cache: CostCache | None
) -> str:
    """Middle-truncate payload until its measured cost is at most limit."""
    allowance = _byte_allowance(limit, policy.mode)
    if policy.mode is not BudgetMode.TOKENS_EXACT:
        return truncate_middle(payload, allowance)
    while allowance > 0:
        fragment = truncate_middle(payload, allowance)
        if not fragment:
            return ""
        if cached_measure(fragment, policy, cache) <= limit:
            return fragment
        allowance //= 2
    return ""


@dataclass(frozen=True)
class CompactionResult:
    """Replacement epoch plus bookkeeping about what survived."""

    replacement: HistoryEpoch
    retained_count: int
    boundary_truncated: bool
    discarded_count: int


@dataclass
class CompactionWindow:
    """Per-consumer window state: an epoch counter and a prefill estimate."""

    epoch: int = 0
    prefill_estimate: int | None = None

    def start_new(self) -> None:
        self.epoch += 1
        self.prefill_estimate = None

    def set_prefill_estimate(self, estimate: int) -> None:
        if estimate < 0:
            raise ValueError("prefill estimate is a nonnegative integer")
        self.prefill_estimate = estimate


def compact(
    history: HistoryEpoch,
    policy: BudgetPolicy,
    summary: str,
    charge_summary: bool = False,
    window: CompactionWindow | None = None,
    cache: CostCache | None = None,
) -> CompactionResult:
    """Replace history with a summary item plus its longest fitting suffix.

    With charge_summary the summary's own cost is paid out of the budget
    first (truncating the summary itself when it alone exceeds the budget);
    otherwise the full budget goes to the suffix.  A supplied window is
    rolled to a fresh epoch; a supplied cache memoizes cost measurements.
    """
    budget = policy.limit
    summary_payload = summary
    if charge_summary:
        summary_cost = cached_measure(summary, policy, cache)
        if summary_cost > budget:
            summary_payload = _truncate_to_cost(summary, budget, policy, cache)
        budget = max(0, budget - summary_cost)

    kept: list[TraceItem] = []
    remaining = budget
    boundary_truncated = False
    for i in range(len(history) - 1, -1, -1):
        item = history[i]
        cost = cached_measure(item.payload, policy, cache)
        if cost <= remaining:
            kept.append(item)
            remaining -= cost
            continue
        if remaining > 0:
            fragment = _truncate_to_cost(item.payload, remaining, policy, cache)
            if fragment:
                kept.append(TraceItem(item.id, fragment))
                boundary_truncated = True
        break
    kept.reverse()

    items = [TraceItem(SUMMARY_ID, summary_payload, is_summary=True), *kept]
    replacement = HistoryEpoch(history.epoch + 1, items)
    if window is not None:
        window.start_new()
    retained = len(kept) - (1 if boundary_truncated else 0)
    discarded = len(history) - len(kept)
    return CompactionResult(replacement, retained, boundary_truncated, discarded)
