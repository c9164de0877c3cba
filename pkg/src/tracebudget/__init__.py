"""Budgeted dynamic trace structures.

A rooted trace graph with status-labeled edges, an append-only history with
epoch-scoped pagination, budgeted summary-plus-suffix compaction, and the
supporting bounded structures: cost cache, soft-capped log, observation
registry, and delta overlay.
"""

from .budgeting import (
    BudgetMode,
    BudgetPolicy,
    CostCache,
    MissingMeasurerError,
    cached_measure,
    measure,
)
from .compaction import (
    CompactionResult,
    CompactionWindow,
    compact,
    omission_marker,
    truncate_middle,
)
from .delta_overlay import DeltaOverlay, OverlayInvalidatedError
from .history_store import (
    Cursor,
    HistoryEpoch,
    PageOffsetError,
    StaleCursorError,
    SUMMARY_ID,
    TraceItem,
    check_reference_consistency,
)
from .observation_registry import (
    MalformedKeyError,
    ObservationRegistry,
    ObsMode,
)
from .soft_log import SoftCappedLog
from .trace_graph import (
    BOTH_STATES,
    EdgeState,
    MissingChildError,
    ROOT,
    TraceGraph,
)

__all__ = [
    "BOTH_STATES",
    "BudgetMode",
    "BudgetPolicy",
    "CompactionResult",
    "CompactionWindow",
    "CostCache",
    "Cursor",
    "DeltaOverlay",
    "EdgeState",
    "HistoryEpoch",
    "MalformedKeyError",
    "MissingChildError",
    "MissingMeasurerError",
    "ObservationRegistry",
    "ObsMode",
    "OverlayInvalidatedError",
    "PageOffsetError",
    "ROOT",
    "SoftCappedLog",
    "StaleCursorError",
    "SUMMARY_ID",
    "TraceGraph",
    "TraceItem",
    "cached_measure",
    "check_reference_consistency",
    "compact",
    "measure",
    "omission_marker",
    "truncate_middle",
]

__version__ = "0.1.0"
