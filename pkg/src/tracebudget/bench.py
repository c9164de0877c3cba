"""Benchmark harness exercising the trace structures on synthetic workloads.

Each workload builds a complete b-ary tree with periodically closed edges,
a history with one payload per vertex, a soft-capped log, and a subscriber
registry, then reports structure sizes, compaction ratios, and median-of-5
wall-clock timings.  Invoked through the ``bench`` console script.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
from dataclasses import asdict, dataclass, fields
from time import perf_counter
from typing import Callable, Iterable, Mapping, Sequence

from .budgeting import BudgetMode, BudgetPolicy, measure
from .compaction import CompactionWindow, compact
from .history_store import HistoryEpoch, TraceItem
from .observation_registry import ObservationRegistry, ObsMode
from .soft_log import SoftCappedLog
from .trace_graph import BOTH_STATES, EdgeState, TraceGraph

# 96 bytes, 24 approximate tokens; charged on top of the suffix budget.
SUMMARY_TEXT = (
    "summary: older trace entries were compacted away; "
    "the recent suffix was retained verbatim below."
)

PROJECTION_KEY = "root/branch/1/leaf"

TIMING_REPEATS = 5


@dataclass(frozen=True)
class WorkloadConfig:
    name: str
    vertices: int
    branching: int = 2
    closed_period: int = 3
    payload_bytes: int = 140
    token_budget: int = 1024
    softcap_bytes: int = 16384
    soft_ratio: float = 0.9375
    softlog_entry_bytes: int = 140
    registry_subscribers: int = 100

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("workload name must be non-empty")
        if self.vertices < 1:
            raise ValueError("vertices must be at least 1")
        if self.branching < 1:
            raise ValueError("branching must be at least 1")
        if self.closed_period < 1:
            raise ValueError("closed_period must be at least 1")
        if self.payload_bytes < 1 or self.softlog_entry_bytes < 1:
            raise ValueError("payload sizes must be positive")
        if self.token_budget < 0:
            raise ValueError("token_budget is nonnegative")
        if self.softcap_bytes < 1:
            raise ValueError("softcap_bytes must be positive")
        if not 0.0 < self.soft_ratio <= 1.0:
            raise ValueError("soft_ratio lies in (0, 1]")
        if self.registry_subscribers < 0:
            raise ValueError("registry_subscribers is nonnegative")


@dataclass(frozen=True)
class WorkloadResult:
    workload: str
    vertices: int
    edges: int
    active_desc: int
    all_desc: int
    build_ms: float
    active_query_ms: float
    full_query_ms: float
    compact_ms: float
    original_tokens: int
    compact_tokens: int
    ratio: float
    softlog_entries: int
    softlog_bytes: int
    registry_time_ms: float


RESULT_FIELDS = tuple(f.name for f in fields(WorkloadResult))

DEFAULT_CONFIGS: tuple[WorkloadConfig, ...] = (
    WorkloadConfig(
        name="balanced_10k",
        vertices=10_000,
        branching=2,
        closed_period=3,
        payload_bytes=140,
        token_budget=1024,
        softcap_bytes=16_384,
        soft_ratio=0.9375,
        softlog_entry_bytes=140,
    ),
    WorkloadConfig(
        name="wide_20k",
        vertices=20_000,
        branching=8,
        closed_period=3,
        payload_bytes=200,
        token_budget=2048,
        softcap_bytes=25_600,
        soft_ratio=0.9375,
        softlog_entry_bytes=205,
    ),
    WorkloadConfig(
        name="deep_40k",
        vertices=40_000,
        branching=2,
        closed_period=4,
        payload_bytes=272,
        token_budget=4096,
        softcap_bytes=28_672,
        soft_ratio=0.9375,
        softlog_entry_bytes=269,
    ),
)


def vertex_payload(vertex: int, size: int) -> str:
    """ASCII payload of exactly size bytes embedding the vertex id."""
    tag = f"item {vertex}"
    if len(tag) >= size:
        return tag[-size:]
    return tag.rjust(size, "x")


def build_workload_graph(cfg: WorkloadConfig) -> TraceGraph:
    """Complete branching-ary tree; every closed_period-th vertex closed."""
    graph = TraceGraph()
    for v in range(1, cfg.vertices):
        parent = (v - 1) // cfg.branching
        state = EdgeState.CLOSED if v % cfg.closed_period == 0 else EdgeState.ACTIVE
        graph.upsert(parent, v, state)
    return graph


def _timed(fn: Callable[[], object], repeats: int = TIMING_REPEATS):
    """Run fn repeats times; returns (last result, median wall ms)."""
    result = None
    samples = []
    for _ in range(repeats):
        start = perf_counter()
        result = fn()
        samples.append((perf_counter() - start) * 1000.0)
    return result, statistics.median(samples)


def run_workload(cfg: WorkloadConfig) -> WorkloadResult:
    graph, build_ms = _timed(lambda: build_workload_graph(cfg))

    active, active_ms = _timed(lambda: graph.descendants(0, {EdgeState.ACTIVE}))
    everything, full_ms = _timed(lambda: graph.descendants(0, BOTH_STATES))

    history = HistoryEpoch()
    for v in range(cfg.vertices):
        history.append(TraceItem(v, vertex_payload(v, cfg.payload_bytes)))
    policy = BudgetPolicy(BudgetMode.TOKENS_APPROX, cfg.token_budget)
    original_tokens = sum(measure(item.payload, policy) for item in history)

    window = CompactionWindow()
    result, compact_ms = _timed(lambda: compact(history, policy, SUMMARY_TEXT, window=window))
    compact_tokens = sum(measure(item.payload, policy) for item in result.replacement)

    log = SoftCappedLog(cfg.softcap_bytes, cfg.soft_ratio)
    for v in range(cfg.vertices):
        log.append(vertex_payload(v, cfg.softlog_entry_bytes))
    softlog_entries, softlog_bytes = log.stats()

    registry = ObservationRegistry()
    for i in range(cfg.registry_subscribers):
        mode = ObsMode.EXACT if i % 2 == 0 else ObsMode.RECURSIVE
        registry.register(f"sub-{i}", [(f"root/branch/{i}", mode)])
    _, registry_ms = _timed(lambda: registry.project(PROJECTION_KEY))

    return WorkloadResult(
        workload=cfg.name,
        vertices=cfg.vertices,
        edges=graph.edge_count(),
        active_desc=len(active),
        all_desc=len(everything),
        build_ms=build_ms,
        active_query_ms=active_ms,
        full_query_ms=full_ms,
        compact_ms=compact_ms,
        original_tokens=original_tokens,
        compact_tokens=compact_tokens,
        ratio=compact_tokens / original_tokens,
        softlog_entries=softlog_entries,
        softlog_bytes=softlog_bytes,
        registry_time_ms=registry_ms,
    )


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _csv_text(rows: Sequence[Mapping[str, object]]) -> str:
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=RESULT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def run_matrix(configs: Iterable[WorkloadConfig], out_dir: str) -> list[WorkloadResult]:
    """Run every workload and write per-workload JSON, matrix JSON, and CSV."""
    configs = list(configs)
    os.makedirs(out_dir, exist_ok=True)
    results = []
    for cfg in configs:
        result = run_workload(cfg)
        results.append(result)
        _write_text(
            os.path.join(out_dir, f"{cfg.name}.json"),
            json.dumps(asdict(result), indent=2) + "\n",
        )
        print(
            f"{cfg.name}: vertices={result.vertices} edges={result.edges} "
            f"active={result.active_desc} ratio={result.ratio:.6f}"
        )
    rows = [asdict(r) for r in results]
    _write_text(
        os.path.join(out_dir, "tracebench_matrix.json"),
        json.dumps(rows, indent=2) + "\n",
    )
    _write_text(os.path.join(out_dir, "tracebench_matrix.csv"), _csv_text(rows))
    return results


def load_configs(path: str) -> list[WorkloadConfig]:
    """Read a JSON array of workload configs; errors name the offending path."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise ValueError(f"{path}: expected a JSON array of workload configs")
    known = {f.name for f in fields(WorkloadConfig)}
    configs = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ValueError(f"{path}: entry {i} is not an object")
        unknown = set(entry) - known
        if unknown:
            raise ValueError(f"{path}: entry {i} has unknown fields {sorted(unknown)}")
        try:
            configs.append(WorkloadConfig(**entry))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"{path}: entry {i}: {exc}") from exc
    return configs


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Benchmark the trace structures on synthetic workloads.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run workloads from a JSON config file")
    run_parser.add_argument("--config", required=True, help="JSON array of workload configs")
    run_parser.add_argument("--out", required=True, help="output directory")
    matrix_parser = sub.add_parser("matrix", help="run the built-in three-workload matrix")
    matrix_parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            configs: Iterable[WorkloadConfig] = load_configs(args.config)
        else:
            configs = DEFAULT_CONFIGS
        run_matrix(configs, args.out)
    except (OSError, ValueError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
