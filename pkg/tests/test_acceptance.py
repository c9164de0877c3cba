"""End-to-end acceptance checks, one test per shipping criterion.

Each test drives the public interfaces at the scale and tolerance the
package commits to, and prints a single PASS line (visible in the PASSES
section of a -rA run).  Any assertion failure marks the criterion FAILED.
"""

import itertools
import json
import random
import re
from time import perf_counter

import pytest

from tracebudget import (
    BOTH_STATES,
    BudgetMode,
    BudgetPolicy,
    CompactionWindow,
    CostCache,
    Cursor,
    DeltaOverlay,
    EdgeState,
    HistoryEpoch,
    ObservationRegistry,
    ObsMode,
    SoftCappedLog,
    StaleCursorError,
    TraceGraph,
    TraceItem,
    compact,
    measure,
    truncate_middle,
)
from tracebudget.bench import RESULT_FIELDS, main as bench_main

from oracles import (
    NaiveGraph,
    diff_worlds,
    longest_fitting_suffix,
    naive_projection,
    rebuild_counters,
)

ACTIVE = EdgeState.ACTIVE
CLOSED = EdgeState.CLOSED


def announce(name, detail, elapsed):
    print(f"ACCEPTANCE {name}: PASS ({detail}, {elapsed:.2f}s)")


def history_of(payloads, epoch=0):
    h = HistoryEpoch(epoch)
    for i, payload in enumerate(payloads):
        h.append(TraceItem(i + 1, payload))
    return h


# ---------------------------------------------------------------------------
# C01: filtered reachability on the five-vertex example


def test_c01_filtered_reachability():
    start = perf_counter()
    g = TraceGraph()
    g.upsert(0, 1, ACTIVE)
    g.upsert(0, 2, CLOSED)
    g.upsert(1, 3, ACTIVE)
    g.upsert(2, 4, ACTIVE)
    g.upsert(2, 5, CLOSED)
    assert g.descendants(0, {ACTIVE}) == [1, 3]
    assert g.descendants(2, {ACTIVE}) == [4]
    elapsed = perf_counter() - start
    assert elapsed < 1.0
    announce("C01 filtered-reachability", "five-vertex example", elapsed)


# ---------------------------------------------------------------------------
# C02: random graph operations against the edge-list oracle


def test_c02_graph_operations_match_oracle():
    start = perf_counter()
    rng = random.Random(101)
    predicates = ({ACTIVE}, {CLOSED}, BOTH_STATES, set())
    checks = 0
    for _ in range(1000):
        g = TraceGraph()
        ref = NaiveGraph()
        for _ in range(rng.randrange(1, 61)):
            if ref.edges and rng.random() < 0.25:
                child = rng.choice(ref.edges)[1]
                state = rng.choice((ACTIVE, CLOSED))
                g.set_state(child, state)
                ref.set_state(child, state)
            else:
                child = rng.randrange(1, 50)
                parent = rng.choice([v for v in range(50) if v != child])
                state = rng.choice((ACTIVE, CLOSED))
                g.upsert(parent, child, state)
                ref.upsert(parent, child, state)
            g.check_invariants()
            probe = rng.randrange(50)
            pred = rng.choice(predicates)
            assert g.children(probe, pred) == ref.children(probe, pred)
            assert g.descendants(probe, pred) == ref.descendants(probe, pred)
            checks += 2
        for pred in predicates[:3]:
            assert g.descendants(0, pred) == ref.descendants(0, pred)
            checks += 1
    elapsed = perf_counter() - start
    assert elapsed < 30.0
    announce("C02 graph-oracle", f"1000 op sequences, {checks} checked queries", elapsed)


# ---------------------------------------------------------------------------
# C03: compaction keeps the maximal fitting suffix, monotone in budget


def check_compaction_grid(costs, budgets, policy_of, checks):
    history = history_of(["abcd" * c for c in costs])
    prev_count = -1
    prev_frag = -1
    for budget in budgets:
        result = compact(history, policy_of(budget), "s")
        assert result.retained_count == longest_fitting_suffix(costs, budget)
        frag = 0
        if result.boundary_truncated:
            frag = len(result.replacement[1].payload.encode())
        assert result.retained_count >= prev_count
        if result.retained_count == prev_count:
            assert frag >= prev_frag
        prev_count, prev_frag = result.retained_count, frag
        checks[0] += 1


def test_c03_suffix_maximality_and_monotonicity():
    start = perf_counter()
    approx = lambda b: BudgetPolicy(BudgetMode.TOKENS_APPROX, b)
    checks = [0]
    # Exhaustive over every cost sequence of length <= 6 with costs 0..5,
    # across every budget 0..20.
    budgets = range(21)
    for n in range(7):
        for costs in itertools.product(range(6), repeat=n):
            check_compaction_grid(costs, budgets, approx, checks)
    # Seeded random coverage for longer sequences and larger costs, where
    # boundary truncation actually engages.
    rng = random.Random(103)
    for _ in range(400):
        n = rng.randrange(6, 13)
        costs = [rng.randrange(31) for _ in range(n)]
        check_compaction_grid(costs, range(0, 51), approx, checks)
    elapsed = perf_counter() - start
    assert elapsed < 60.0
    announce("C03 suffix-maximality", f"{checks[0]} compactions, zero tolerance", elapsed)


# ---------------------------------------------------------------------------
# C04: fuzzed multi-byte truncation


MARKER_RE = re.compile(r"^(.*?)\.\.\.\[(\d+) chars omitted\]\.\.\.(.*)$", re.DOTALL)


def test_c04_truncation_fuzz():
    start = perf_counter()
    rng = random.Random(104)
    # 1-, 2-, 3-, and 4-byte characters; no '.', '[', or ']' so the marker
    # can be parsed back unambiguously.
    alphabet = "ab XYæßéα汉字日🎉🐍𝄞"
    failures = 0
    for _ in range(10_000):
        payload = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 121)))
        payload_bytes = len(payload.encode("utf-8"))
        allowance = rng.randrange(0, payload_bytes + 30)
        out = truncate_middle(payload, allowance)
        encoded = out.encode("utf-8")  # also proves it decodes cleanly
        if payload_bytes <= allowance:
            if out != payload:
                failures += 1
            continue
        if len(encoded) > allowance:
            failures += 1
            continue
        if out == "":
            continue  # marker could not fit; drop is the contract
        m = MARKER_RE.match(out)
        if m is None:
            failures += 1
            continue
        head, count, tail = m.group(1), int(m.group(2)), m.group(3)
        if not payload.startswith(head) or not payload.endswith(tail):
            failures += 1
        elif count != len(payload) - len(head) - len(tail) or count < 1:
            failures += 1
    assert failures == 0
    elapsed = perf_counter() - start
    announce("C04 truncation-fuzz", "10000 payloads, zero failures", elapsed)


# ---------------------------------------------------------------------------
# C05: cost cache never changes compaction output


def epoch_bytes(epoch):
    rows = [[item.id, item.payload, item.is_summary] for item in epoch]
    return json.dumps([epoch.epoch, rows], ensure_ascii=False).encode("utf-8")


def test_c05_cache_noninterference():
    start = perf_counter()
    rng = random.Random(105)
    alphabet = "abcdé汉x "
    exact = lambda s: (len(s.encode("utf-8")) + 2) // 3
    for scenario in range(100):
        payloads = [
            "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 60)))
            for _ in range(rng.randrange(0, 16))
        ]
        history = history_of(payloads)
        mode = rng.choice((BudgetMode.BYTES, BudgetMode.TOKENS_APPROX, BudgetMode.TOKENS_EXACT))
        policy = BudgetPolicy(
            mode, rng.randrange(0, 41), exact_measurer=exact if mode is BudgetMode.TOKENS_EXACT else None
        )
        summary = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 80)))
        charge = rng.random() < 0.5
        baseline = compact(history, policy, summary, charge_summary=charge)
        reference = epoch_bytes(baseline.replacement)
        for capacity in (0, 1, 4, None):
            cache = CostCache(capacity=capacity)
            # Run twice per cache so warm hits are exercised too.
            for _ in range(2):
                result = compact(history, policy, summary, charge_summary=charge, cache=cache)
                assert epoch_bytes(result.replacement) == reference
                assert (
                    result.retained_count,
                    result.boundary_truncated,
                    result.discarded_count,
                ) == (
                    baseline.retained_count,
                    baseline.boundary_truncated,
                    baseline.discarded_count,
                )
    elapsed = perf_counter() - start
    announce("C05 cache-noninterference", "100 scenarios x {0,1,4,unbounded}", elapsed)


# ---------------------------------------------------------------------------
# C06: soft-capped log bounds


def test_c06_soft_log_bounds():
    start = perf_counter()
    import math

    violations = 0
    appends = 0
    streams = [
        (200, 0.75, 20, 20, 3000),   # cap, ratio, min size, max size, appends
        (50, 0.5, 7, 7, 3000),
        (1000, 0.9, 33, 33, 2000),
        (300, 0.8, 1, 40, 2000),
    ]
    rng = random.Random(106)
    for cap, ratio, lo, hi, count in streams:
        assert hi <= math.floor(ratio * cap)
        min_gap = math.floor((1 - ratio) * cap / hi)
        log = SoftCappedLog(cap, ratio)
        since_trim = 0
        for i in range(count):
            size = lo if lo == hi else rng.randrange(lo, hi + 1)
            entry = f"{i}:".ljust(size, "z")[:size]
            trimmed = log.append(entry)
            appends += 1
            since_trim += 1
            entries = log.entries()
            _, total = log.stats()
            if entries[-1] != entry:
                violations += 1
            if total > max(cap, len(entry.encode())):
                violations += 1
            if trimmed:
                if since_trim < min_gap:
                    violations += 1
                since_trim = 0
    assert appends == 10_000
    assert violations == 0
    elapsed = perf_counter() - start
    announce("C06 soft-log", "10000 appends, zero violations", elapsed)


# ---------------------------------------------------------------------------
# C07: registry projection equals naive matching; counters stay consistent


R_KEYS = ["a", "a/b", "a/b/c", "a/d", "e", "e/f"]
R_PROBES = R_KEYS + ["a/b/c/x", "a/d/y", "e/f/x/y", "ab"]
EXACT = ObsMode.EXACT
RECURSIVE = ObsMode.RECURSIVE


def assert_registry_matches(reg, mirror, checks):
    for probe in R_PROBES:
        assert reg.project(probe) == naive_projection(mirror, probe)
        checks[0] += 1


def test_c07_registry_equivalence():
    start = perf_counter()
    checks = [0]

    # Exhaustive: four subscribers, each holding one of the 12 (key, mode)
    # pairs or nothing at all.
    options = [None] + [(k, m) for k in R_KEYS for m in (EXACT, RECURSIVE)]
    for assignment in itertools.product(range(len(options)), repeat=4):
        reg = ObservationRegistry()
        mirror = {}
        for s, idx in enumerate(assignment):
            if options[idx] is None:
                continue
            reg.register(s, [options[idx]])
            mirror[s] = {options[idx]}
        assert_registry_matches(reg, mirror, checks)

    # Exhaustive: two subscribers over every subset of the pairs from a
    # three-key namespace.
    sub_keys = ["a", "a/b", "c"]
    sub_pairs = [(k, m) for k in sub_keys for m in (EXACT, RECURSIVE)]
    subsets = list(
        itertools.chain.from_iterable(
            itertools.combinations(sub_pairs, r) for r in range(len(sub_pairs) + 1)
        )
    )
    probes = sub_keys + ["a/b/x", "c/d", "ab"]
    for first in subsets:
        for second in subsets:
            reg = ObservationRegistry()
            mirror = {}
            if first:
                reg.register("s0", list(first))
                mirror["s0"] = set(first)
            if second:
                reg.register("s1", list(second))
                mirror["s1"] = set(second)
            for probe in probes:
                assert reg.project(probe) == naive_projection(mirror, probe)
                checks[0] += 1

    # Random multi-pair registries with churn; counters re-derived from
    # scratch after every operation.
    rng = random.Random(107)
    for _ in range(1000):
        reg = ObservationRegistry()
        mirror = {}
        for _ in range(rng.randrange(2, 9)):
            sub = f"s{rng.randrange(4)}"
            if rng.random() < 0.7:
                pairs = [
                    (rng.choice(R_KEYS), rng.choice((EXACT, RECURSIVE)))
                    for _ in range(rng.randrange(1, 4))
                ]
                reg.register(sub, pairs)
                mirror.setdefault(sub, set()).update(pairs)
            else:
                reg.unregister(sub)
                mirror.pop(sub, None)
            expected = rebuild_counters(mirror)
            for key in R_KEYS:
                for mode in (EXACT, RECURSIVE):
                    assert reg.counter(key, mode) == expected.get((key, mode), 0)
        assert_registry_matches(reg, mirror, checks)

    # Fixed scenario: one recursive root observer, one exact deep observer.
    reg = ObservationRegistry()
    reg.register("A", [("root", RECURSIVE)])
    reg.register("B", [("root/branch/4", EXACT)])
    assert reg.project("root/branch/4") == {"A", "B"}
    assert reg.project("root/branch/5") == {"A"}
    assert reg.project("root") == {"A"}

    elapsed = perf_counter() - start
    announce("C07 registry-equivalence", f"{checks[0]} projections, zero mismatches", elapsed)


# ---------------------------------------------------------------------------
# C08: overlay reduces to the naive store diff


def test_c08_overlay_matches_store_diff():
    start = perf_counter()
    rng = random.Random(108)
    keys = ["a", "b", "c", "d", "e"]
    for _ in range(10_000):
        world = {}
        for key in keys:
            if rng.random() < 0.5:
                world[key] = f"init-{key}"
        baseline = dict(world)
        ov = DeltaOverlay()
        for _ in range(rng.randrange(11)):
            key = rng.choice(keys)
            roll = rng.random()
            if key not in world:
                if roll < 0.8:
                    value = f"v{rng.randrange(50)}"
                    ov.record_add(key, value)
                    world[key] = value
            elif roll < 0.4:
                value = f"v{rng.randrange(50)}"
                ov.record_update(key, world[key], value)
                world[key] = value
            elif roll < 0.7:
                ov.record_delete(key, world[key])
                del world[key]
            else:
                dst = rng.choice([k for k in keys if k != key])
                value = f"v{rng.randrange(50)}"
                if dst in world:
                    ov.record_delete(dst, world[dst])
                    del world[dst]
                ov.record_move_update(key, dst, value, src_old_value=world[key])
                del world[key]
                world[dst] = value
        assert ov.changed_keys() == diff_worlds(baseline, world)

    # Fixed scenario: update then move reports exactly one rename.
    ov = DeltaOverlay()
    ov.record_update("a", "x", "y")
    ov.record_move_update("a", "b", "z")
    assert ov.changed_keys() == {"a": ("x", None), "b": (None, "z")}
    assert ov.renames() == {("a", "b")}

    elapsed = perf_counter() - start
    announce("C08 overlay-diff", "10000 sequences vs naive diff", elapsed)


# ---------------------------------------------------------------------------
# C09: shipped benchmark matrix


def test_c09_benchmark_matrix(tmp_path):
    start = perf_counter()
    out = tmp_path / "bench"
    assert bench_main(["matrix", "--out", str(out)]) == 0

    rows = json.loads((out / "tracebench_matrix.json").read_text())
    assert len(rows) == 3
    ratios = []
    for row in rows:
        assert set(row) == set(RESULT_FIELDS)
        assert row["edges"] == row["vertices"] - 1
        assert row["all_desc"] == row["vertices"] - 1
        assert 0 < row["active_desc"] < row["all_desc"]
        assert row["ratio"] < 0.01
        ratios.append(row["ratio"])
        # Timing columns are reported, never gated.
        for field in RESULT_FIELDS:
            if field.endswith("_ms"):
                assert isinstance(row[field], float) and row[field] >= 0.0
        assert (out / f"{row['workload']}.json").exists()
    assert ratios == sorted(ratios, reverse=True)
    assert ratios[0] > ratios[1] > ratios[2]

    csv_lines = (out / "tracebench_matrix.csv").read_text().splitlines()
    assert csv_lines[0] == ",".join(RESULT_FIELDS)
    assert len(csv_lines) == 4

    elapsed = perf_counter() - start
    assert elapsed < 60.0
    announce("C09 bench-matrix", "3 workloads, ratios decreasing", elapsed)


# ---------------------------------------------------------------------------
# C10: pagination walks every epoch exactly once; stale cursors rejected


def test_c10_pagination_and_stale_cursors():
    start = perf_counter()
    for n in range(21):
        payloads = [f"p{i}" for i in range(n)]
        history = history_of(payloads)
        for size in range(1, 6):
            seen = []
            pages = 0
            cursor = history.first_cursor()
            while cursor is not None:
                page, nxt = history.page(cursor, size)
                seen.extend(item.payload for item in page)
                if nxt is not None:
                    assert nxt.offset == cursor.offset + size
                    assert len(page) == size  # only full pages continue
                cursor = nxt
                pages += 1
                assert pages <= n + 1
            assert seen == payloads  # nothing skipped, nothing repeated
        if n:
            stale = history.first_cursor()
            result = compact(history, BudgetPolicy(BudgetMode.TOKENS_APPROX, 2), "s")
            with pytest.raises(StaleCursorError):
                result.replacement.page(stale, 3)
            assert result.replacement.page(result.replacement.first_cursor(), 3)
    elapsed = perf_counter() - start
    announce("C10 pagination", "lengths 0..20 x sizes 1..5 + stale cursors", elapsed)
