"""Per-model token counts and CPU latencies over the fixed string pair.

Each target model is loaded once; the raw string is only ever tokenized,
never forwarded.  The compact string drives one forward pass over a short
window and one greedy generation of exactly eight tokens, so rows stay
comparable and deterministic on CPU.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from time import perf_counter
from typing import Callable, Iterable, Sequence

FORWARD_WINDOW = 256
GENERATE_WINDOW = 128
GENERATE_TOKENS = 8


@dataclass(frozen=True)
class ModelTarget:
    name: str
    nominal_context: int


@dataclass(frozen=True)
class ModelResult:
    model: str
    context: int
    raw_tok: int
    compact_tok: int
    ratio: float
    load_ms: float
    forward_ms: float
    generate_ms: float


RESULT_FIELDS = tuple(f.name for f in fields(ModelResult))

DEFAULT_TARGETS: tuple[ModelTarget, ...] = (
    ModelTarget("distilgpt2", 1024),
    ModelTarget("gpt2", 1024),
    ModelTarget("facebook/opt-125m", 2048),
)

Loader = Callable[[str], tuple[object, object]]


def _hf_loader(name: str):
    from transformers import AutoModelForCausalLM, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(name)
    model = AutoModelForCausalLM.from_pretrained(name)
    return tokenizer, model


def _model_context(model, fallback: int) -> int:
    config = getattr(model, "config", None)
    for attr in ("n_ctx", "max_position_embeddings", "n_positions"):
        value = getattr(config, attr, None)
        if isinstance(value, int) and value > 0:
            return value
    return fallback


def measure_model(
    target: ModelTarget, raw: str, compact: str, loader: Loader | None = None
) -> ModelResult:
    """One matrix row for the target model.

    Counts tokens for both strings, forwards the first
    min(256, compact_tok) compact tokens, and greedily generates exactly
    eight tokens from the first min(128, compact_tok).  Raises on load or
    shape failures; callers isolate rows.
    """
    import torch

    torch.manual_seed(0)
    torch.set_num_threads(1)

    load = loader or _hf_loader
    start = perf_counter()
    tokenizer, model = load(target.name)
    load_ms = (perf_counter() - start) * 1000.0
    model.eval()

    raw_ids = tokenizer(raw)["input_ids"]
    compact_ids = tokenizer(compact)["input_ids"]
    raw_tok = len(raw_ids)
    compact_tok = len(compact_ids)
    if compact_tok == 0:
        raise RuntimeError(f"{target.name}: compact string tokenized to nothing")

    forward_ids = torch.tensor([compact_ids[: min(FORWARD_WINDOW, compact_tok)]])
    start = perf_counter()
    with torch.no_grad():
        model(input_ids=forward_ids)
    forward_ms = (perf_counter() - start) * 1000.0

    prompt = torch.tensor([compact_ids[: min(GENERATE_WINDOW, compact_tok)]])
    pad_token_id = getattr(tokenizer, "eos_token_id", None)
    start = perf_counter()
    with torch.no_grad():
        generated = model.generate(
            prompt,
            do_sample=False,
            min_new_tokens=GENERATE_TOKENS,
            max_new_tokens=GENERATE_TOKENS,
            pad_token_id=pad_token_id,
        )
    generate_ms = (perf_counter() - start) * 1000.0
    new_tokens = generated.shape[1] - prompt.shape[1]
    if new_tokens != GENERATE_TOKENS:
        raise RuntimeError(
            f"{target.name}: expected {GENERATE_TOKENS} generated tokens, got {new_tokens}"
        )

    return ModelResult(
        model=target.name,
        context=_model_context(model, target.nominal_context),
        raw_tok=raw_tok,
        compact_tok=compact_tok,
        ratio=compact_tok / raw_tok,
        load_ms=load_ms,
        forward_ms=forward_ms,
        generate_ms=generate_ms,
    )


def write_results(results: Sequence[ModelResult], out_dir: str) -> None:
    """model_matrix.json (array) and model_matrix.csv with the fixed header."""
    os.makedirs(out_dir, exist_ok=True)
    rows = [asdict(r) for r in results]
    json_path = os.path.join(out_dir, "model_matrix.json")
    csv_path = os.path.join(out_dir, "model_matrix.csv")
    try:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=RESULT_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise OSError(f"cannot write results under {out_dir}: {exc}") from exc


def run_model_matrix(
    targets: Iterable[ModelTarget], out_dir: str, loader: Loader | None = None
) -> list[ModelResult]:
    """Measure every target, isolating per-row failures; write both outputs."""
    from .strings import build_strings

    raw, compact = build_strings()
    results: list[ModelResult] = []
    for target in targets:
        try:
            result = measure_model(target, raw, compact, loader=loader)
        except Exception as exc:  # a dead row must not poison the rest
            print(f"model-matrix: {target.name}: {exc}", file=sys.stderr)
            continue
        results.append(result)
        print(
            f"{result.model}: context={result.context} raw={result.raw_tok} "
            f"compact={result.compact_tok} ratio={result.ratio:.5f}"
        )
    write_results(results, out_dir)
    return results
