"""Token-count and latency matrix for small causal language models."""

from .measure import (
    DEFAULT_TARGETS,
    GENERATE_TOKENS,
    ModelResult,
    ModelTarget,
    RESULT_FIELDS,
    measure_model,
    run_model_matrix,
    write_results,
)
from .strings import PAYLOAD_BYTES, RAW_LINES, TAIL_LINES, build_strings

__all__ = [
    "DEFAULT_TARGETS",
    "GENERATE_TOKENS",
    "ModelResult",
    "ModelTarget",
    "PAYLOAD_BYTES",
    "RAW_LINES",
    "RESULT_FIELDS",
    "TAIL_LINES",
    "build_strings",
    "measure_model",
    "run_model_matrix",
    "write_results",
]

__version__ = "0.1.0"
