"""Test-then-train (prequential) evaluation."""
import json
import time
from dataclasses import dataclass, field

from .memory import estimate_memory


@dataclass(frozen=True)
class EvalRecord:
    items_seen: int
    cumulative_accuracy: float
    model_bytes: int
    elapsed_seconds: float | None

    def to_json(self):
        return json.dumps(
            {
                "items": self.items_seen,
                "acc": self.cumulative_accuracy,
                "bytes": self.model_bytes,
                "secs": self.elapsed_seconds,
            }
        )


@dataclass
class EvalTrace:
    """Checkpoint records plus run-level facts.

    ``truncated`` is set when the stream ran out before ``n_items``;
    ``over_budget`` when the model size exceeded ``max_bytes`` (the run stops
    at that item).
    """

    records: list = field(default_factory=list)
    truncated: bool = False
    over_budget: bool = False
    peak_bytes: int = 0
    items_seen: int = 0
    correct: int = 0
    runtime_seconds: float = 0.0

    @property
    def final_accuracy(self):
        return self.correct / self.items_seen if self.items_seen else 0.0

    @property
    def final_bytes(self):
        return self.records[-1].model_bytes if self.records else 0

    @property
    def avg_bytes(self):
        if not self.records:
            return 0.0
        return sum(r.model_bytes for r in self.records) / len(self.records)


def test_then_train(
    model,
    stream,
    n_items,
    checkpoint_every,
    memory=estimate_memory,
    max_bytes=None,
    timing=True,
    on_record=None,
):
    """Score each item with ``model.predict`` before ``model.step`` sees it.

    Records are emitted every ``checkpoint_every`` items and at the last item.
    Accuracy is cumulative. With ``timing=False`` the records carry ``None``
    for elapsed time, which makes traces reproducible byte for byte.
    ``memory`` is evaluated after every step when ``max_bytes`` is set,
    otherwise only at checkpoints.
    """
    if n_items < 1:
        raise ValueError("n_items must be >= 1")
    if checkpoint_every < 1:
        raise ValueError("checkpoint_every must be >= 1")
    trace = EvalTrace()
    it = iter(stream)
    t0 = time.perf_counter()
    for t in range(1, n_items + 1):
        try:
            x, y = next(it)
        except StopIteration:
            trace.truncated = True
            break
        if model.predict(x) == y:
            trace.correct += 1
        model.step(x, y)
        trace.items_seen = t
        size = None
        if max_bytes is not None:
            size = memory(model)
            trace.peak_bytes = max(trace.peak_bytes, size)
            if size > max_bytes:
                trace.over_budget = True
                break
        if t % checkpoint_every == 0 or t == n_items:
            if size is None:
                size = memory(model)
                trace.peak_bytes = max(trace.peak_bytes, size)
            _record(trace, size, t0, timing, on_record)
    if (trace.truncated or trace.over_budget) and trace.items_seen and (
        not trace.records or trace.records[-1].items_seen != trace.items_seen
    ):
        _record(trace, memory(model), t0, timing, on_record)
    trace.runtime_seconds = time.perf_counter() - t0
    return trace


def _record(trace, size, t0, timing, on_record):
    rec = EvalRecord(
        trace.items_seen,
        trace.correct / trace.items_seen,
        int(size),
        round(time.perf_counter() - t0, 6) if timing else None,
    )
    trace.records.append(rec)
    if on_record is not None:
        on_record(rec)
