"""Absolute-time current traces and their numerical integration.

The trace is an independent check on the closed-form model: it is built
from header replicas and payload fragments rather than aggregate durations,
and integrated from sampled (time, current) boundary points.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .power import AckWindow, TransmissionPlan, state_sequence

CSV_HEADER = ("t_ms", "state", "current_ma")


class TraceSegment(NamedTuple):
    state: str
    start_ms: float
    duration_ms: float
    current_ma: float

    @property
    def end_ms(self) -> float:
        return self.start_ms + self.duration_ms


@dataclass(frozen=True)
class Trace:
    segments: Sequence[TraceSegment]
    period_ms: float

    def span(self, state: str) -> float:
        return sum(s.duration_ms for s in self.segments if s.state == state)

    def count(self, state: str) -> int:
        return sum(1 for s in self.segments if s.state == state)

    def samples(self):
        """Boundary samples: two per segment, at its start and end."""
        n = len(self.segments)
        t = np.empty(2 * n)
        i = np.empty(2 * n)
        for k, seg in enumerate(self.segments):
            t[2 * k] = seg.start_ms
            t[2 * k + 1] = seg.end_ms
            i[2 * k] = i[2 * k + 1] = seg.current_ma
        return t, i


def render_trace(plan: TransmissionPlan, ack_window: AckWindow = AckWindow.NONE) -> Trace:
    t = 0.0
    segments = []
    for seg in state_sequence(plan, ack_window):
        segments.append(TraceSegment(seg.state, t, seg.duration_ms, seg.current_ma))
        t += seg.duration_ms
    return Trace(tuple(segments), plan.period_ms)


def integrate_samples(t: np.ndarray, current: np.ndarray, period_ms: float) -> float:
    if len(t) == 0 or period_ms <= 0:
        return 0.0
    # Piecewise constant between paired samples; jumps have zero width, so the
    # trapezoid rule is exact.
    return float(np.trapezoid(current, t)) / period_ms


def integrate_trace(trace: Trace) -> float:
    """Average current in mA over the trace period."""
    t, i = trace.samples()
    return integrate_samples(t, i, trace.period_ms)


def _write_rows(trace: Trace, fh) -> int:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    rows = 0
    for seg in trace.segments:
        for t in (seg.start_ms, seg.end_ms):
            writer.writerow((repr(float(t)), seg.state, repr(float(seg.current_ma))))
            rows += 1
    return rows


def export_trace(trace: Trace, destination) -> int:
    """Write the trace as CSV to a path or text stream; returns the data-row count."""
    if isinstance(destination, io.TextIOBase) or hasattr(destination, "write"):
        return _write_rows(trace, destination)
    path = Path(destination)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            return _write_rows(trace, fh)
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc.strerror or exc}") from exc


def read_trace_samples(source):
    """Parse an exported trace back into (t_ms, current_ma, states) arrays."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected trace header {header}")
    t, cur, states = [], [], []
    for row in reader:
        t.append(float(row[0]))
        states.append(row[1])
        cur.append(float(row[2]))
    return np.asarray(t), np.asarray(cur), states
