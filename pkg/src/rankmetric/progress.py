"""Progress reporting for long exhaustive scans."""

from __future__ import annotations

import sys
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, TextIO


@dataclass
class EnumerationProgress:
    label: str = "Enumerating"
    total: int = 0
    processed: int = 0
    state: str = "idle"
    started_at: Optional[float] = None
    last_update: Optional[float] = None
    history: List[tuple[float, int]] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def begin(self, total: int) -> None:
        with self._lock:
            self.total = total
            self.processed = 0
            self.state = "running"
            now = time.time()
            self.started_at = now
            self.last_update = now
            self.history.clear()
            self.history.append((now, 0))

    def advance(self, count: int = 1) -> None:
        with self._lock:
            self.processed += count
            now = time.time()
            self.last_update = now
            self.history.append((now, self.processed))
            if len(self.history) > 120:
                self.history = self.history[-120:]

    def finish(self) -> None:
        with self._lock:
            self.state = "complete"
            self.last_update = time.time()

    def snapshot(self) -> Dict[str, object]:
        with self._lock:
            rate, eta = self._compute_rate_eta()
            return {
                "label": self.label,
                "total": self.total,
                "processed": self.processed,
                "state": self.state,
                "started_at": self.started_at,
                "last_update": self.last_update,
                "rate_per_sec": rate,
                "eta_seconds": eta,
            }

    def _compute_rate_eta(self) -> tuple[float, Optional[float]]:
        if len(self.history) < 2:
            return 0.0, None
        latest_time, latest_processed = self.history[-1]
        rate = 0.0
        eta = None
        for past_time, past_processed in reversed(self.history[:-1]):
            delta_count = latest_processed - past_processed
            delta_time = latest_time - past_time
            if delta_count > 0 and delta_time >= 0.5:
                rate = delta_count / max(delta_time, 1e-6)
                break
        remaining = max(self.total - latest_processed, 0)
        if rate > 0 and remaining > 0:
            eta = remaining / rate
        return rate, eta


def format_eta(seconds: float) -> str:
    seconds = max(0.0, seconds)
    minutes, sec = divmod(int(seconds + 0.5), 60)
    hours, minutes = divmod(minutes, 60)
    if hours:
        return f"{hours}h{minutes:02d}m"
    if minutes:
        return f"{minutes}m{sec:02d}s"
    return f"{sec}s"


def render_line(snapshot: Dict[str, object], *, final: bool = False) -> str:
    total = int(snapshot.get("total") or 0)
    processed = int(snapshot.get("processed") or 0)
    state = snapshot.get("state") or "idle"
    rate = float(snapshot.get("rate_per_sec") or 0.0)
    eta = snapshot.get("eta_seconds")
    percent = (processed / total * 100.0) if total else 0.0
    parts = [
        str(snapshot.get("label") or "Enumerating"),
        f"{processed}/{total}" if total else str(processed),
        f"{percent:5.1f}%",
    ]
    if rate > 0:
        parts.append(f"{rate:.0f}/s")
    if isinstance(eta, (float, int)) and eta > 0:
        parts.append(f"ETA {format_eta(float(eta))}")
    if state == "complete" and not final:
        parts.append("[finalizing]")
    else:
        parts.append(f"[{state}]")
    return " | ".join(parts)


class ProgressPrinter(threading.Thread):
    """Redraws one status line on a terminal stream until stopped."""

    def __init__(self, progress: EnumerationProgress, stream: TextIO, interval: float = 0.5) -> None:
        super().__init__(daemon=True)
        self.progress = progress
        self.stream = stream
        self.interval = interval
        self._stop_event = threading.Event()
        self._last_line_length = 0

    def stop(self) -> None:
        self._stop_event.set()

    def run(self) -> None:  # pragma: no cover - terminal UX
        while not self._stop_event.is_set():
            self._render()
            if self._stop_event.wait(self.interval):
                break
        self._render(final=True)

    def _render(self, final: bool = False) -> None:
        line = render_line(self.progress.snapshot(), final=final)
        self.stream.write(f"\r{line.ljust(self._last_line_length)}")
        self.stream.flush()
        self._last_line_length = len(line)
        if final:
            self.stream.write("\n")
            self.stream.flush()
            self._last_line_length = 0


@contextmanager
def reporting(
    label: str, *, enabled: bool, stream: Optional[TextIO] = None
) -> Iterator[Optional[EnumerationProgress]]:
    """Yield a progress object with a printer attached, or None when disabled."""
    if not enabled:
        yield None
        return
    progress = EnumerationProgress(label=label)
    printer = ProgressPrinter(progress, stream or sys.stderr)
    printer.start()
    try:
        yield progress
    finally:
        printer.stop()
        printer.join()
