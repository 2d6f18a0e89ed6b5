"""Append-only persistence for readings, alerts, and rejection events.

Three JSON-lines logs live under one data directory (``readings.log``,
``alerts.log``, ``rejections.log``; UTF-8, LF-terminated, one object per
line). In-memory indices are rebuilt by rescanning the logs on open, so
recovery is a plain replay. A torn final line (interrupted append) is
discarded and the file truncated back to the last complete record; anything
torn earlier than that is real corruption and fails loudly.

Queries never interpolate caller strings anywhere: parameters stay structured
values end to end.

Concurrency: single writer, any number of readers. One internal lock
serializes mutations; readers copy slices out under it, so every query sees
a consistent prefix of the log.
"""

from __future__ import annotations

import bisect
import json
import threading
from pathlib import Path

import numpy as np

from .core import AlertEvent, AlertKind, FieldName, Reason, SensorReading, Timestamp

READINGS_LOG = "readings.log"
ALERTS_LOG = "alerts.log"
REJECTIONS_LOG = "rejections.log"


class StoreError(Exception):
    """Unrecoverable storage failure (IO error or mid-log corruption)."""


def _reading_record(r: SensorReading) -> dict:
    return {
        "seq": r.seq,
        "node_id": r.node_id,
        "field": r.field.value,
        "value": r.value,
        "sampled_at": r.sampled_at,
        "received_at": r.received_at,
    }


def _reading_from_record(rec: dict) -> SensorReading:
    return SensorReading(
        node_id=rec["node_id"],
        field=FieldName(rec["field"]),
        value=rec["value"],
        sampled_at=rec["sampled_at"],
        received_at=rec["received_at"],
        seq=rec["seq"],
    )


def _alert_record(alert_id: int, a: AlertEvent) -> dict:
    return {
        "alert_id": alert_id,
        "kind": a.kind.value,
        "node_id": a.node_id,
        "detected_at": a.detected_at,
        "window_start": a.window_start,
        "window_end": a.window_end,
        "evidence": a.evidence,
        "value": a.value,
    }


def _alert_from_record(rec: dict) -> AlertEvent:
    return AlertEvent(
        kind=AlertKind(rec["kind"]),
        detected_at=rec["detected_at"],
        node_id=rec["node_id"],
        window_start=rec["window_start"],
        window_end=rec["window_end"],
        evidence=rec["evidence"],
        value=rec["value"],
    )


class Store:
    """The cloud-database stand-in: durable logs plus time indices.

    ``data_dir=None`` keeps everything in memory (used by replay and tests
    that do not exercise durability); otherwise the directory is created on
    first open.
    """

    def __init__(self, data_dir: str | Path | None):
        self._lock = threading.Lock()
        self._dir = Path(data_dir) if data_dir is not None else None
        self._files: dict[str, object] = {}

        # per (node_id, field): parallel lists sorted by (sampled_at, seq)
        self._series_keys: dict[tuple[str, FieldName], list[tuple[int, int]]] = {}
        self._series_rows: dict[tuple[str, FieldName], list[SensorReading]] = {}
        # all readings ordered by (received_at, seq)
        self._received_keys: list[tuple[int, int]] = []
        self._received_rows: list[SensorReading] = []
        self._last_received: dict[str, Timestamp] = {}

        self._alerts: list[AlertEvent] = []  # ordered by (detected_at, alert_id)
        self._alert_keys: list[tuple[int, int]] = []
        self._rejections: list[tuple[Timestamp, str, str]] = []  # (at, source, reason)

        self.next_seq = 1
        self.next_alert_id = 1

        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
            self._recover()
            self._files = {
                name: open(self._dir / name, "ab")
                for name in (READINGS_LOG, ALERTS_LOG, REJECTIONS_LOG)
            }

    # ------------------------------------------------------------------
    # recovery
    # ------------------------------------------------------------------

    def _recover(self) -> None:
        for name, loader in (
            (READINGS_LOG, self._load_reading),
            (ALERTS_LOG, self._load_alert),
            (REJECTIONS_LOG, self._load_rejection),
        ):
            path = self._dir / name
            if not path.exists():
                continue
            raw = path.read_bytes()
            good = 0  # byte offset of the end of the last intact record
            lines = raw.split(b"\n")
            # a trailing LF makes the final split element empty
            for i, line in enumerate(lines):
                if line == b"" and i == len(lines) - 1:
                    break
                if i == len(lines) - 1:
                    # unterminated tail: the append was cut before its LF,
                    # so the record was never acknowledged; discard it
                    break
                try:
                    rec = json.loads(line.decode("utf-8"))
                    loader(rec)
                except (ValueError, KeyError, UnicodeDecodeError) as exc:
                    if i < len(lines) - 2:
                        raise StoreError(f"{name}: corrupt record at line {i + 1}: {exc}")
                    # torn final record: discard and truncate back
                    break
                good += len(line) + 1
            if good != len(raw):
                with open(path, "r+b") as fh:
                    fh.truncate(good)

    def _load_reading(self, rec: dict) -> None:
        r = _reading_from_record(rec)
        self._index_reading(r)
        self.next_seq = max(self.next_seq, r.seq + 1)

    def _load_alert(self, rec: dict) -> None:
        a = _alert_from_record(rec)
        self._index_alert(rec["alert_id"], a)
        self.next_alert_id = max(self.next_alert_id, rec["alert_id"] + 1)

    def _load_rejection(self, rec: dict) -> None:
        self._rejections.append((rec["at"], rec["source_address"], rec["reason"]))

    # ------------------------------------------------------------------
    # append side
    # ------------------------------------------------------------------

    def _write(self, log: str, record: dict) -> None:
        if self._dir is None:
            return
        fh = self._files[log]
        try:
            fh.write(json.dumps(record, sort_keys=True).encode("utf-8") + b"\n")
            fh.flush()
        except OSError as exc:
            raise StoreError(f"append to {log} failed: {exc}")

    def _index_reading(self, r: SensorReading) -> None:
        key = (r.node_id, r.field)
        keys = self._series_keys.setdefault(key, [])
        rows = self._series_rows.setdefault(key, [])
        pos = bisect.bisect_right(keys, (r.sampled_at, r.seq))
        keys.insert(pos, (r.sampled_at, r.seq))
        rows.insert(pos, r)
        rkey = (r.received_at, r.seq)
        pos = bisect.bisect_right(self._received_keys, rkey)
        self._received_keys.insert(pos, rkey)
        self._received_rows.insert(pos, r)
        prev = self._last_received.get(r.node_id)
        if prev is None or r.received_at > prev:
            self._last_received[r.node_id] = r.received_at

    def _index_alert(self, alert_id: int, a: AlertEvent) -> None:
        key = (a.detected_at, alert_id)
        pos = bisect.bisect_right(self._alert_keys, key)
        self._alert_keys.insert(pos, key)
        self._alerts.insert(pos, a)

    def append_reading(self, r: SensorReading) -> int:
        """Durably append a validated reading; returns its serial number."""
        with self._lock:
            seq = self.next_seq
            self.next_seq += 1
            stored = SensorReading(
                node_id=r.node_id,
                field=r.field,
                value=r.value,
                sampled_at=r.sampled_at,
                received_at=r.received_at,
                seq=seq,
            )
            self._write(READINGS_LOG, _reading_record(stored))
            self._index_reading(stored)
            return seq

    def append_alert(self, a: AlertEvent) -> int:
        with self._lock:
            alert_id = self.next_alert_id
            self.next_alert_id += 1
            self._write(ALERTS_LOG, _alert_record(alert_id, a))
            self._index_alert(alert_id, a)
            return alert_id

    def append_rejection(self, at: Timestamp, source_address: str, reason: Reason) -> None:
        with self._lock:
            self._write(
                REJECTIONS_LOG,
                {"at": at, "source_address": source_address, "reason": reason.value},
            )
            self._rejections.append((at, source_address, reason.value))

    # ------------------------------------------------------------------
    # query side (all intervals half-open: t0 <= t < t1)
    # ------------------------------------------------------------------

    def query_range(
        self, node_id: str, field: FieldName, t0: Timestamp, t1: Timestamp
    ) -> list[SensorReading]:
        """Readings with ``t0 <= sampled_at < t1``, ordered by (sampled_at, seq)."""
        if t0 > t1:
            raise ValueError("t0 must not exceed t1")
        with self._lock:
            keys = self._series_keys.get((node_id, field))
            if not keys:
                return []
            rows = self._series_rows[(node_id, field)]
            lo = bisect.bisect_left(keys, (t0, 0))
            hi = bisect.bisect_left(keys, (t1, 0))
            return rows[lo:hi]

    def count_received(self, t0: Timestamp, t1: Timestamp) -> int:
        """Count of readings with ``t0 <= received_at < t1`` across all nodes."""
        if t0 > t1:
            raise ValueError("t0 must not exceed t1")
        with self._lock:
            lo = bisect.bisect_left(self._received_keys, (t0, 0))
            hi = bisect.bisect_left(self._received_keys, (t1, 0))
            return hi - lo

    def query_received(self, t0: Timestamp, t1: Timestamp) -> list[SensorReading]:
        """Readings with ``t0 <= received_at < t1``, in (received_at, seq) order."""
        if t0 > t1:
            raise ValueError("t0 must not exceed t1")
        with self._lock:
            lo = bisect.bisect_left(self._received_keys, (t0, 0))
            hi = bisect.bisect_left(self._received_keys, (t1, 0))
            return self._received_rows[lo:hi]

    def count_received_buckets(
        self, t0: Timestamp, t1: Timestamp, bucket_ms: int
    ) -> list[int]:
        """Per-bucket receive counts over ``[t0, t1)``; t1 - t0 must divide evenly."""
        if t0 > t1:
            raise ValueError("t0 must not exceed t1")
        n, rem = divmod(t1 - t0, bucket_ms)
        if rem:
            raise ValueError("bucket_ms must evenly divide the interval")
        with self._lock:
            lo = bisect.bisect_left(self._received_keys, (t0, 0))
            hi = bisect.bisect_left(self._received_keys, (t1, 0))
            stamps = [k[0] for k in self._received_keys[lo:hi]]
        if not stamps:
            return [0] * n
        idx = (np.asarray(stamps, dtype=np.int64) - t0) // bucket_ms
        return np.bincount(idx, minlength=n).tolist()

    def last_readings(self, node_id: str, field: FieldName, n: int = 1) -> list[SensorReading]:
        """The last ``n`` readings of a series in (sampled_at, seq) order."""
        with self._lock:
            rows = self._series_rows.get((node_id, field), [])
            return rows[-n:] if n else []

    def latest_reading(self, node_id: str, field: FieldName) -> SensorReading | None:
        rows = self.last_readings(node_id, field, 1)
        return rows[0] if rows else None

    def last_received_at(self, node_id: str) -> Timestamp | None:
        with self._lock:
            return self._last_received.get(node_id)

    def node_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._last_received)

    def total_readings(self) -> int:
        with self._lock:
            return len(self._received_rows)

    def query_alerts(
        self,
        t0: Timestamp = 0,
        t1: Timestamp | None = None,
        kind: AlertKind | None = None,
    ) -> list[AlertEvent]:
        """Alerts with ``t0 <= detected_at < t1``, oldest first."""
        with self._lock:
            lo = bisect.bisect_left(self._alert_keys, (t0, 0))
            hi = (
                len(self._alerts)
                if t1 is None
                else bisect.bisect_left(self._alert_keys, (t1, 0))
            )
            found = self._alerts[lo:hi]
        if kind is not None:
            found = [a for a in found if a.kind is kind]
        return found

    def count_rejections(self, reason: Reason | None = None) -> int:
        with self._lock:
            if reason is None:
                return len(self._rejections)
            return sum(1 for _, _, r in self._rejections if r == reason.value)

    def query_rejections(
        self, t0: Timestamp = 0, t1: Timestamp | None = None
    ) -> list[tuple[Timestamp, str, str]]:
        with self._lock:
            return [
                rec
                for rec in self._rejections
                if rec[0] >= t0 and (t1 is None or rec[0] < t1)
            ]

    # ------------------------------------------------------------------

    def close(self) -> None:
        with self._lock:
            for fh in self._files.values():
                fh.close()
            self._files = {}

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
