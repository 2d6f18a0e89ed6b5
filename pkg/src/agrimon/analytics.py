"""Historical queries and comparison series behind the dashboard, plus the
watering advisory.

All bucketing uses half-open intervals keyed on sample time, so every
reading lands in exactly one bucket and adjacent queries never double-count.
Empty buckets are kept in the series as explicit gaps rather than zeros: a
gap means "no data", which the dashboard draws as a break in the line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MS, DetectorConfig, FieldName, Timestamp
from .store import Store

HOUR_MS = 3600 * MS
DAY_MS = 24 * HOUR_MS
YEAR_MS = 365 * DAY_MS


class RangeError(ValueError):
    """A history query outside the supported one-year bound."""


@dataclass(frozen=True)
class Bucket:
    """Aggregate of one time bucket; ``avg``/``vmin``/``vmax`` are None for gaps."""

    start: Timestamp
    end: Timestamp
    avg: float | None
    vmin: float | None
    vmax: float | None

    @property
    def gap(self) -> bool:
        return self.avg is None


@dataclass(frozen=True)
class DayExtreme:
    """Highest and lowest value of one day; None marks a day without data."""

    day_start: Timestamp
    high: float | None
    low: float | None

    @property
    def gap(self) -> bool:
        return self.high is None


def bucket_series(
    store: Store,
    node_id: str,
    field: FieldName,
    start: Timestamp,
    bucket_ms: int,
    count: int,
    end: Timestamp | None = None,
) -> list[Bucket]:
    """Aggregate ``count`` consecutive buckets of ``bucket_ms`` from ``start``.

    The final bucket is clipped at ``end`` when given (for periods that are
    not a whole number of buckets).
    """
    buckets = []
    for k in range(count):
        b0 = start + k * bucket_ms
        b1 = b0 + bucket_ms
        if end is not None:
            b1 = min(b1, end)
        rows = store.query_range(node_id, field, b0, b1)
        if rows:
            values = np.array([r.value for r in rows])
            buckets.append(
                Bucket(
                    start=b0,
                    end=b1,
                    avg=float(values.mean()),
                    vmin=float(values.min()),
                    vmax=float(values.max()),
                )
            )
        else:
            buckets.append(Bucket(start=b0, end=b1, avg=None, vmin=None, vmax=None))
    return buckets


def history_day(
    store: Store, node_id: str, field: FieldName, day_start: Timestamp
) -> list[Bucket]:
    """24 hourly buckets over ``[day_start, day_start + 24h)``."""
    return bucket_series(store, node_id, field, day_start, HOUR_MS, 24)


def compare_previous_day(
    store: Store,
    node_id: str,
    field: FieldName,
    period_start: Timestamp,
    period_len_ms: int,
) -> tuple[list[Bucket], list[Bucket]]:
    """Hourly series for a period and for the same period the day before."""
    if period_len_ms <= 0 or period_len_ms > DAY_MS:
        raise ValueError("period length must be positive and at most 24h")
    count = -(-period_len_ms // HOUR_MS)  # ceil
    current = bucket_series(
        store, node_id, field, period_start, HOUR_MS, count, end=period_start + period_len_ms
    )
    prev_start = period_start - DAY_MS
    previous = bucket_series(
        store, node_id, field, prev_start, HOUR_MS, count, end=prev_start + period_len_ms
    )
    return current, previous


def query_week(
    store: Store,
    node_id: str,
    field: FieldName,
    week_start: Timestamp,
    now: Timestamp,
) -> list[DayExtreme]:
    """Per-day (high, low) pairs for the 7 days from ``week_start``.

    Queries are supported at most one year back from ``now``.
    """
    if week_start < now - YEAR_MS:
        raise RangeError("week queries reach back at most one year")
    if week_start > now:
        raise RangeError("week_start is in the future")
    days = []
    for k in range(7):
        d0 = week_start + k * DAY_MS
        rows = store.query_range(node_id, field, d0, d0 + DAY_MS)
        if rows:
            values = np.array([r.value for r in rows])
            days.append(
                DayExtreme(day_start=d0, high=float(values.max()), low=float(values.min()))
            )
        else:
            days.append(DayExtreme(day_start=d0, high=None, low=None))
    return days


def watering_advice(
    store: Store, node_id: str, now: Timestamp, cfg: DetectorConfig
) -> str | None:
    """Advise watering when the latest humidity reading is below the low
    bound; no humidity data means no advice. Advisories are served through
    the API, never persisted as alerts."""
    latest = store.latest_reading(node_id, FieldName.HUMIDITY)
    if latest is None:
        return None
    if latest.value < cfg.hum_min:
        return (
            f"humidity at {node_id} is {latest.value:g} %RH "
            f"(below {cfg.hum_min:g} %RH): watering recommended"
        )
    return None
