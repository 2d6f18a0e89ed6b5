"""Historical queries: the day line, yesterday's overlay, week extremes,
and the watering advisory.

Two days of simulated readings go into the store; then the analytics layer
answers the dashboard's questions: hourly aggregates for a day, the same
period yesterday for comparison, per-day highs and lows across a week, and
whether the field needs water right now.
"""

import math

from agrimon.analytics import (
    DAY_MS,
    HOUR_MS,
    compare_previous_day,
    history_day,
    query_week,
    watering_advice,
)
from agrimon.core import DetectorConfig, FieldName, SensorReading
from agrimon.store import Store

store = Store(None)

# two days of diurnal temperature swing, one reading per minute,
# humidity sagging through the second afternoon
for minute in range(2 * 24 * 60):
    t = minute * 60_000
    hour_of_day = (minute // 60) % 24
    temp = 16 + 8 * math.sin(2 * math.pi * (minute - 6 * 60) / (24 * 60))
    day = minute // (24 * 60)
    hum = 45.0 - (12.0 if day == 1 and hour_of_day >= 12 else 0) - minute * 0.006
    store.append_reading(SensorReading(
        node_id="n1", field=FieldName.TEMPERATURE, value=round(temp, 2),
        sampled_at=t, received_at=t))
    store.append_reading(SensorReading(
        node_id="n1", field=FieldName.HUMIDITY, value=round(max(hum, 5.0), 2),
        sampled_at=t, received_at=t))

day2 = history_day(store, "n1", FieldName.TEMPERATURE, DAY_MS)
print("hour  avg   min   max   (day 2 temperatures)")
for k, b in enumerate(day2):
    print(f"{k:>4}  {b.avg:5.2f} {b.vmin:5.2f} {b.vmax:5.2f}")

current, previous = compare_previous_day(
    store, "n1", FieldName.HUMIDITY, DAY_MS + 12 * HOUR_MS, 6 * HOUR_MS
)
print("\nafternoon humidity vs the same hours yesterday:")
for c, p in zip(current, previous):
    print(f"  today {c.avg:5.2f}  yesterday {p.avg:5.2f}")

week = query_week(store, "n1", FieldName.TEMPERATURE, 0, now=2 * DAY_MS)
print("\nweek extremes (days without data are gaps):")
for k, d in enumerate(week):
    label = "gap" if d.gap else f"high {d.high:5.2f}  low {d.low:5.2f}"
    print(f"  day {k}: {label}")

advice = watering_advice(store, "n1", 2 * DAY_MS, DetectorConfig())
print(f"\nadvice: {advice or 'nothing to do'}")
