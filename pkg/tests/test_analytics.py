"""History buckets, previous-day comparison, week extremes, watering advice."""

import random

import pytest

from agrimon.analytics import (
    DAY_MS,
    HOUR_MS,
    RangeError,
    compare_previous_day,
    history_day,
    query_week,
    watering_advice,
)
from agrimon.core import DetectorConfig, FieldName, SensorReading
from agrimon.store import Store

CFG = DetectorConfig()


def reading(node="n1", field=FieldName.TEMPERATURE, value=20.0, t=0):
    return SensorReading(
        node_id=node, field=field, value=value, sampled_at=t, received_at=t
    )


def brute_force_bucket(rows, node, field, b0, b1):
    values = [
        r.value
        for r in rows
        if r.node_id == node and r.field is field and b0 <= r.sampled_at < b1
    ]
    if not values:
        return None
    return (sum(values) / len(values), min(values), max(values))


def test_history_day_empty_store_is_all_gaps():
    store = Store(None)
    buckets = history_day(store, "n1", FieldName.TEMPERATURE, 0)
    assert len(buckets) == 24
    assert all(b.gap for b in buckets)


def test_history_day_constant_value():
    store = Store(None)
    for minute in range(0, 24 * 60, 10):
        store.append_reading(reading(value=20.0, t=minute * 60_000))
    buckets = history_day(store, "n1", FieldName.TEMPERATURE, 0)
    for b in buckets:
        assert (b.avg, b.vmin, b.vmax) == (20.0, 20.0, 20.0)
        assert not b.gap


def test_history_day_matches_brute_force_oracle():
    rng = random.Random(21)
    store = Store(None)
    rows = []
    for _ in range(2000):
        r = reading(
            node=rng.choice(("n1", "n2")),
            field=rng.choice((FieldName.TEMPERATURE, FieldName.HUMIDITY)),
            value=rng.uniform(0, 40),
            t=rng.randrange(2 * DAY_MS),
        )
        rows.append(r)
        store.append_reading(r)
    for trial in range(100):
        day_start = rng.choice((0, DAY_MS))
        node = rng.choice(("n1", "n2"))
        field = rng.choice((FieldName.TEMPERATURE, FieldName.HUMIDITY))
        buckets = history_day(store, node, field, day_start)
        for k, b in enumerate(buckets):
            b0 = day_start + k * HOUR_MS
            oracle = brute_force_bucket(rows, node, field, b0, b0 + HOUR_MS)
            if oracle is None:
                assert b.gap
            else:
                assert b.avg == pytest.approx(oracle[0], rel=1e-9)
                assert b.vmin == oracle[1]
                assert b.vmax == oracle[2]


def test_each_reading_lands_in_exactly_one_bucket():
    store = Store(None)
    # boundary reading: exactly on an hour edge
    store.append_reading(reading(value=5.0, t=3 * HOUR_MS))
    buckets = history_day(store, "n1", FieldName.TEMPERATURE, 0)
    hits = [k for k, b in enumerate(buckets) if not b.gap]
    assert hits == [3]


def test_compare_identical_days():
    store = Store(None)
    for day in (0, 1):
        for hour in range(24):
            store.append_reading(reading(value=15.0, t=day * DAY_MS + hour * HOUR_MS))
    current, previous = compare_previous_day(
        store, "n1", FieldName.TEMPERATURE, DAY_MS, 6 * HOUR_MS
    )
    assert len(current) == len(previous) == 6
    for c, p in zip(current, previous):
        assert (c.avg, c.vmin, c.vmax) == (p.avg, p.vmin, p.vmax) == (15.0, 15.0, 15.0)
        assert c.start - p.start == DAY_MS


def test_compare_no_data_yesterday():
    store = Store(None)
    store.append_reading(reading(value=10.0, t=DAY_MS + HOUR_MS // 2))
    current, previous = compare_previous_day(
        store, "n1", FieldName.TEMPERATURE, DAY_MS, HOUR_MS
    )
    assert not current[0].gap
    assert all(b.gap for b in previous)


def test_compare_matches_history_slices():
    """Oracle: a compare over hour-aligned periods equals two day slices."""
    rng = random.Random(31)
    store = Store(None)
    for _ in range(3000):
        store.append_reading(reading(value=rng.uniform(0, 40), t=rng.randrange(2 * DAY_MS)))
    for _ in range(50):
        hour = rng.randrange(24)
        length = rng.randrange(1, 25 - hour)
        current, previous = compare_previous_day(
            store,
            "n1",
            FieldName.TEMPERATURE,
            DAY_MS + hour * HOUR_MS,
            length * HOUR_MS,
        )
        today = history_day(store, "n1", FieldName.TEMPERATURE, DAY_MS)
        yesterday = history_day(store, "n1", FieldName.TEMPERATURE, 0)
        assert current == today[hour : hour + length]
        assert previous == yesterday[hour : hour + length]


def test_compare_rejects_overlong_period():
    store = Store(None)
    with pytest.raises(ValueError):
        compare_previous_day(store, "n1", FieldName.TEMPERATURE, 0, DAY_MS + 1)


def test_week_single_reading_on_day_three():
    store = Store(None)
    now = 30 * DAY_MS
    store.append_reading(reading(value=23.5, t=3 * DAY_MS + 5 * HOUR_MS))
    days = query_week(store, "n1", FieldName.TEMPERATURE, 0, now)
    assert len(days) == 7
    assert (days[3].high, days[3].low) == (23.5, 23.5)
    for k in (0, 1, 2, 4, 5, 6):
        assert days[k].gap


def test_week_out_of_year_bound():
    store = Store(None)
    now = 400 * DAY_MS
    with pytest.raises(RangeError):
        query_week(store, "n1", FieldName.TEMPERATURE, 0, now)  # 400 days back
    # exactly one year back is allowed
    query_week(store, "n1", FieldName.TEMPERATURE, now - 365 * DAY_MS, now)


def test_week_start_in_future_rejected():
    store = Store(None)
    with pytest.raises(RangeError):
        query_week(store, "n1", FieldName.TEMPERATURE, DAY_MS, 0)


def test_week_matches_brute_force_oracle():
    rng = random.Random(41)
    store = Store(None)
    rows = []
    for _ in range(1500):
        r = reading(value=rng.uniform(-5, 45), t=rng.randrange(10 * DAY_MS))
        rows.append(r)
        store.append_reading(r)
    now = 20 * DAY_MS
    for _ in range(100):
        week_start = rng.randrange(0, 4 * DAY_MS)
        days = query_week(store, "n1", FieldName.TEMPERATURE, week_start, now)
        for k, d in enumerate(days):
            d0 = week_start + k * DAY_MS
            values = [r.value for r in rows if d0 <= r.sampled_at < d0 + DAY_MS]
            if not values:
                assert d.gap
            else:
                assert d.high == max(values)
                assert d.low == min(values)


def test_watering_advice_low_humidity():
    store = Store(None)
    store.append_reading(reading(field=FieldName.HUMIDITY, value=10.0, t=1000))
    advice = watering_advice(store, "n1", 2000, CFG)
    assert advice is not None and "watering" in advice


def test_watering_advice_comfortable_humidity():
    store = Store(None)
    store.append_reading(reading(field=FieldName.HUMIDITY, value=55.0, t=1000))
    assert watering_advice(store, "n1", 2000, CFG) is None


def test_watering_advice_without_data():
    store = Store(None)
    assert watering_advice(store, "n1", 2000, CFG) is None
