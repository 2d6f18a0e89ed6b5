"""The detection engine: sliding-window volume analysis plus the stale,
delay, GPS-displacement, and extreme-value rules.

The volume statistic compares the number of readings received in the most
recent window against the window before it:

    rate_of_change = (recent_count - prior_count) / prior_count

computed over consecutive half-open windows ``[now-w, now)`` and
``[now-2w, now-w)`` keyed on *receive* time (a forged sample time must never
hide a flood). A rise of at least ``rise_threshold`` means a flood of data
is arriving; a fall of at least ``drop_threshold`` means traffic is being
dropped somewhere (selective forwarding, black hole, sinkhole, misdirection
all look identical from here). Inside the open dead band between the two
thresholds nothing fires, which is what keeps ordinary fluctuation from
paging anyone. When the prior window is empty the rate is undefined and
volume alerts are suppressed; the stale rule covers silent-from-start nodes.

:class:`Detector` composes every rule on a periodic schedule and deduplicates
alerts per (kind, node) within a cooldown, persisting whatever survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    MS,
    AlertEvent,
    AlertKind,
    DetectorConfig,
    FieldName,
    SensorReading,
    Timestamp,
)
from .store import Store

EARTH_RADIUS_M = 6_371_000.0


@dataclass(frozen=True)
class WindowStats:
    """Receive-volume counts for the two comparison windows plus the trend.

    ``trend`` holds one bucket per second over ``[now - history, now)``,
    oldest first; ``rate_of_change`` is None when the prior window is empty.
    """

    now: Timestamp
    recent_count: int
    prior_count: int
    rate_of_change: float | None
    trend: tuple[int, ...]


@dataclass(frozen=True)
class GpsFix:
    node_id: str
    lat: float
    lon: float
    at: Timestamp


def window_stats(store: Store, now: Timestamp, cfg: DetectorConfig) -> WindowStats:
    """Compute the volume statistic at ``now`` from the store's receive log."""
    w = cfg.window_ms
    recent = store.count_received(now - w, now)
    prior = store.count_received(now - 2 * w, now - w)
    rate = (recent - prior) / prior if prior > 0 else None
    start = now - cfg.history_s * MS
    trend = tuple(store.count_received_buckets(start, now, MS))
    return WindowStats(
        now=now, recent_count=recent, prior_count=prior, rate_of_change=rate, trend=trend
    )


def check_volume(stats: WindowStats, cfg: DetectorConfig) -> AlertEvent | None:
    """Fire on a rise of at least the rise threshold or a drop of at least
    the drop threshold; stay silent inside the dead band or when the rate is
    undefined."""
    rate = stats.rate_of_change
    if rate is None:
        return None
    if rate >= cfg.rise_threshold:
        kind = AlertKind.FLOODING_SUSPECTED
        trendword = "rose"
    elif rate <= -cfg.drop_threshold:
        kind = AlertKind.DATA_LOSS_SUSPECTED
        trendword = "dropped"
    else:
        return None
    return AlertEvent(
        kind=kind,
        detected_at=stats.now,
        window_start=stats.now - cfg.window_ms,
        window_end=stats.now,
        evidence=(
            f"receive volume {trendword} {abs(rate):.1%} "
            f"({stats.prior_count} -> {stats.recent_count} readings per {cfg.window_s}s)"
        ),
        value=rate,
    )


def check_stale(
    store: Store,
    node_id: str,
    now: Timestamp,
    cfg: DetectorConfig,
    since: Timestamp | None = None,
) -> AlertEvent | None:
    """No update from a node for longer than the stale timeout.

    A node that has never reported gets a grace period of one timeout from
    ``since`` (the service start) before it counts as stale.
    """
    timeout_ms = int(cfg.stale_timeout_s * MS)
    last = store.last_received_at(node_id)
    if last is None:
        if since is None or now - since <= timeout_ms:
            return None
        return AlertEvent(
            kind=AlertKind.STALE_DATA,
            detected_at=now,
            node_id=node_id,
            evidence=f"node {node_id!r} has never reported",
        )
    age_ms = now - last
    if age_ms <= timeout_ms:
        return None
    return AlertEvent(
        kind=AlertKind.STALE_DATA,
        detected_at=now,
        node_id=node_id,
        evidence=f"no data from {node_id!r} for {age_ms / MS:.0f}s",
        value=age_ms / MS,
    )


def check_delay(store: Store, now: Timestamp, cfg: DetectorConfig) -> AlertEvent | None:
    """A batch of readings whose receive time trails their claimed sample
    time by too much: the delayed-traffic (wormhole) signal."""
    window_start = now - cfg.window_ms
    threshold_ms = int(cfg.delay_threshold_s * MS)
    delayed = [
        r
        for r in store.query_received(window_start, now)
        if r.received_at - r.sampled_at > threshold_ms
    ]
    if len(delayed) < cfg.delay_min_count:
        return None
    worst = max(r.received_at - r.sampled_at for r in delayed)
    return AlertEvent(
        kind=AlertKind.DATA_DELAY,
        detected_at=now,
        window_start=window_start,
        window_end=now,
        evidence=(
            f"{len(delayed)} readings delayed more than "
            f"{cfg.delay_threshold_s:g}s (worst {worst / MS:.0f}s)"
        ),
        value=float(len(delayed)),
    )


def haversine_m(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in meters between (lat, lon) points in degrees."""
    lat1, lon1 = map(math.radians, a)
    lat2, lon2 = map(math.radians, b)
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def check_gps(
    previous: GpsFix, current: GpsFix, cfg: DetectorConfig
) -> AlertEvent | None:
    """Displacement between consecutive fixes beyond the threshold means the
    node moved (or someone forged its position)."""
    distance = haversine_m((previous.lat, previous.lon), (current.lat, current.lon))
    if distance <= cfg.gps_displacement_m:
        return None
    return AlertEvent(
        kind=AlertKind.GPS_TAMPER,
        detected_at=current.at,
        node_id=current.node_id,
        window_start=previous.at,
        window_end=current.at,
        evidence=(
            f"{current.node_id!r} moved {distance:.0f} m between fixes "
            f"(threshold {cfg.gps_displacement_m:g} m)"
        ),
        value=distance,
    )


def check_extremes(r: SensorReading, cfg: DetectorConfig) -> AlertEvent | None:
    """Out-of-comfort-range temperature or humidity on an admitted reading."""
    if r.field is FieldName.TEMPERATURE:
        if r.value > cfg.temp_max or r.value < cfg.temp_min:
            bound = cfg.temp_max if r.value > cfg.temp_max else cfg.temp_min
            return AlertEvent(
                kind=AlertKind.EXTREME_TEMPERATURE,
                detected_at=r.received_at,
                node_id=r.node_id,
                evidence=f"temperature {r.value:g} C beyond preset {bound:g} C",
                value=r.value,
            )
    elif r.field is FieldName.HUMIDITY:
        if r.value > cfg.hum_max or r.value < cfg.hum_min:
            bound = cfg.hum_max if r.value > cfg.hum_max else cfg.hum_min
            return AlertEvent(
                kind=AlertKind.EXTREME_HUMIDITY,
                detected_at=r.received_at,
                node_id=r.node_id,
                evidence=f"humidity {r.value:g} %RH beyond preset {bound:g} %RH",
                value=r.value,
            )
    return None


def gps_fixes(store: Store, node_id: str, last_n: int = 8) -> list[GpsFix]:
    """Pair the node's most recent latitude/longitude readings into fixes.

    Latitude and longitude arrive in one packet, so a fix is a lat/lon pair
    sharing (sampled_at, received_at). Unmatched halves are ignored.
    """
    lats = store.last_readings(node_id, FieldName.LATITUDE, last_n)
    lons = store.last_readings(node_id, FieldName.LONGITUDE, last_n)
    by_stamp = {(r.sampled_at, r.received_at): r for r in lons}
    fixes = []
    for lat in lats:
        lon = by_stamp.get((lat.sampled_at, lat.received_at))
        if lon is not None:
            fixes.append(
                GpsFix(node_id=node_id, lat=lat.value, lon=lon.value, at=lat.received_at)
            )
    fixes.sort(key=lambda f: f.at)
    return fixes


def latest_fix(store: Store, node_id: str) -> GpsFix | None:
    fixes = gps_fixes(store, node_id, last_n=2)
    return fixes[-1] if fixes else None


class Detector:
    """Runs every rule on a schedule and persists deduplicated alerts.

    One evaluation at a time; reads store snapshots, so it is safe to run
    next to ingestion under the store's single-writer contract. On
    construction the cooldown state is reseeded from recently persisted
    alerts, so a restart does not re-page for the same incident.
    """

    def __init__(
        self,
        store: Store,
        cfg: DetectorConfig | None = None,
        expected_nodes: tuple[str, ...] = (),
        started_at: Timestamp = 0,
    ):
        self.store = store
        self.cfg = cfg or DetectorConfig()
        self.expected_nodes = tuple(expected_nodes)
        self.started_at = started_at
        self._cooldown_ms = int(self.cfg.alert_cooldown_s * MS)
        self._last_alert: dict[tuple[AlertKind, str | None], Timestamp] = {}
        self._extremes_cursor: Timestamp = started_at
        for alert in store.query_alerts():
            key = (alert.kind, alert.node_id)
            if alert.detected_at >= self._last_alert.get(key, -1):
                self._last_alert[key] = alert.detected_at

    def evaluate(self, now: Timestamp) -> list[AlertEvent]:
        """Run all checks at ``now``; persist and return only new alerts."""
        cfg = self.cfg
        candidates: list[AlertEvent] = []

        # The rate compares two equal windows; until both lie fully inside
        # the observed run the statistic is as meaningless as prior_count=0,
        # and an honest cold start would page within the first minute.
        if now - self.started_at >= 2 * cfg.window_ms:
            stats = window_stats(self.store, now, cfg)
            volume = check_volume(stats, cfg)
            if volume is not None:
                candidates.append(volume)

        delay = check_delay(self.store, now, cfg)
        if delay is not None:
            candidates.append(delay)

        nodes = sorted(set(self.expected_nodes) | set(self.store.node_ids()))
        for node_id in nodes:
            stale = check_stale(self.store, node_id, now, cfg, since=self.started_at)
            if stale is not None:
                candidates.append(stale)
            fixes = gps_fixes(self.store, node_id, last_n=4)
            if len(fixes) >= 2:
                tamper = check_gps(fixes[-2], fixes[-1], cfg)
                if tamper is not None:
                    candidates.append(tamper)

        for r in self.store.query_received(self._extremes_cursor, now + 1):
            extreme = check_extremes(r, cfg)
            if extreme is not None:
                candidates.append(extreme)
        self._extremes_cursor = now + 1

        fresh = []
        for alert in candidates:
            key = (alert.kind, alert.node_id)
            last = self._last_alert.get(key)
            if last is not None and alert.detected_at - last < self._cooldown_ms:
                continue
            self._last_alert[key] = alert.detected_at
            self.store.append_alert(alert)
            fresh.append(alert)
        return fresh
