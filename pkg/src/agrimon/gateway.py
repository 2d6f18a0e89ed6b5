"""The virtual IoT server: packet admission, whitelisting, and burst alarms.

Admission runs three filters in a fixed order: source whitelist, payload
grammar, field ranges. Whichever fails first decides the rejection reason,
and nothing that fails any filter ever reaches the store. Admitted readings
get the packet's arrival time as ``received_at`` plus a fresh serial number
from the store.

Format rejections feed a sliding-window counter that raises a
``MalformedBurst`` alert when a storm of bad data arrives; whitelist
rejections are counted separately and raise their own ``UnauthorizedSource``
alert. Both are cooldown-deduplicated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .core import (
    MS,
    AlertEvent,
    AlertKind,
    Clock,
    DetectorConfig,
    RawPacket,
    Reason,
    SensorReading,
    Timestamp,
    ValidationError,
    parse_payload,
    split_claimed_time,
    validate_range,
)
from .store import Store


@dataclass
class Whitelist:
    """The set of sender identities the gateway accepts; exact string match."""

    allowed: set[str] = field(default_factory=set)

    def __contains__(self, address: str) -> bool:
        return address in self.allowed

    def add(self, address: str) -> None:
        self.allowed.add(address)

    def remove(self, address: str) -> None:
        self.allowed.discard(address)

    def as_list(self) -> list[str]:
        return sorted(self.allowed)


@dataclass(frozen=True)
class AdmissionResult:
    """Outcome of one packet: admitted readings or a single rejection reason."""

    readings: tuple[SensorReading, ...] = ()
    reason: Reason | None = None

    @property
    def admitted(self) -> bool:
        return self.reason is None


def admit(
    packet: RawPacket,
    whitelist: Whitelist,
    clock: Clock,
    node_ids: Mapping[str, str] | None = None,
) -> AdmissionResult:
    """Run one packet through the admission filters.

    Order matters: an unauthorized source is rejected before its payload is
    even parsed, and a parse failure is reported before any range failure.
    Readings are returned without serial numbers; the store assigns those.
    Never raises: every failure is expressed in the result.
    """
    if packet.source_address not in whitelist:
        return AdmissionResult(reason=Reason.UNAUTHORIZED_SOURCE)
    try:
        claimed, body = split_claimed_time(packet.payload)
        pairs = parse_payload(body)
        for fname, value in pairs:
            validate_range(fname, value)
    except ValidationError as exc:
        return AdmissionResult(reason=exc.reason)
    received_at = packet.arrived_at if packet.arrived_at else clock.now()
    sampled_at = claimed if claimed is not None else packet.sent_at
    node_id = (node_ids or {}).get(packet.source_address, packet.source_address)
    readings = tuple(
        SensorReading(
            node_id=node_id,
            field=fname,
            value=value,
            sampled_at=sampled_at,
            received_at=received_at,
        )
        for fname, value in pairs
    )
    return AdmissionResult(readings=readings)


class MalformedTracker:
    """Sliding-window counter over format rejections.

    Raises one ``MalformedBurst`` alert when at least ``malformed_burst_count``
    rejections land within any ``malformed_burst_window_s`` span, then stays
    quiet for the cooldown.  Timestamps must be fed in non-decreasing order.
    """

    def __init__(self, cfg: DetectorConfig):
        self._cfg = cfg
        self._window_ms = int(cfg.malformed_burst_window_s * MS)
        self._cooldown_ms = int(cfg.alert_cooldown_s * MS)
        self._times: deque[Timestamp] = deque()
        self._last_alert_at: Timestamp | None = None

    def push(self, at: Timestamp) -> AlertEvent | None:
        self._times.append(at)
        floor = at - self._window_ms
        while self._times and self._times[0] <= floor:
            self._times.popleft()
        if len(self._times) < self._cfg.malformed_burst_count:
            return None
        if (
            self._last_alert_at is not None
            and at - self._last_alert_at < self._cooldown_ms
        ):
            return None
        self._last_alert_at = at
        return AlertEvent(
            kind=AlertKind.MALFORMED_BURST,
            detected_at=at,
            window_start=at - self._window_ms,
            window_end=at,
            evidence=(
                f"{len(self._times)} format rejections within "
                f"{self._cfg.malformed_burst_window_s:g}s"
            ),
            value=float(len(self._times)),
        )


def track_malformed(
    rejections: Iterable[tuple[Timestamp, Reason]], cfg: DetectorConfig
) -> list[AlertEvent]:
    """Replay a rejection stream through a fresh tracker; format ones count."""
    tracker = MalformedTracker(cfg)
    alerts = []
    for at, reason in rejections:
        if reason is Reason.UNAUTHORIZED_SOURCE:
            continue
        alert = tracker.push(at)
        if alert is not None:
            alerts.append(alert)
    return alerts


class Gateway:
    """Single consumer of the packet stream; feed it from one thread at a time."""

    def __init__(
        self,
        store: Store,
        whitelist: Whitelist,
        clock: Clock,
        cfg: DetectorConfig | None = None,
        node_ids: Mapping[str, str] | None = None,
    ):
        self.store = store
        self.whitelist = whitelist
        self.clock = clock
        self.cfg = cfg or DetectorConfig()
        self.node_ids = dict(node_ids or {})
        self.unauthorized_total = 0
        self.rejected_total = 0
        self.admitted_packets = 0
        self._malformed = MalformedTracker(self.cfg)
        self._unauth_last_alert: dict[str, Timestamp] = {}

    def ingest(self, packet: RawPacket) -> AdmissionResult:
        """Stamp arrival, admit or reject, persist, and raise gateway alerts."""
        if not packet.arrived_at:
            packet = replace(packet, arrived_at=self.clock.now())
        result = admit(packet, self.whitelist, self.clock, self.node_ids)
        if result.admitted:
            stored = tuple(
                replace(r, seq=self.store.append_reading(r)) for r in result.readings
            )
            self.admitted_packets += 1
            return AdmissionResult(readings=stored)

        at = packet.arrived_at
        self.rejected_total += 1
        self.store.append_rejection(at, packet.source_address, result.reason)
        if result.reason is Reason.UNAUTHORIZED_SOURCE:
            self.unauthorized_total += 1
            alert = self._unauthorized_alert(at, packet.source_address)
        else:
            alert = self._malformed.push(at)
        if alert is not None:
            self.store.append_alert(alert)
        return result

    def _unauthorized_alert(self, at: Timestamp, source: str) -> AlertEvent | None:
        cooldown_ms = int(self.cfg.alert_cooldown_s * MS)
        last = self._unauth_last_alert.get(source)
        if last is not None and at - last < cooldown_ms:
            return None
        self._unauth_last_alert[source] = at
        return AlertEvent(
            kind=AlertKind.UNAUTHORIZED_SOURCE,
            detected_at=at,
            node_id=source,
            evidence=f"packet from non-whitelisted source {source!r}",
        )
