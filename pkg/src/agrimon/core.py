"""Domain types, the wire payload grammar, and the simulated clock.

Every other module shares the types defined here. Timestamps are integer
milliseconds since the epoch so window arithmetic stays exact, and all the
value types are frozen dataclasses that can be passed between threads freely.

The wire payload is the bit-exact contract between the node simulator and the
gateway: one ``name: value`` line per measurement (LF or CRLF), names matched
case-insensitively against the closed field set, values in plain decimal
notation (optional sign and fraction, no exponent). A payload may carry one
reserved ``sampled_at: <millis>`` metadata line with the sender's claimed
sample time; delay attacks forge it backwards.
"""

from __future__ import annotations

import enum
import math
import re
import time
from dataclasses import dataclass, fields

import numpy as np

MS = 1000  # milliseconds per second

# Milliseconds since epoch. Non-negative; differences are durations in ms.
Timestamp = int


class FieldName(enum.Enum):
    """Closed set of measurement fields a node may report."""

    TEMPERATURE = "Temperature"
    HUMIDITY = "Humidity"
    LATITUDE = "Latitude"
    LONGITUDE = "Longitude"


# Plausible physical bounds; values outside are "meaningless content" and
# never reach the store.  Temperature in Celsius, humidity in %RH,
# coordinates in degrees.
FIELD_RANGES: dict[FieldName, tuple[float, float]] = {
    FieldName.TEMPERATURE: (-50.0, 80.0),
    FieldName.HUMIDITY: (0.0, 100.0),
    FieldName.LATITUDE: (-90.0, 90.0),
    FieldName.LONGITUDE: (-180.0, 180.0),
}

_NAME_TO_FIELD = {f.value.lower(): f for f in FieldName}

# Reserved metadata line name: claimed sample time in integer milliseconds.
SAMPLED_AT_KEY = "sampled_at"

# Plain decimal: optional sign, digits with optional fraction. No exponent.
_VALUE_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)\Z")
_INT_RE = re.compile(r"\d+\Z")


class Reason(enum.Enum):
    """Why a payload or packet was turned away."""

    EMPTY = "Empty"
    MALFORMED = "Malformed"
    UNKNOWN_FIELD = "UnknownField"
    NON_NUMERIC = "NonNumeric"
    OUT_OF_RANGE = "OutOfRange"
    UNAUTHORIZED_SOURCE = "UnauthorizedSource"


class ValidationError(Exception):
    """A payload failed the wire grammar or a field range check."""

    def __init__(self, reason: Reason, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason.value}: {detail}" if detail else reason.value)


class AlertKind(enum.Enum):
    FLOODING_SUSPECTED = "FloodingSuspected"
    DATA_LOSS_SUSPECTED = "DataLossSuspected"
    STALE_DATA = "StaleData"
    DATA_DELAY = "DataDelay"
    GPS_TAMPER = "GpsTamper"
    MALFORMED_BURST = "MalformedBurst"
    UNAUTHORIZED_SOURCE = "UnauthorizedSource"
    EXTREME_TEMPERATURE = "ExtremeTemperature"
    EXTREME_HUMIDITY = "ExtremeHumidity"


@dataclass(frozen=True)
class RawPacket:
    """An unvalidated transmission from a (possibly malicious) source.

    ``sent_at`` is whatever the sender claims; ``arrived_at`` is assigned by
    the receiver at ingestion. The payload is arbitrary text and no validity
    is assumed.
    """

    source_address: str
    payload: str
    sent_at: Timestamp
    arrived_at: Timestamp = 0


@dataclass(frozen=True)
class SensorReading:
    """One validated measurement, as persisted by the store.

    ``seq`` is the store-assigned serial number (0 until assigned).
    ``sampled_at`` may exceed or trail ``received_at``: delay attacks forge
    the claimed sample time, which is exactly the signal the delay rule uses.
    """

    node_id: str
    field: FieldName
    value: float
    sampled_at: Timestamp
    received_at: Timestamp
    seq: int = 0


@dataclass(frozen=True)
class AlertEvent:
    """A detection outcome with evidence.

    ``node_id`` is None for system-wide signals (volume, delay, malformed
    bursts). ``value`` carries the number that tripped the rule, when there
    is one (rate of change, displacement in meters, extreme reading).
    """

    kind: AlertKind
    detected_at: Timestamp
    node_id: str | None = None
    window_start: Timestamp | None = None
    window_end: Timestamp | None = None
    evidence: str = ""
    value: float | None = None


@dataclass(frozen=True)
class DetectorConfig:
    """Thresholds for every detection rule. All durations in seconds."""

    window_s: int = 40
    history_s: int = 160
    rise_threshold: float = 0.10
    drop_threshold: float = 0.04
    stale_timeout_s: float = 60.0
    delay_threshold_s: float = 30.0
    delay_min_count: int = 5
    gps_interval_s: float = 20.0
    gps_displacement_m: float = 50.0
    temp_max: float = 40.0
    temp_min: float = 0.0
    hum_max: float = 95.0
    hum_min: float = 20.0
    malformed_burst_count: int = 50
    malformed_burst_window_s: float = 10.0
    alert_cooldown_s: float = 30.0

    def __post_init__(self):
        durations = {
            "window_s": self.window_s,
            "history_s": self.history_s,
            "stale_timeout_s": self.stale_timeout_s,
            "delay_threshold_s": self.delay_threshold_s,
            "gps_interval_s": self.gps_interval_s,
            "malformed_burst_window_s": self.malformed_burst_window_s,
            "alert_cooldown_s": self.alert_cooldown_s,
        }
        for name, value in durations.items():
            if value <= 0:
                raise ValueError(f"{name} must be > 0, got {value}")
        if self.rise_threshold <= 0 or self.drop_threshold <= 0:
            raise ValueError("rise_threshold and drop_threshold must be > 0")
        if self.history_s < 2 * self.window_s:
            raise ValueError("history_s must be at least twice window_s")
        if self.delay_min_count < 1 or self.malformed_burst_count < 1:
            raise ValueError("count thresholds must be at least 1")
        if self.temp_min >= self.temp_max:
            raise ValueError("temp_min must be below temp_max")
        if self.hum_min >= self.hum_max:
            raise ValueError("hum_min must be below hum_max")
        if self.gps_displacement_m <= 0:
            raise ValueError("gps_displacement_m must be > 0")

    @property
    def window_ms(self) -> int:
        return self.window_s * MS

    @classmethod
    def from_mapping(cls, mapping) -> "DetectorConfig":
        """Build a config from a parsed file section; unknown keys fail loud."""
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ValueError(f"unknown detector settings: {sorted(unknown)}")
        return cls(**mapping)


class SimClock:
    """Deterministic clock: advances only via explicit ticks.

    Two simulated clocks fed the same tick schedule report identical times,
    which is what makes whole runs reproducible under a fixed seed.
    """

    mode = "simulated"

    def __init__(self, start: Timestamp = 0):
        if start < 0:
            raise ValueError("clock cannot start before the epoch")
        self._now = int(start)

    def now(self) -> Timestamp:
        return self._now

    def tick(self, millis: int = MS) -> Timestamp:
        if millis < 0:
            raise ValueError("clock cannot run backwards")
        self._now += millis
        return self._now

    def advance_to(self, t: Timestamp) -> Timestamp:
        if t < self._now:
            raise ValueError("clock cannot run backwards")
        self._now = int(t)
        return self._now


class WallClock:
    mode = "wall"

    def now(self) -> Timestamp:
        return int(time.time() * MS)


Clock = SimClock | WallClock


def parse_payload(payload: str) -> list[tuple[FieldName, float]]:
    """Parse a wire payload into ``(field, value)`` pairs, in payload order.

    Total over arbitrary text: either returns the parsed pairs or raises
    :class:`ValidationError` with a reason code. Nothing else escapes.
    """
    if not payload or not payload.strip():
        raise ValidationError(Reason.EMPTY, "payload has no content")
    pairs: list[tuple[FieldName, float]] = []
    for line in payload.splitlines():
        name, sep, raw = line.partition(":")
        if not sep:
            raise ValidationError(Reason.MALFORMED, f"no ':' in line {line!r}")
        field = _NAME_TO_FIELD.get(name.strip().lower())
        if field is None:
            raise ValidationError(Reason.UNKNOWN_FIELD, f"unknown field {name.strip()!r}")
        raw = raw.strip()
        if not raw:
            raise ValidationError(Reason.EMPTY, f"no value for {field.value}")
        if not _VALUE_RE.match(raw):
            raise ValidationError(Reason.NON_NUMERIC, f"bad value {raw!r}")
        value = float(raw)
        if not math.isfinite(value):  # enough digits overflow float to inf
            raise ValidationError(Reason.NON_NUMERIC, f"value {raw!r} out of float range")
        pairs.append((field, value))
    return pairs


def split_claimed_time(payload: str) -> tuple[Timestamp | None, str]:
    """Strip the reserved ``sampled_at`` metadata line from a payload.

    Returns ``(claimed_millis, remaining_payload)``. When several such lines
    are present the last one wins. A malformed claimed time is a grammar
    violation and raises :class:`ValidationError`.
    """
    if not payload:
        return None, payload
    claimed: Timestamp | None = None
    kept: list[str] = []
    for line in payload.splitlines():
        name, sep, raw = line.partition(":")
        if sep and name.strip().lower() == SAMPLED_AT_KEY:
            raw = raw.strip()
            if not _INT_RE.match(raw):
                raise ValidationError(
                    Reason.NON_NUMERIC, f"claimed sample time {raw!r} is not integer millis"
                )
            claimed = int(raw)
            continue
        kept.append(line)
    return claimed, "\n".join(kept)


def format_value(value: float) -> str:
    """Render a finite value in the grammar's positional decimal notation.

    Shortest digit string that round-trips to the same float; never uses
    exponent notation, which the grammar forbids.
    """
    return np.format_float_positional(value, unique=True, trim="0")


def format_payload(
    pairs: list[tuple[FieldName, float]], sampled_at: Timestamp | None = None
) -> str:
    """Serialize pairs into the wire line format (inverse of parse_payload)."""
    lines = []
    if sampled_at is not None:
        lines.append(f"{SAMPLED_AT_KEY}: {int(sampled_at)}")
    lines.extend(f"{field.value.lower()}: {format_value(value)}" for field, value in pairs)
    return "\n".join(lines)


def validate_range(field: FieldName, value: float) -> None:
    """Reject values outside the field's physical bounds (inclusive)."""
    lo, hi = FIELD_RANGES[field]
    if not (lo <= value <= hi):
        raise ValidationError(
            Reason.OUT_OF_RANGE, f"{field.value}={format_value(value)} outside [{lo}, {hi}]"
        )
