"""Deterministic simulated sensor nodes and the wireless-attack injector.

A :class:`SensorNode` emits one temperature/humidity packet per sample period
and one latitude/longitude packet per GPS period, with bounded value jitter
drawn from its own seeded generator: the same seed always produces a
byte-identical packet sequence.

:func:`apply_attacks` transforms a packet stream the way a compromised relay
would, per scenario kind:

* ``Flooding`` replicates each packet and appends malformed broadcasts;
* ``SelectiveForwarding`` drops each packet with a given probability;
* ``BlackHole`` drops everything;
* ``Sinkhole`` and ``Misdirection`` also deliver nothing to the gateway —
  their mechanisms differ, but from the receiving side both look like total
  loss, which is exactly how the stale-data rule treats them;
* ``DelaySkew`` rewrites each payload's claimed sample time backwards while
  delivery continues (the delayed-traffic signal);
* ``GpsTamper`` shifts GPS coordinates;
* ``MalformedStorm`` replaces a fraction of payloads with garbage;
* ``UnauthorizedSender`` rewrites the source address to a rogue identity.

Scenario files are TOML: one table per scenario, keys mirroring
:class:`AttackScenario` fields with params inlined.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .core import (
    MS,
    Clock,
    FieldName,
    RawPacket,
    Timestamp,
    ValidationError,
    format_payload,
    parse_payload,
    split_claimed_time,
)

ROGUE_PREFIX = "rogue-"

# Deliberately broken payloads: no colon, unknown field, non-numeric value,
# empty content. All of them must fail the gateway's format filter.
GARBAGE_PAYLOADS = (
    "",
    "   ",
    "temperature 23.5",
    "voltage: 3.3",
    "temperature: twenty",
    "humidity:",
    "!!broadcast!!",
    "temperature: 1e99e",
)


class AttackKind(enum.Enum):
    FLOODING = "Flooding"
    SELECTIVE_FORWARDING = "SelectiveForwarding"
    BLACK_HOLE = "BlackHole"
    SINKHOLE = "Sinkhole"
    MISDIRECTION = "Misdirection"
    DELAY_SKEW = "DelaySkew"
    GPS_TAMPER = "GpsTamper"
    MALFORMED_STORM = "MalformedStorm"
    UNAUTHORIZED_SENDER = "UnauthorizedSender"


DROP_ALL_KINDS = frozenset(
    {AttackKind.BLACK_HOLE, AttackKind.SINKHOLE, AttackKind.MISDIRECTION}
)

PARAM_KEYS = frozenset(
    {
        "flood_multiplier",
        "drop_probability",
        "delay_skew_s",
        "lat_jump",
        "lon_jump",
        "malformed_fraction",
    }
)


@dataclass(frozen=True)
class NodeProfile:
    """Static description of one simulated node."""

    node_id: str
    source_address: str
    sample_period_s: float = 1.0
    gps_period_s: float = 20.0
    base_temp: float = 22.0
    base_hum: float = 55.0
    base_lat: float = -34.9285
    base_lon: float = 138.6007
    jitter_amplitude: float = 0.5
    rng_seed: int = 0

    def __post_init__(self):
        if self.sample_period_s <= 0 or self.gps_period_s <= 0:
            raise ValueError("periods must be > 0")
        if self.jitter_amplitude < 0:
            raise ValueError("jitter_amplitude must be >= 0")


@dataclass(frozen=True)
class AttackScenario:
    """A timed transformation of the packet stream.

    Active over the half-open interval ``[start_at, end_at)``; outside it the
    stream passes through untouched.
    """

    kind: AttackKind
    start_at: Timestamp
    end_at: Timestamp
    params: Mapping[str, float] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.start_at >= self.end_at:
            raise ValueError("start_at must precede end_at")
        unknown = set(self.params) - PARAM_KEYS
        if unknown:
            raise ValueError(f"unknown attack params: {sorted(unknown)}")
        p = self.params.get("drop_probability")
        if p is not None and not (0.0 <= p <= 1.0):
            raise ValueError("drop_probability must be in [0, 1]")
        m = self.params.get("flood_multiplier")
        if m is not None and m < 1:
            raise ValueError("flood_multiplier must be >= 1")
        f = self.params.get("malformed_fraction")
        if f is not None and not (0.0 <= f <= 1.0):
            raise ValueError("malformed_fraction must be in [0, 1]")

    def active_at(self, t: Timestamp) -> bool:
        return self.start_at <= t < self.end_at


class SensorNode:
    """Emits the wire payload on the profile's schedule.

    ``emit`` returns every packet due at or before the clock's current time,
    so the driving loop may tick at any granularity. Temperature/humidity
    share one packet; GPS coordinates go in their own packet with a much
    smaller wobble (real fixes drift by meters, not degrees).
    """

    def __init__(self, profile: NodeProfile):
        self.profile = profile
        self._rng = random.Random(profile.rng_seed)
        self._next_sample: Timestamp = 0
        self._next_gps: Timestamp = 0

    def emit(self, clock: Clock) -> list[RawPacket]:
        now = clock.now()
        p = self.profile
        out: list[RawPacket] = []
        while self._next_sample <= now:
            t = self._next_sample
            jitter = p.jitter_amplitude
            temp = p.base_temp + self._rng.uniform(-jitter, jitter)
            hum = p.base_hum + self._rng.uniform(-jitter, jitter)
            out.append(
                RawPacket(
                    source_address=p.source_address,
                    payload=format_payload(
                        [(FieldName.TEMPERATURE, temp), (FieldName.HUMIDITY, hum)]
                    ),
                    sent_at=t,
                )
            )
            if self._next_gps <= t:
                wobble = p.jitter_amplitude * 1e-5  # ~1 m per unit amplitude
                lat = p.base_lat + self._rng.uniform(-wobble, wobble)
                lon = p.base_lon + self._rng.uniform(-wobble, wobble)
                out.append(
                    RawPacket(
                        source_address=p.source_address,
                        payload=format_payload(
                            [(FieldName.LATITUDE, lat), (FieldName.LONGITUDE, lon)]
                        ),
                        sent_at=t,
                    )
                )
                self._next_gps = t + int(p.gps_period_s * MS)
            self._next_sample = t + int(p.sample_period_s * MS)
        return out


def _skew_claimed_time(packet: RawPacket, skew_ms: int) -> RawPacket:
    claimed, body = split_claimed_time(packet.payload)
    base = claimed if claimed is not None else packet.sent_at
    forged = max(0, base - skew_ms)
    lines = [f"sampled_at: {forged}"]
    if body:
        lines.append(body)
    return replace(packet, payload="\n".join(lines))


def _shift_gps(packet: RawPacket, lat_jump: float, lon_jump: float) -> RawPacket:
    try:
        claimed, body = split_claimed_time(packet.payload)
        pairs = parse_payload(body)
    except ValidationError:
        return packet  # not a well-formed payload; nothing to shift
    if not any(f in (FieldName.LATITUDE, FieldName.LONGITUDE) for f, _ in pairs):
        return packet
    shifted = []
    for f, v in pairs:
        if f is FieldName.LATITUDE:
            v += lat_jump
        elif f is FieldName.LONGITUDE:
            v += lon_jump
        shifted.append((f, v))
    return replace(packet, payload=format_payload(shifted, sampled_at=claimed))


def apply_attacks(
    packets: list[RawPacket],
    scenarios: list[AttackScenario],
    clock: Clock,
    rng: random.Random,
) -> list[RawPacket]:
    """Run a packet stream through every scenario active at its send time.

    Drop kinds win over mutations; flooding replication happens last so the
    replicas carry any mutation already applied. Packets outside all attack
    windows pass through unchanged (identity).
    """
    out: list[RawPacket] = []
    for packet in packets:
        active = [s for s in scenarios if s.active_at(packet.sent_at)]
        if not active:
            out.append(packet)
            continue
        kinds = {s.kind for s in active}

        if kinds & DROP_ALL_KINDS:
            continue
        if AttackKind.SELECTIVE_FORWARDING in kinds:
            p = _param(active, AttackKind.SELECTIVE_FORWARDING, "drop_probability", 0.5)
            if rng.random() < p:
                continue

        if AttackKind.MALFORMED_STORM in kinds:
            frac = _param(active, AttackKind.MALFORMED_STORM, "malformed_fraction", 1.0)
            if rng.random() < frac:
                packet = replace(packet, payload=rng.choice(GARBAGE_PAYLOADS))
        if AttackKind.DELAY_SKEW in kinds:
            skew_s = _param(active, AttackKind.DELAY_SKEW, "delay_skew_s", 60.0)
            packet = _skew_claimed_time(packet, int(skew_s * MS))
        if AttackKind.GPS_TAMPER in kinds:
            lat_jump = _param(active, AttackKind.GPS_TAMPER, "lat_jump", 0.0)
            lon_jump = _param(active, AttackKind.GPS_TAMPER, "lon_jump", 0.0)
            packet = _shift_gps(packet, lat_jump, lon_jump)
        if AttackKind.UNAUTHORIZED_SENDER in kinds:
            packet = replace(packet, source_address=ROGUE_PREFIX + packet.source_address)

        if AttackKind.FLOODING in kinds:
            mult = int(_param(active, AttackKind.FLOODING, "flood_multiplier", 10))
            out.extend([packet] * mult)
            # the broadcast garbage that rides along with a flood
            out.append(replace(packet, payload=rng.choice(GARBAGE_PAYLOADS)))
        else:
            out.append(packet)
    return out


def _param(
    active: list[AttackScenario], kind: AttackKind, key: str, default: float
) -> float:
    for s in active:
        if s.kind is kind:
            return float(s.params.get(key, default))
    return default


def load_scenarios(path: str | Path) -> list[AttackScenario]:
    """Load attack scenarios from a TOML file, one table per scenario."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    scenarios = []
    for name, table in doc.items():
        if not isinstance(table, dict):
            raise ValueError(f"scenario {name!r}: expected a table of keys")
        if "kind" not in table:
            raise ValueError(f"scenario {name!r}: missing 'kind'")
        try:
            kind = AttackKind(table["kind"])
        except ValueError:
            raise ValueError(f"scenario {name!r}: unknown kind {table['kind']!r}")
        for required in ("start_at", "end_at"):
            if required not in table:
                raise ValueError(f"scenario {name!r}: missing {required!r} (millis)")
        params = {k: float(v) for k, v in table.items() if k in PARAM_KEYS}
        extra = set(table) - PARAM_KEYS - {"kind", "start_at", "end_at"}
        if extra:
            raise ValueError(f"scenario {name!r}: unknown keys {sorted(extra)}")
        scenarios.append(
            AttackScenario(
                kind=kind,
                start_at=int(table["start_at"]),
                end_at=int(table["end_at"]),
                params=params,
                name=name,
            )
        )
    return scenarios
