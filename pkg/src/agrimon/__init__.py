"""Sensor-based agricultural monitoring with wireless-attack detection.

Simulated sensor nodes emit a plain ``name: value`` wire payload; an
ingestion gateway filters it against a whitelist and the payload grammar; an
append-only store persists readings, alerts, and rejections; a rule engine
watches receive-volume windows, staleness, delay, GPS displacement, and
extreme values; analytics and an HTTP API sit on top for the dashboard.
"""

from .core import (
    MS,
    AlertEvent,
    AlertKind,
    Clock,
    DetectorConfig,
    FieldName,
    RawPacket,
    Reason,
    SensorReading,
    SimClock,
    Timestamp,
    ValidationError,
    WallClock,
    format_payload,
    parse_payload,
    validate_range,
)
from .analytics import Bucket, DayExtreme, RangeError
from .detect import Detector, GpsFix, WindowStats, haversine_m, window_stats
from .gateway import AdmissionResult, Gateway, Whitelist, admit
from .nodesim import AttackKind, AttackScenario, NodeProfile, SensorNode, apply_attacks
from .runner import RunConfig, RunReport, SimulationRun, default_config, load_config
from .store import Store, StoreError

__version__ = "0.1.0"

__all__ = [
    "MS",
    "AlertEvent",
    "AlertKind",
    "AdmissionResult",
    "AttackKind",
    "AttackScenario",
    "Bucket",
    "Clock",
    "DayExtreme",
    "Detector",
    "DetectorConfig",
    "FieldName",
    "Gateway",
    "GpsFix",
    "NodeProfile",
    "RangeError",
    "RawPacket",
    "Reason",
    "RunConfig",
    "RunReport",
    "SensorNode",
    "SensorReading",
    "SimClock",
    "SimulationRun",
    "Store",
    "StoreError",
    "Timestamp",
    "ValidationError",
    "WallClock",
    "Whitelist",
    "WindowStats",
    "admit",
    "apply_attacks",
    "default_config",
    "format_payload",
    "haversine_m",
    "load_config",
    "parse_payload",
    "validate_range",
    "window_stats",
]
