"""Wires the whole pipeline together for deterministic simulated runs.

One tick per second of simulated time: every node emits, the attack injector
transforms the packet batch, the gateway admits or rejects each packet, and
the detector evaluates. Identical (config, scenarios, seed, duration) produce
identical stores and reports, byte for byte.

The service configuration file is TOML: a ``[run]`` table, a ``[detector]``
table holding :class:`DetectorConfig` fields, an ``[api]`` table, a
``[whitelist]`` table, and one ``[[nodes]]`` entry per simulated node.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .core import MS, AlertKind, DetectorConfig, SimClock, Timestamp
from .detect import Detector, window_stats
from .gateway import Gateway, Whitelist
from .nodesim import AttackKind, AttackScenario, NodeProfile, SensorNode, apply_attacks
from .store import Store

REPORT_SCHEMA_VERSION = 1

# Which alert kinds count as "this scenario was caught", for latency reporting.
SCENARIO_ALERT_KINDS: dict[AttackKind, tuple[AlertKind, ...]] = {
    AttackKind.FLOODING: (AlertKind.FLOODING_SUSPECTED,),
    AttackKind.SELECTIVE_FORWARDING: (AlertKind.DATA_LOSS_SUSPECTED, AlertKind.STALE_DATA),
    AttackKind.BLACK_HOLE: (AlertKind.DATA_LOSS_SUSPECTED, AlertKind.STALE_DATA),
    AttackKind.SINKHOLE: (AlertKind.DATA_LOSS_SUSPECTED, AlertKind.STALE_DATA),
    AttackKind.MISDIRECTION: (AlertKind.DATA_LOSS_SUSPECTED, AlertKind.STALE_DATA),
    AttackKind.DELAY_SKEW: (AlertKind.DATA_DELAY,),
    AttackKind.GPS_TAMPER: (AlertKind.GPS_TAMPER,),
    AttackKind.MALFORMED_STORM: (AlertKind.MALFORMED_BURST,),
    AttackKind.UNAUTHORIZED_SENDER: (AlertKind.UNAUTHORIZED_SOURCE,),
}


@dataclass(frozen=True)
class ApiConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    admin_enabled: bool = True
    poll_ms: int = 1000
    dashboard_dir: str | None = None


@dataclass(frozen=True)
class RunConfig:
    duration_s: int = 300
    seed: int = 0
    data_dir: str | None = None
    tick_ms: int = MS
    nodes: tuple[NodeProfile, ...] = ()
    extra_whitelist: tuple[str, ...] = ()
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    api: ApiConfig = field(default_factory=ApiConfig)

    def whitelist(self) -> Whitelist:
        allowed = {n.source_address for n in self.nodes} | set(self.extra_whitelist)
        return Whitelist(allowed=allowed)

    def node_id_map(self) -> dict[str, str]:
        return {n.source_address: n.node_id for n in self.nodes}


def default_config() -> RunConfig:
    """One steady node at the baseline rate; good enough to see the curves."""
    return RunConfig(
        nodes=(NodeProfile(node_id="n1", source_address="10.0.0.1", rng_seed=1),)
    )


def load_config(path: str | Path) -> RunConfig:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    known = {"run", "detector", "api", "whitelist", "nodes"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown config sections: {sorted(unknown)}")

    run = doc.get("run", {})
    detector = DetectorConfig.from_mapping(doc.get("detector", {}))
    api = ApiConfig(**doc.get("api", {}))
    nodes = tuple(NodeProfile(**entry) for entry in doc.get("nodes", []))
    if not nodes:
        nodes = default_config().nodes
    extra = tuple(doc.get("whitelist", {}).get("extra", ()))
    return RunConfig(
        duration_s=int(run.get("duration_s", 300)),
        seed=int(run.get("seed", 0)),
        data_dir=run.get("data_dir"),
        tick_ms=int(run.get("tick_ms", MS)),
        nodes=nodes,
        extra_whitelist=extra,
        detector=detector,
        api=api,
    )


@dataclass
class ScenarioOutcome:
    name: str
    kind: str
    start_at: Timestamp
    end_at: Timestamp
    first_alert_kind: str | None = None
    first_alert_at: Timestamp | None = None

    @property
    def latency_s(self) -> float | None:
        if self.first_alert_at is None:
            return None
        return (self.first_alert_at - self.start_at) / MS


@dataclass
class RunReport:
    """Everything a run produced, serializable deterministically."""

    seed: int
    duration_s: int
    readings_total: int
    rejections_total: int
    unauthorized_total: int
    alert_counts: dict[str, int]
    scenarios: list[ScenarioOutcome]
    final_recent: int
    final_prior: int
    final_rate: float | None

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "seed": self.seed,
            "duration_s": self.duration_s,
            "readings_total": self.readings_total,
            "rejections_total": self.rejections_total,
            "unauthorized_total": self.unauthorized_total,
            "alert_counts": dict(sorted(self.alert_counts.items())),
            "scenarios": [
                {
                    "name": s.name,
                    "kind": s.kind,
                    "start_at": s.start_at,
                    "end_at": s.end_at,
                    "first_alert_kind": s.first_alert_kind,
                    "first_alert_at": s.first_alert_at,
                    "latency_s": s.latency_s,
                }
                for s in self.scenarios
            ],
            "final_window": {
                "recent": self.final_recent,
                "prior": self.final_prior,
                "rate": self.final_rate,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        lines = [
            f"run: seed={self.seed} duration={self.duration_s}s",
            f"readings={self.readings_total} rejections={self.rejections_total} "
            f"(unauthorized={self.unauthorized_total})",
            "",
            "alerts:",
        ]
        if self.alert_counts:
            for kind, n in sorted(self.alert_counts.items()):
                lines.append(f"  {kind:<22} {n}")
        else:
            lines.append("  (none)")
        if self.scenarios:
            lines.append("")
            lines.append(f"{'scenario':<18} {'kind':<20} {'start_s':>8} {'latency_s':>10}")
            for s in self.scenarios:
                latency = f"{s.latency_s:.1f}" if s.latency_s is not None else "not caught"
                lines.append(
                    f"{s.name:<18} {s.kind:<20} {s.start_at / MS:>8.0f} {latency:>10}"
                )
        return "\n".join(lines) + "\n"


class SimulationRun:
    """Drives emit -> attack transform -> admit -> store -> evaluate."""

    def __init__(
        self,
        config: RunConfig,
        scenarios: list[AttackScenario] | None = None,
        data_dir: str | Path | None = None,
    ):
        self.config = config
        self.scenarios = list(scenarios or [])
        self.clock = SimClock(0)
        self.store = Store(data_dir if data_dir is not None else config.data_dir)
        self.nodes = [SensorNode(p) for p in config.nodes]
        self.gateway = Gateway(
            self.store,
            config.whitelist(),
            self.clock,
            config.detector,
            config.node_id_map(),
        )
        self.detector = Detector(
            self.store,
            config.detector,
            expected_nodes=tuple(p.node_id for p in config.nodes),
            started_at=0,
        )
        self.attack_rng = random.Random(f"attacks:{config.seed}")

    def run(self, duration_s: int | None = None) -> RunReport:
        duration_s = duration_s if duration_s is not None else self.config.duration_s
        end_ms = duration_s * MS
        tick_ms = self.config.tick_ms
        t = 0
        while t < end_ms:
            self.clock.advance_to(t)
            batch = []
            for node in self.nodes:
                batch.extend(node.emit(self.clock))
            batch = apply_attacks(batch, self.scenarios, self.clock, self.attack_rng)
            for packet in batch:
                self.gateway.ingest(packet)
            self.detector.evaluate(t)
            t += tick_ms
        return self.report(duration_s)

    def report(self, duration_s: int) -> RunReport:
        alerts = self.store.query_alerts()
        counts: dict[str, int] = {}
        for a in alerts:
            counts[a.kind.value] = counts.get(a.kind.value, 0) + 1
        outcomes = []
        for s in self.scenarios:
            outcome = ScenarioOutcome(
                name=s.name or s.kind.value,
                kind=s.kind.value,
                start_at=s.start_at,
                end_at=s.end_at,
            )
            wanted = SCENARIO_ALERT_KINDS[s.kind]
            for a in alerts:
                if a.kind in wanted and a.detected_at >= s.start_at:
                    outcome.first_alert_kind = a.kind.value
                    outcome.first_alert_at = a.detected_at
                    break
            outcomes.append(outcome)
        stats = window_stats(self.store, self.clock.now(), self.config.detector)
        return RunReport(
            seed=self.config.seed,
            duration_s=duration_s,
            readings_total=self.store.total_readings(),
            rejections_total=self.store.count_rejections(),
            unauthorized_total=self.gateway.unauthorized_total,
            alert_counts=counts,
            scenarios=outcomes,
            final_recent=stats.recent_count,
            final_prior=stats.prior_count,
            final_rate=stats.rate_of_change,
        )

    def close(self) -> None:
        self.store.close()


def write_volume_csv(store: Store, path: str | Path, t0: Timestamp, t1: Timestamp) -> None:
    """Per-second receive counts and the running total: ``t_s, count_per_s,
    aggregated`` (the two curves of the volume figure)."""
    counts = store.count_received_buckets(t0, t1, MS)
    total = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t_s,count_per_s,aggregated\n")
        for k, c in enumerate(counts):
            total += c
            fh.write(f"{t0 // MS + k},{c},{total}\n")


def run_scenario_file(
    config: RunConfig,
    scenarios: list[AttackScenario],
    data_dir: str | Path | None = None,
    duration_s: int | None = None,
) -> tuple[SimulationRun, RunReport]:
    sim = SimulationRun(config, scenarios, data_dir=data_dir)
    report = sim.run(duration_s)
    return sim, report
