"""Command-line entry point.

``agrimon run`` drives the full pipeline, simulated (deterministic, writes a
run report) or wall-clock (runs until interrupted, optionally serving the
HTTP API). ``agrimon report`` summarizes an existing data directory and
emits the per-second volume CSV. ``agrimon replay`` re-feeds a persisted
reading log through a fresh detector, which is how threshold changes get
regression-tested against recorded traffic.

Every DetectorConfig field is exposed as a flag of the same name
(``--rise_threshold 0.2``) overriding both defaults and the config file.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from pathlib import Path

from .core import MS, DetectorConfig, SimClock, WallClock
from .detect import Detector
from .gateway import Gateway
from .nodesim import SensorNode, load_scenarios
from .runner import (
    RunConfig,
    SimulationRun,
    default_config,
    load_config,
    write_volume_csv,
)
from .store import Store


def _add_detector_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("detector overrides")
    for f in dataclasses.fields(DetectorConfig):
        kind = int if f.type in ("int",) else float
        group.add_argument(f"--{f.name}", type=kind, default=None, metavar="V")


def _detector_overrides(args: argparse.Namespace) -> dict:
    out = {}
    for f in dataclasses.fields(DetectorConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            out[f.name] = value
    return out


def _build_config(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config) if args.config else default_config()
    updates: dict = {}
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "duration", None) is not None:
        updates["duration_s"] = args.duration
    if getattr(args, "data_dir", None) is not None:
        updates["data_dir"] = args.data_dir
    overrides = _detector_overrides(args)
    if overrides:
        updates["detector"] = dataclasses.replace(config.detector, **overrides)
    if updates:
        config = dataclasses.replace(config, **updates)
    return config


def _parse_serve(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise argparse.ArgumentTypeError("expected addr:port")
    return host, int(port)


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = _build_config(args)
        scenarios = load_scenarios(args.scenario) if args.scenario else []
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.wall:
        return _run_wall(config, args)

    sim = SimulationRun(config, scenarios)
    report = sim.run()
    out_dir = Path(config.data_dir) if config.data_dir else None
    if out_dir is not None:
        (out_dir / "report.json").write_text(report.to_json(), encoding="utf-8")
        (out_dir / "report.txt").write_text(report.to_table(), encoding="utf-8")
    sys.stdout.write(report.to_table())
    if args.serve:
        host, port = args.serve
        from .api import create_app, serve

        app = create_app(
            sim.store,
            sim.clock,
            config.detector,
            sim.gateway.whitelist,
            admin_enabled=config.api.admin_enabled,
            poll_ms=config.api.poll_ms,
            dashboard_dir=_dashboard_dir(config),
        )
        print(f"serving finished run on http://{host}:{port} (Ctrl-C to stop)")
        serve(app, host, port)
    else:
        sim.close()
    return 0


def _dashboard_dir(config: RunConfig) -> str | None:
    candidate = config.api.dashboard_dir
    if candidate and Path(candidate).is_dir():
        return candidate
    return None


def _run_wall(config: RunConfig, args: argparse.Namespace) -> int:
    """Wall-clock service: emitter + evaluator threads, optional HTTP API."""
    import threading

    clock = WallClock()
    start = clock.now()
    store = Store(config.data_dir)
    gateway = Gateway(store, config.whitelist(), clock, config.detector, config.node_id_map())
    detector = Detector(
        store,
        config.detector,
        expected_nodes=tuple(p.node_id for p in config.nodes),
        started_at=start,
    )
    # node schedules are relative to the service start
    nodes = [SensorNode(p) for p in config.nodes]
    offset = start
    stop = threading.Event()

    class _OffsetClock:
        def now(self):
            return clock.now() - offset

    def emitter():
        oc = _OffsetClock()
        while not stop.is_set():
            for node in nodes:
                for packet in node.emit(oc):
                    gateway.ingest(
                        dataclasses.replace(
                            packet,
                            sent_at=packet.sent_at + offset,
                            arrived_at=clock.now(),
                        )
                    )
            stop.wait(0.05)

    def evaluator():
        while not stop.is_set():
            detector.evaluate(clock.now())
            stop.wait(1.0)

    threads = [
        threading.Thread(target=emitter, daemon=True),
        threading.Thread(target=evaluator, daemon=True),
    ]
    for t in threads:
        t.start()
    try:
        if args.serve:
            host, port = args.serve
            from .api import create_app, serve

            app = create_app(
                store,
                clock,
                config.detector,
                gateway.whitelist,
                admin_enabled=config.api.admin_enabled,
                poll_ms=config.api.poll_ms,
                dashboard_dir=_dashboard_dir(config),
            )
            print(f"serving on http://{host}:{port} (Ctrl-C to stop)")
            serve(app, host, port)
        else:
            while True:
                time.sleep(1)
    except KeyboardInterrupt:
        pass
    finally:
        stop.set()
        for t in threads:
            t.join(timeout=2)
        store.close()
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    data_dir = Path(args.data_dir)
    if not data_dir.is_dir():
        print(f"error: no such data directory: {data_dir}", file=sys.stderr)
        return 2
    store = Store(data_dir)
    try:
        total = store.total_readings()
        print(f"readings: {total}")
        print(f"rejections: {store.count_rejections()}")
        alerts = store.query_alerts()
        print(f"alerts: {len(alerts)}")
        first_by_kind: dict[str, int] = {}
        for a in alerts:
            first_by_kind.setdefault(a.kind.value, a.detected_at)
        if alerts:
            print(f"{'kind':<22} {'node':<10} {'t_s':>8}  evidence")
            for a in alerts:
                node = a.node_id or "-"
                print(f"{a.kind.value:<22} {node:<10} {a.detected_at / MS:>8.0f}  {a.evidence}")
        rows = store.query_received(0, 2**62)
        if rows:
            t0 = (rows[0].received_at // MS) * MS
            t1 = ((rows[-1].received_at // MS) + 1) * MS
            csv_path = Path(args.csv) if args.csv else data_dir / "volume.csv"
            write_volume_csv(store, csv_path, t0, t1)
            print(f"volume curve written to {csv_path}")
            report_path = data_dir / "report.json"
            if report_path.exists():
                print(report_path.read_text(encoding="utf-8"))
    finally:
        store.close()
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    source = Store(args.data_dir)
    try:
        rows = source.query_received(0, 2**62)
    finally:
        source.close()
    if not rows:
        print("nothing to replay")
        return 0

    cfg = DetectorConfig(**_detector_overrides(args)) if _detector_overrides(args) else DetectorConfig()
    scratch = Store(None)
    clock = SimClock(0)
    detector = Detector(scratch, cfg, started_at=rows[0].received_at)
    speed = args.speed
    next_eval = (rows[0].received_at // MS) * MS
    i = 0
    alerts_found = []
    end = rows[-1].received_at + MS
    while next_eval <= end:
        while i < len(rows) and rows[i].received_at <= next_eval:
            scratch.append_reading(rows[i])
            i += 1
        clock.advance_to(next_eval)
        alerts_found.extend(detector.evaluate(next_eval))
        if speed and speed > 0:
            time.sleep(1.0 / speed)
        next_eval += MS
    print(f"replayed {len(rows)} readings, {len(alerts_found)} alerts")
    for a in alerts_found:
        node = a.node_id or "-"
        print(f"{a.kind.value:<22} {node:<10} {a.detected_at / MS:>8.0f}  {a.evidence}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agrimon")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the pipeline (simulated or wall clock)")
    p_run.add_argument("--config", help="TOML service configuration")
    p_run.add_argument("--scenario", help="TOML attack scenario file")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--duration", type=int, default=None, metavar="S")
    mode = p_run.add_mutually_exclusive_group()
    mode.add_argument("--sim", action="store_true", default=True)
    mode.add_argument("--wall", action="store_true", default=False)
    p_run.add_argument("--serve", type=_parse_serve, default=None, metavar="ADDR:PORT")
    p_run.add_argument("--data-dir", default=None)
    _add_detector_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_report = sub.add_parser("report", help="summarize a data directory")
    p_report.add_argument("--data-dir", required=True)
    p_report.add_argument("--csv", default=None, help="volume CSV output path")
    p_report.set_defaults(func=cmd_report)

    p_replay = sub.add_parser("replay", help="re-run the detector over a reading log")
    p_replay.add_argument("--data-dir", required=True)
    p_replay.add_argument("--speed", type=float, default=0.0, help="0 = full speed")
    _add_detector_flags(p_replay)
    p_replay.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
