"""HTTP JSON service: the contract the monitoring dashboard polls.

Every endpoint is a pure projection of store state at request time; the only
write operation is the whitelist admin call, which can be disabled entirely.
Responses always carry ``schema_version``; timestamps are integer
milliseconds. Unknown query parameters are rejected with 400 (a typo should
never silently return the unfiltered answer), unknown paths give 404.

Query parameters are parsed into structured values before they go anywhere
near the store; no request string is ever interpolated into a query.
"""

from __future__ import annotations

import datetime as dt
import json
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import analytics, detect
from .core import MS, AlertKind, Clock, DetectorConfig, FieldName, Timestamp
from .gateway import Whitelist
from .store import Store

SCHEMA_VERSION = 1


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message
        super().__init__(message)


def _body(**payload) -> dict:
    return {"schema_version": SCHEMA_VERSION, **payload}


class _Params:
    """Strict query-parameter reader: every key must be declared and consumed."""

    def __init__(self, request: Request, allowed: set[str]):
        self.qp = request.query_params
        unknown = set(self.qp.keys()) - allowed
        if unknown:
            raise ApiError(400, f"unknown query parameters: {sorted(unknown)}")

    def get(self, name: str, default: str | None = None) -> str | None:
        return self.qp.get(name, default)

    def require(self, name: str) -> str:
        value = self.qp.get(name)
        if value is None or value == "":
            raise ApiError(400, f"missing required query parameter {name!r}")
        return value

    def millis(self, name: str, default: int | None = None) -> int | None:
        raw = self.qp.get(name)
        if raw is None:
            return default
        try:
            value = int(raw)
        except ValueError:
            raise ApiError(400, f"{name!r} must be integer milliseconds")
        if value < 0:
            raise ApiError(400, f"{name!r} must be non-negative")
        return value

    def iso_day(self, name: str) -> Timestamp:
        raw = self.require(name)
        try:
            day = dt.date.fromisoformat(raw)
        except ValueError:
            raise ApiError(400, f"{name!r} must be an ISO date (YYYY-MM-DD)")
        epoch = dt.datetime(day.year, day.month, day.day, tzinfo=dt.timezone.utc)
        return int(epoch.timestamp() * MS)

    def field(self, name: str) -> FieldName:
        raw = self.require(name)
        for f in FieldName:
            if f.value.lower() == raw.lower():
                return f
        raise ApiError(400, f"unknown field {raw!r}")

    def hour(self, name: str) -> int:
        raw = self.require(name)
        try:
            value = int(raw)
        except ValueError:
            raise ApiError(400, f"{name!r} must be an hour 0-23")
        if not 0 <= value <= 23:
            raise ApiError(400, f"{name!r} must be an hour 0-23")
        return value


def _bucket_json(b: analytics.Bucket) -> dict:
    return {
        "start": b.start,
        "end": b.end,
        "avg": b.avg,
        "min": b.vmin,
        "max": b.vmax,
        "gap": b.gap,
    }


def _alert_json(a) -> dict:
    return {
        "kind": a.kind.value,
        "node_id": a.node_id,
        "detected_at": a.detected_at,
        "window_start": a.window_start,
        "window_end": a.window_end,
        "evidence": a.evidence,
        "value": a.value,
    }


def create_app(
    store: Store,
    clock: Clock,
    cfg: DetectorConfig | None = None,
    whitelist: Whitelist | None = None,
    admin_enabled: bool = True,
    poll_ms: int = 1000,
    dashboard_dir: str | Path | None = None,
) -> FastAPI:
    """Assemble the service around one store/clock pair."""
    cfg = cfg or DetectorConfig()
    app = FastAPI(title="agrimon", docs_url=None, redoc_url=None, openapi_url=None)
    admin_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"schema_version": SCHEMA_VERSION, "error": exc.message},
        )

    @app.get("/api/realtime")
    def realtime(request: Request):
        params = _Params(request, {"node"})
        node = params.require("node")
        readings = {}
        for f in FieldName:
            r = store.latest_reading(node, f)
            readings[f.value] = (
                None
                if r is None
                else {
                    "value": r.value,
                    "sampled_at": r.sampled_at,
                    "received_at": r.received_at,
                    "seq": r.seq,
                }
            )
        advisories = []
        advice = analytics.watering_advice(store, node, clock.now(), cfg)
        if advice is not None:
            advisories.append(advice)
        return _body(node=node, readings=readings, advisories=advisories)

    @app.get("/api/volume")
    def volume(request: Request):
        _Params(request, set())
        now = clock.now()
        stats = detect.window_stats(store, now, cfg)
        return _body(
            now=now,
            recent=stats.recent_count,
            prior=stats.prior_count,
            rate=stats.rate_of_change,
            trend=list(stats.trend),
            aggregated=store.total_readings(),
            window_s=cfg.window_s,
            rise_threshold=cfg.rise_threshold,
            drop_threshold=cfg.drop_threshold,
        )

    @app.get("/api/history")
    def history(request: Request):
        params = _Params(request, {"node", "field", "day"})
        node = params.require("node")
        field = params.field("field")
        day_start = params.iso_day("day")
        buckets = analytics.history_day(store, node, field, day_start)
        return _body(
            node=node,
            field=field.value,
            day_start=day_start,
            buckets=[_bucket_json(b) for b in buckets],
        )

    @app.get("/api/compare")
    def compare(request: Request):
        params = _Params(request, {"node", "field", "day", "hour", "len_h"})
        node = params.require("node")
        field = params.field("field")
        day_start = params.iso_day("day")
        hour = params.hour("hour")
        raw_len = params.get("len_h", "1")
        try:
            len_h = int(raw_len)
        except ValueError:
            raise ApiError(400, "'len_h' must be an integer hour count")
        if not 1 <= len_h <= 24:
            raise ApiError(400, "'len_h' must be between 1 and 24")
        period_start = day_start + hour * analytics.HOUR_MS
        current, previous = analytics.compare_previous_day(
            store, node, field, period_start, len_h * analytics.HOUR_MS
        )
        return _body(
            node=node,
            field=field.value,
            period_start=period_start,
            current=[_bucket_json(b) for b in current],
            previous=[_bucket_json(b) for b in previous],
        )

    @app.get("/api/week")
    def week(request: Request):
        params = _Params(request, {"node", "field", "start"})
        node = params.require("node")
        field = params.field("field")
        week_start = params.iso_day("start")
        try:
            days = analytics.query_week(store, node, field, week_start, clock.now())
        except analytics.RangeError as exc:
            raise ApiError(400, str(exc))
        return _body(
            node=node,
            field=field.value,
            week_start=week_start,
            days=[
                {"day_start": d.day_start, "high": d.high, "low": d.low, "gap": d.gap}
                for d in days
            ],
        )

    @app.get("/api/alerts")
    def alerts(request: Request):
        params = _Params(request, {"since", "kind"})
        since = params.millis("since", 0)
        kind_raw = params.get("kind")
        kind = None
        if kind_raw is not None:
            try:
                kind = AlertKind(kind_raw)
            except ValueError:
                raise ApiError(400, f"unknown alert kind {kind_raw!r}")
        found = store.query_alerts(t0=since, kind=kind)
        found = list(reversed(found))  # newest first
        return _body(alerts=[_alert_json(a) for a in found])

    @app.get("/api/position")
    def position(request: Request):
        params = _Params(request, {"node"})
        node = params.require("node")
        fix = detect.latest_fix(store, node)
        tamper_active = False
        cooldown_ms = int(cfg.alert_cooldown_s * MS)
        recent = store.query_alerts(
            t0=max(0, clock.now() - cooldown_ms), kind=AlertKind.GPS_TAMPER
        )
        tamper_active = any(a.node_id == node for a in recent)
        return _body(
            node=node,
            fix=None
            if fix is None
            else {"lat": fix.lat, "lon": fix.lon, "at": fix.at},
            now=clock.now(),
            tamper_active=tamper_active,
        )

    @app.get("/api/meta")
    def meta(request: Request):
        _Params(request, set())
        return _body(
            nodes=store.node_ids(),
            poll_ms=poll_ms,
            admin_enabled=admin_enabled and whitelist is not None,
            now=clock.now(),
        )

    @app.post("/api/admin/whitelist")
    async def admin_whitelist(request: Request):
        _Params(request, set())
        if not admin_enabled or whitelist is None:
            raise ApiError(403, "whitelist administration is disabled")
        try:
            payload = json.loads(await request.body())
        except ValueError:
            raise ApiError(400, "body must be a JSON object")
        if not isinstance(payload, dict):
            raise ApiError(400, "body must be a JSON object")
        unknown = set(payload) - {"address", "action"}
        if unknown:
            raise ApiError(400, f"unknown body keys: {sorted(unknown)}")
        address = payload.get("address")
        action = payload.get("action")
        if not isinstance(address, str) or not address:
            raise ApiError(400, "'address' must be a non-empty string")
        if action not in ("add", "remove"):
            raise ApiError(400, "'action' must be 'add' or 'remove'")
        with admin_lock:
            if action == "add":
                whitelist.add(address)
            else:
                whitelist.remove(address)
            current = whitelist.as_list()
        return _body(whitelist=current)

    if dashboard_dir is not None:
        app.mount("/", StaticFiles(directory=str(dashboard_dir), html=True), name="dashboard")

    return app


def serve(app: FastAPI, host: str, port: int) -> None:
    """Blocking uvicorn server (wall-clock mode)."""
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
