"""Record dashboard fixtures from the real API.

Runs a short deterministic simulation (flooding + GPS tamper + a dry spell
for the advisory), then captures each endpoint's JSON body into
frontend/fixtures/. The dashboard test suite replays these files, so the
frontend is always tested against genuine backend output.

Usage: python scripts/record_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from agrimon.api import create_app
from agrimon.core import DetectorConfig, SimClock
from agrimon.nodesim import AttackKind, AttackScenario, NodeProfile
from agrimon.runner import RunConfig, SimulationRun
from agrimon.store import Store

OUT = Path(__file__).resolve().parent.parent / "frontend" / "fixtures"


def record():
    node = NodeProfile(
        node_id="n1",
        source_address="10.0.0.1",
        base_temp=24.0,
        base_hum=18.0,  # dry: keeps the watering advisory active
        rng_seed=1,
    )
    config = RunConfig(seed=11, nodes=(node,), detector=DetectorConfig(hum_max=99.0))
    scenarios = [
        AttackScenario(
            kind=AttackKind.FLOODING,
            start_at=100_000,
            end_at=140_000,
            params={"flood_multiplier": 8},
            name="flood",
        ),
        AttackScenario(
            kind=AttackKind.GPS_TAMPER,
            start_at=150_000,
            end_at=200_000,
            params={"lat_jump": 0.01},
            name="tamper",
        ),
    ]
    sim = SimulationRun(config, scenarios)
    sim.run(240)
    client = TestClient(
        create_app(sim.store, sim.clock, config.detector, sim.gateway.whitelist)
    )

    OUT.mkdir(parents=True, exist_ok=True)

    def snap(name, path, params=None):
        res = client.get(path, params=params or {})
        assert res.status_code == 200, (path, res.status_code, res.text)
        (OUT / f"{name}.json").write_text(
            json.dumps(res.json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"recorded {name}.json")

    snap("volume", "/api/volume")
    snap("realtime", "/api/realtime", {"node": "n1"})
    snap("history", "/api/history", {"node": "n1", "field": "temperature", "day": "1970-01-01"})
    snap(
        "compare",
        "/api/compare",
        {"node": "n1", "field": "temperature", "day": "1970-01-01", "hour": "0"},
    )
    snap("week", "/api/week", {"node": "n1", "field": "temperature", "start": "1970-01-01"})
    snap("alerts", "/api/alerts")
    snap("position", "/api/position", {"node": "n1"})
    snap("meta", "/api/meta")

    # the week RangeError body, for the error-surface test
    clock_far = SimClock(400 * 24 * 3600 * 1000)
    err_client = TestClient(create_app(sim.store, clock_far, config.detector))
    res = err_client.get(
        "/api/week", params={"node": "n1", "field": "temperature", "start": "1970-01-01"}
    )
    assert res.status_code == 400
    (OUT / "week_error.json").write_text(
        json.dumps(res.json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print("recorded week_error.json")

    # an empty system, the trivial volume body
    empty = Store(None)
    empty_client = TestClient(create_app(empty, SimClock(0), DetectorConfig()))
    body = empty_client.get("/api/volume").json()
    (OUT / "volume_empty.json").write_text(
        json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print("recorded volume_empty.json")

    # a second alerts snapshot two evaluation ticks later with a fresh alert
    # (the GPS tamper window ends at 200s; the jump back fires a new alert)
    sim2 = SimulationRun(config, scenarios)
    sim2.run(240)
    later_clock = sim2.clock
    later_client = TestClient(
        create_app(sim2.store, later_clock, config.detector, sim2.gateway.whitelist)
    )
    base = later_client.get("/api/alerts").json()
    extra = {
        "kind": "StaleData",
        "node_id": "n1",
        "detected_at": later_clock.now() + 1000,
        "window_start": None,
        "window_end": None,
        "evidence": "no data from 'n1' for 61s",
        "value": 61.0,
    }
    base["alerts"] = [extra] + base["alerts"]
    (OUT / "alerts_later.json").write_text(
        json.dumps(base, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print("recorded alerts_later.json")


if __name__ == "__main__":
    record()
