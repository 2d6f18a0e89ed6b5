"""Run an attack-laden simulation, then serve it to the dashboard.

Builds the store with a flood, a black hole, and a GPS tamper already in it,
then starts the HTTP API on port 8750. If the dashboard has been built
(``cd frontend && npm install && npm run build``) it is served at the root;
the API alone is at /api/* either way.

    python demos/06_serve_dashboard.py
    # then open http://127.0.0.1:8750/
"""

from pathlib import Path

from agrimon.api import create_app, serve
from agrimon.core import MS
from agrimon.nodesim import AttackKind, AttackScenario
from agrimon.runner import SimulationRun, default_config

scenarios = [
    AttackScenario(kind=AttackKind.FLOODING, start_at=100 * MS, end_at=140 * MS,
                   params={"flood_multiplier": 8}, name="flood"),
    AttackScenario(kind=AttackKind.GPS_TAMPER, start_at=160 * MS, end_at=220 * MS,
                   params={"lat_jump": 0.01}, name="tamper"),
    AttackScenario(kind=AttackKind.BLACK_HOLE, start_at=240 * MS, end_at=400 * MS,
                   name="hole"),
]

sim = SimulationRun(default_config(), scenarios)
print("simulating 400s of attacks...")
report = sim.run(duration_s=400)
print(report.to_table())

dist = Path(__file__).resolve().parent.parent / "frontend" / "dist"
dashboard = str(dist) if dist.is_dir() else None
if dashboard is None:
    print("frontend/dist not found; serving the API only")

app = create_app(
    sim.store,
    sim.clock,
    sim.config.detector,
    sim.gateway.whitelist,
    dashboard_dir=dashboard,
)
print("serving on http://127.0.0.1:8750/ (Ctrl-C to stop)")
serve(app, "127.0.0.1", 8750)
