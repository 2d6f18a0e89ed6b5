"""Three stealthier attacks: forged timestamps, a moved node, a fake sender.

DelaySkew rewrites each payload's claimed sample time 60s into the past
while delivery continues; the gap between receive time and claimed sample
time is the wormhole signal, flagged once enough delayed readings pile up.
GpsTamper shifts the reported position ~1.1 km; consecutive fixes more than
50m apart trip the displacement rule. UnauthorizedSender forges the source
address, so the whitelist drops every packet before parsing.
"""

from agrimon.core import MS, AlertKind
from agrimon.nodesim import AttackKind, AttackScenario
from agrimon.runner import SimulationRun, default_config

scenarios = [
    AttackScenario(
        kind=AttackKind.DELAY_SKEW,
        start_at=100 * MS,
        end_at=150 * MS,
        params={"delay_skew_s": 60},
        name="wormhole",
    ),
    AttackScenario(
        kind=AttackKind.GPS_TAMPER,
        start_at=200 * MS,
        end_at=260 * MS,
        params={"lat_jump": 0.01},
        name="carried-away",
    ),
    AttackScenario(
        kind=AttackKind.UNAUTHORIZED_SENDER,
        start_at=300 * MS,
        end_at=330 * MS,
        name="impostor",
    ),
]

sim = SimulationRun(default_config(), scenarios)
report = sim.run(duration_s=400)
print(report.to_table())

for kind, label in [
    (AlertKind.DATA_DELAY, "delayed-data"),
    (AlertKind.GPS_TAMPER, "gps-tamper"),
    (AlertKind.UNAUTHORIZED_SOURCE, "unauthorized-source"),
]:
    alerts = sim.store.query_alerts(kind=kind)
    when = f"t={alerts[0].detected_at / MS:.0f}s" if alerts else "never"
    print(f"{label:<22} first alert: {when}")
    if alerts:
        print(f"{'':<22} {alerts[0].evidence}")
print(f"packets rejected by the whitelist: "
      f"{sim.gateway.unauthorized_total}")
