"""The data-loss family: selective forwarding, then a total black hole.

Selective forwarding drops half the packets, so volume sags past the -4%
threshold within a few seconds. A black hole silences the node completely:
volume collapses first, and once the node has said nothing for the stale
timeout (60s), the per-node StaleData rule names the victim. Sinkhole and
misdirection attacks deliver nothing to the gateway either, so they look
identical from this side of the radio.
"""

from agrimon.core import MS, AlertKind
from agrimon.nodesim import AttackKind, AttackScenario
from agrimon.runner import SimulationRun, default_config

drip = AttackScenario(
    kind=AttackKind.SELECTIVE_FORWARDING,
    start_at=100 * MS,
    end_at=160 * MS,
    params={"drop_probability": 0.5},
    name="drip",
)
hole = AttackScenario(
    kind=AttackKind.BLACK_HOLE,
    start_at=250 * MS,
    end_at=400 * MS,
    name="hole",
)

sim = SimulationRun(default_config(), [drip, hole])
report = sim.run(duration_s=400)
print(report.to_table())

losses = sim.store.query_alerts(kind=AlertKind.DATA_LOSS_SUSPECTED)
print(f"\nvolume-drop alerts at: {[f'{a.detected_at / MS:.0f}s' for a in losses]}")

stale = sim.store.query_alerts(kind=AlertKind.STALE_DATA)
first_stale = stale[0]
print(f"black hole began at t=250s; StaleData for {first_stale.node_id!r} "
      f"at t={first_stale.detected_at / MS:.0f}s (timeout 60s)")
