"""A quiet day in the field.

One simulated node reports temperature and humidity every second and its GPS
position every 20 seconds. Nothing attacks it, so the volume windows stay
balanced, the rate of change hugs zero, and the alert log stays empty.
"""

from agrimon.detect import window_stats
from agrimon.runner import SimulationRun, default_config

sim = SimulationRun(default_config(), scenarios=[])
report = sim.run(duration_s=300)

print(report.to_table())

stats = window_stats(sim.store, sim.clock.now(), sim.config.detector)
print(f"final windows: recent={stats.recent_count} prior={stats.prior_count} "
      f"rate={stats.rate_of_change:+.3f}")
print(f"trend tail (last 10s): {list(stats.trend[-10:])}")
assert report.alert_counts == {}, "a benign run should never alert"
print("no alerts, as it should be")
