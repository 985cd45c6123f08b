"""Why uniform-window connectivity cannot be dropped.

Disconnect the followers for windows whose length keeps doubling while the
leaders drift away at unit speed per coordinate.  The error then grows by
(at least) the window length during every blackout, so no fixed envelope of
the decay-plus-gain form can hold: the sup-norm envelope check must fail.
"""

import numpy as np

from hullswarm import compute_metrics, make_counterexample, simulate_scenario
from hullswarm.sim_cli import main as hullswarm_cli

sc = make_counterexample(n=3, k=2, d=2, windows=5)
traj = simulate_scenario(sc)
metrics = compute_metrics(traj, sc.spec)

print("scenario:", sc.name)
print("leader hull: the single point (1 + t, 1 + t); followers start at 0")
print("\nerror growth across the disconnected windows:")
for lo, hi in sc.meta["disconnected_windows"]:
    d_lo = metrics.dist[int(np.argmin(np.abs(metrics.times - lo)))]
    d_hi = metrics.dist[int(np.argmin(np.abs(metrics.times - hi)))]
    print(f"  blackout [{lo:6.2f}, {hi:6.2f})  length {hi - lo:5.2f}  "
          f"error {d_lo:7.3f} -> {d_hi:7.3f}  (+{d_hi - d_lo:.3f})")

print("\ndriving the command-line runner; the envelope check must fail:")
code = hullswarm_cli([
    "--scenario", "counterexample", "--n", "3", "--k", "2", "--d", "2",
    "--check", "siss", "--out", "demo_counterexample_out",
])
print("exit code:", code, "(2 = a requested check failed)")
