"""Verifying every certified bound along simulated trajectories.

For a batch of scenarios this script runs the sampled checks: the growth
rate of the error against the input rate, the norm sandwich between the
aggregate and per-agent input sizes, and the sup-norm / integral error
envelopes appropriate to each connectivity class.
"""

from hullswarm import (
    build_certificates,
    check_dini_bound,
    check_input_norm_sandwich,
    compute_metrics,
    make_jlc_acyclic,
    make_jlc_bidirectional,
    make_ujlc,
    simulate_scenario,
    verify_siiss_marks,
    verify_siss,
)
from hullswarm.analysis import ujlc_siiss_envelope, verify_siiss


def banner(verdict):
    return "holds" if verdict.holds else "VIOLATED"


scenarios = [
    make_ujlc(4, 2, 2, T=1.0, tau_D=0.25, seed=8, input_family="c1", scale=0.5),
    make_ujlc(3, 2, 2, T=0.75, tau_D=0.25, seed=6, input_family="bounded", scale=0.4),
    make_jlc_bidirectional(3, 2, 2, tau_D=0.5, seed=12),
    make_jlc_acyclic(4, 2, 2, tau_D=0.5, seed=16),
]

for sc in scenarios:
    traj = simulate_scenario(sc)
    metrics = compute_metrics(traj, sc.spec)
    print(f"\n{sc.name}  (initial error {metrics.dist[0]:.2f}, "
          f"final {metrics.dist[-1]:.2e})")
    print("  error growth rate bound:",
          banner(check_dini_bound(metrics)))
    print("  input norm sandwich:    ",
          banner(check_input_norm_sandwich(metrics, sc.spec.n, sc.spec.k)))
    tau = sc.spec.schedule.tau_D
    if sc.ujlc_T is not None:
        bundle = build_certificates(sc.spec.bounds, sc.spec.n, tau, sc.ujlc_T)
        siss = verify_siss(traj, sc.spec, bundle, z_sup=sc.inputs.z_sup,
                           metrics=metrics)
        print(f"  sup-norm envelope:       {banner(siss)} "
              f"(min margin {siss.margin_series.min():.3g})")
        siiss = verify_siiss(traj, sc.spec, ujlc_siiss_envelope(bundle),
                             z_integral_fn=sc.inputs.z_integral, metrics=metrics)
        print(f"  integral envelope:       {banner(siiss)}")
    else:
        kind = sc.meta["kind"]
        bundle = build_certificates(sc.spec.bounds, sc.spec.n, tau, T=1.0)
        marks = verify_siiss_marks(traj, sc.spec, bundle.delta_hat, sc.marks,
                                   kind, z_integral_fn=sc.inputs.z_integral,
                                   metrics=metrics)
        print(f"  mark-recursion envelope: {banner(marks)} "
              f"({kind}, contraction deficit {1.0 - bundle.delta_hat:.3g}, "
              f"{len(sc.marks) - 1} intervals)")
