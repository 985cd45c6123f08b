"""Classifying switching communication topologies.

A schedule is a piecewise-constant sequence of digraphs over followers and
leaders.  Three nested connectivity classes matter for tracking guarantees:

  * uniform-window (every window of some fixed length T is leader-connected),
  * joint-on-horizon (every suffix union is leader-connected),
  * neither (some follower is eventually cut off for good).

This script builds one schedule of each kind and runs the classifiers.
"""

from hullswarm import (
    Digraph,
    SwitchingSchedule,
    classify_jlc,
    classify_ujlc,
    connectivity_report,
    follower,
    leader,
    persistent_paths,
    ujlc_witness,
)

n, k = 2, 1
g_leader = Digraph(n, k, frozenset([(leader(1), follower(1))]))
g_relay = Digraph(n, k, frozenset([(follower(1), follower(2))]))
g_both = g_leader.union(g_relay)
g_idle = Digraph(n, k, frozenset())

# 1) Alternate the leader arc and the relay arc once per second.  Neither
#    graph alone reaches follower 2, but any two-second window does.
pieces = [(float(t), (g_leader, g_relay)[t % 2]) for t in range(11)]
pieces.append((11.0, g_both))  # keep the last suffix connected
rotating = SwitchingSchedule(tuple(pieces), horizon=12.0, tau_D=1.0)
print("rotating:  uniform with T=2:", classify_ujlc(rotating, 2.0),
      "| uniform with T=0.5:", classify_ujlc(rotating, 0.5),
      "| joint on horizon:", classify_jlc(rotating),
      "| smallest tested window:", ujlc_witness(rotating))

# Durable relay paths: each arc on the path persists a full dwell time.
paths = persistent_paths(rotating, t=0.0, T=2.0)
for i, path in paths.items():
    hops = " -> ".join([path[0][0].kind + str(path[0][0].index)]
                       + [f"F{dst.index}" for _, dst, _ in path])
    spans = ", ".join(f"[{lo:.0f},{hi:.0f})" for _, _, (lo, hi) in path)
    print(f"  follower {i}: {hops}   arc dwell spans {spans}")

# 2) Insert idle stretches that double in length: every fixed window
#    eventually fails, but each suffix still sees a connected burst.
pieces, t = [], 0.0
for m in range(4):
    pieces.append((t, g_both))
    t += 1.0
    pieces.append((t, g_idle))
    t += 2.0 ** (m + 1)
pieces.append((t, g_both))
bursty = SwitchingSchedule(tuple(pieces), horizon=t + 1.0, tau_D=1.0)
print("\nbursty:    joint on horizon:", classify_jlc(bursty),
      "| uniform with T=8:", classify_ujlc(bursty, 8.0),
      "| uniform with T=17:", classify_ujlc(bursty, 17.0))

# 3) Cut follower 2 off forever after t=1: not even jointly connected.
severed = SwitchingSchedule(
    ((0.0, g_both), (1.0, g_leader)), horizon=4.0, tau_D=1.0
)
print("severed:   joint on horizon:", classify_jlc(severed))

print("\nfull report for the bursty schedule:")
print(" ", connectivity_report(bursty))
