"""Time-varying directed interaction topologies over followers and leaders.

A ``Digraph`` couples ``n`` followers and ``k`` leaders with directed arcs;
information never flows from a follower into a leader.  A
``SwitchingSchedule`` is a piecewise-constant map from time to digraphs with
a positive dwell time between switches.  Connectivity queries (reachability
from the leader set, windowed unions, uniform-window classification) are the
basis for every convergence guarantee in the rest of the package.

Agent indices are 1-based throughout, matching the convention used for the
state arrays (follower ``i`` lives in row ``i - 1``).
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import CertificateError, InvalidInputError

__all__ = [
    "FOLLOWER",
    "LEADER",
    "Agent",
    "follower",
    "leader",
    "Digraph",
    "SwitchingSchedule",
    "ConnectivityReport",
    "union_graph",
    "is_l_connected",
    "classify_ujlc",
    "classify_jlc",
    "ujlc_witness",
    "persistent_paths",
    "acyclic_partition",
    "is_bidirectional",
    "union_acyclic",
    "connectivity_report",
    "schedule_to_json",
    "schedule_from_json",
    "save_schedule",
    "load_schedule",
]

FOLLOWER = "F"
LEADER = "L"


class Agent(NamedTuple):
    kind: str
    index: int


def follower(i: int) -> Agent:
    return Agent(FOLLOWER, i)


def leader(j: int) -> Agent:
    return Agent(LEADER, j)


@dataclass(frozen=True)
class Digraph:
    """Directed interaction graph over ``n`` followers and ``k`` leaders."""

    n: int
    k: int
    arcs: frozenset

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise InvalidInputError("need at least one follower and one leader")
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        for src, dst in self.arcs:
            for agent in (src, dst):
                if agent.kind not in (FOLLOWER, LEADER):
                    raise InvalidInputError(f"unknown agent kind {agent.kind!r}")
                top = self.n if agent.kind == FOLLOWER else self.k
                if not 1 <= agent.index <= top:
                    raise InvalidInputError(f"agent index out of range: {agent}")
            if src == dst:
                raise InvalidInputError(f"self-loop at {src}")
            if dst.kind == LEADER and src.kind == FOLLOWER:
                raise InvalidInputError(f"arc {src} -> {dst} enters a leader")

    @cached_property
    def _in_lists(self):
        """Per follower: sorted follower sources and sorted leader sources."""
        from_followers = {i: [] for i in range(1, self.n + 1)}
        from_leaders = {i: [] for i in range(1, self.n + 1)}
        for src, dst in self.arcs:
            if dst.kind != FOLLOWER:
                continue
            if src.kind == FOLLOWER:
                from_followers[dst.index].append(src.index)
            else:
                from_leaders[dst.index].append(src.index)
        return {
            i: (tuple(sorted(from_followers[i])), tuple(sorted(from_leaders[i])))
            for i in range(1, self.n + 1)
        }

    def follower_sources(self, i: int) -> tuple:
        """Indices of followers with an arc into follower ``i``."""
        return self._in_lists[i][0]

    def leader_sources(self, i: int) -> tuple:
        """Indices of leaders with an arc into follower ``i``."""
        return self._in_lists[i][1]

    @cached_property
    def _out_map(self):
        out = {}
        for src, dst in self.arcs:
            out.setdefault(src, []).append(dst)
        return {src: sorted(dsts) for src, dsts in out.items()}

    def union(self, other: "Digraph") -> "Digraph":
        if (self.n, self.k) != (other.n, other.k):
            raise InvalidInputError("graphs must share (n, k) to be merged")
        return Digraph(self.n, self.k, self.arcs | other.arcs)


def is_l_connected(g: Digraph) -> bool:
    """True iff every follower is reachable from at least one leader."""
    frontier = [leader(j) for j in range(1, g.k + 1)]
    seen = set(frontier)
    while frontier:
        nxt = []
        for node in frontier:
            for dst in g._out_map.get(node, ()):
                if dst not in seen:
                    seen.add(dst)
                    nxt.append(dst)
        frontier = nxt
    return all(follower(i) in seen for i in range(1, g.n + 1))


@dataclass(frozen=True)
class SwitchingSchedule:
    """Piecewise-constant digraph sequence on [0, horizon).

    ``pieces`` maps strictly increasing start times (first one 0.0) to the
    graph active until the next start; the last piece runs to ``horizon``.
    Consecutive starts are at least ``tau_D`` apart.
    """

    pieces: tuple
    horizon: float
    tau_D: float

    def __post_init__(self):
        pieces = tuple((float(s), g) for s, g in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise InvalidInputError("schedule needs at least one piece")
        if self.tau_D <= 0:
            raise InvalidInputError("dwell time must be positive")
        starts = [s for s, _ in pieces]
        if starts[0] != 0.0:
            raise InvalidInputError("first piece must start at t=0")
        gaps = np.diff(starts)
        if len(gaps) and gaps.min() < self.tau_D - 1e-9:
            raise InvalidInputError("consecutive switch gaps must be >= tau_D")
        if self.horizon <= starts[-1]:
            raise InvalidInputError("horizon must exceed the last start time")
        shapes = {(g.n, g.k) for _, g in pieces}
        if len(shapes) != 1:
            raise InvalidInputError("all pieces must share (n, k)")

    @property
    def n(self) -> int:
        return self.pieces[0][1].n

    @property
    def k(self) -> int:
        return self.pieces[0][1].k

    @cached_property
    def starts(self) -> np.ndarray:
        return np.array([s for s, _ in self.pieces])

    @cached_property
    def _start_list(self) -> list:
        return [s for s, _ in self.pieces]

    def piece_index(self, t: float) -> int:
        if t < -1e-12 or t > self.horizon + 1e-12:
            raise InvalidInputError(f"time {t} outside [0, {self.horizon}]")
        return max(0, bisect_right(self._start_list, t + 1e-15) - 1)

    def graph_at(self, t: float) -> Digraph:
        return self.pieces[self.piece_index(t)][1]

    def piece_interval(self, idx: int) -> tuple[float, float]:
        start = self.pieces[idx][0]
        end = self.pieces[idx + 1][0] if idx + 1 < len(self.pieces) else self.horizon
        return start, end


def union_graph(schedule: SwitchingSchedule, t1: float, t2: float) -> Digraph:
    """Union of all graphs active at some time in [t1, t2)."""
    if not (-1e-12 <= t1 < t2 <= schedule.horizon + 1e-12):
        raise InvalidInputError(
            f"interval [{t1}, {t2}) outside schedule horizon {schedule.horizon}"
        )
    arcs = set()
    for idx in range(len(schedule.pieces)):
        start, end = schedule.piece_interval(idx)
        if start < t2 and end > t1:
            arcs |= schedule.pieces[idx][1].arcs
    return Digraph(schedule.n, schedule.k, frozenset(arcs))


def classify_ujlc(schedule: SwitchingSchedule, T: float) -> bool:
    """Uniform-window connectivity on the schedule's horizon.

    True iff the union over every window [t, t+T) with t a piece start and
    t + T <= horizon is leader-connected.  Checking starts only at piece
    boundaries is exact: shifting the window start within a piece can only
    add pieces at the far end, so the boundary window's union is minimal.
    """
    if T <= 0:
        raise InvalidInputError("window length must be positive")
    if T >= schedule.horizon:
        raise InvalidInputError("window length must be smaller than the horizon")
    for t in schedule.starts:
        if t + T <= schedule.horizon + 1e-12:
            if not is_l_connected(union_graph(schedule, t, t + T)):
                return False
    return True


def classify_jlc(schedule: SwitchingSchedule) -> bool:
    """Finite-horizon joint connectivity.

    True iff the union from every piece start to the horizon is
    leader-connected.  This is the on-horizon restriction of the
    unbounded-interval condition; content beyond the horizon is unknowable
    from finite data and deliberately not extrapolated.
    """
    return all(
        is_l_connected(union_graph(schedule, t, schedule.horizon))
        for t in schedule.starts
    )


def ujlc_witness(schedule: SwitchingSchedule, candidates=None):
    """Smallest tested window length for which the schedule is uniformly joint
    leader-connected, or ``None``.

    A witness is only reported when the schedule is also jointly connected on
    the horizon, so a witness always implies the weaker property.  Candidates
    default to the pairwise differences of piece boundaries (union content
    can only change there).
    """
    if not classify_jlc(schedule):
        return None
    if candidates is None:
        marks = list(schedule.starts) + [schedule.horizon]
        deltas = sorted(
            {round(b - a, 12) for a in marks for b in marks if b - a > 1e-12}
        )
        candidates = [d for d in deltas if d < schedule.horizon]
    else:
        candidates = sorted(c for c in candidates if 0 < c < schedule.horizon)
    if not candidates:
        return None
    # classify_ujlc is monotone in T, so binary search over the ladder.
    lo, hi = 0, len(candidates) - 1
    if not classify_ujlc(schedule, candidates[hi]):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if classify_ujlc(schedule, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _arc_presence_intervals(schedule, arc, t1, t2):
    """Maximal intervals inside [t1, t2) during which ``arc`` is present.

    Presence in consecutive pieces is merged across the boundary.
    """
    intervals = []
    for idx in range(len(schedule.pieces)):
        start, end = schedule.piece_interval(idx)
        if end <= t1 or start >= t2:
            continue
        if arc in schedule.pieces[idx][1].arcs:
            lo, hi = max(start, t1), min(end, t2)
            if intervals and abs(intervals[-1][1] - lo) < 1e-12:
                intervals[-1] = (intervals[-1][0], hi)
            else:
                intervals.append((lo, hi))
    return intervals


def persistent_paths(schedule: SwitchingSchedule, t: float, T: float) -> dict:
    """Leader-to-follower paths with per-arc dwell inside [t, t + T + 2*tau_D).

    For each follower returns a list of ``(src, dst, (lo, hi))`` arcs forming
    a path from some leader, each arc being continuously present on
    ``(lo, hi)`` with ``hi - lo >= tau_D``.  Under uniform-window
    connectivity with window ``T`` such paths always exist; a missing one is
    reported as a certificate failure naming the follower.
    """
    window_end = t + T + 2.0 * schedule.tau_D
    if T <= 0:
        raise InvalidInputError("window length must be positive")
    if t < -1e-12 or window_end > schedule.horizon + 1e-9:
        raise InvalidInputError("window [t, t + T + 2*tau_D) must fit in the horizon")

    union = union_graph(schedule, t, window_end)
    durable = {}
    for arc in sorted(union.arcs):
        for lo, hi in _arc_presence_intervals(schedule, arc, t, window_end):
            if hi - lo >= schedule.tau_D - 1e-9:
                durable[arc] = (lo, hi)
                break

    parent = {}
    seen = {leader(j) for j in range(1, schedule.k + 1)}
    grew = True
    while grew:  # fixpoint over the durable-arc graph, deterministic order
        grew = False
        for (src, dst), span in sorted(durable.items()):
            if src in seen and dst not in seen:
                seen.add(dst)
                parent[dst] = (src, span)
                grew = True

    paths = {}
    for i in range(1, schedule.n + 1):
        node = follower(i)
        if node not in parent:
            raise CertificateError(
                f"no durable leader path reaches follower {i} in "
                f"[{t}, {window_end})"
            )
        chain = []
        while node.kind == FOLLOWER:
            src, span = parent[node]
            chain.append((src, node, span))
            node = src
        paths[i] = list(reversed(chain))
    return paths


def acyclic_partition(g: Digraph) -> list:
    """Layer the followers of an acyclic, leader-connected graph.

    Layer 1 holds followers fed only by leaders; every arc into layer ``j``
    originates from a leader or an earlier layer.  Followers are sorted
    within a layer.  Raises on a cyclic follower subgraph or a graph that is
    not leader-connected.
    """
    if not is_l_connected(g):
        raise InvalidInputError("graph is not leader-connected")
    preds = {i: set(g.follower_sources(i)) for i in range(1, g.n + 1)}
    depth = {}
    remaining = set(preds)
    while remaining:
        ready = sorted(
            i for i in remaining if all(p in depth for p in preds[i])
        )
        if not ready:
            raise InvalidInputError("follower subgraph contains a cycle")
        for i in ready:
            depth[i] = max((depth[p] + 1 for p in preds[i]), default=0)
            remaining.discard(i)
    layers = []
    for i in sorted(depth):
        while len(layers) <= depth[i]:
            layers.append([])
        layers[depth[i]].append(i)
    return layers


def is_bidirectional(g: Digraph) -> bool:
    """True iff every follower-follower arc has its reverse in the same graph."""
    for src, dst in g.arcs:
        if src.kind == FOLLOWER and dst.kind == FOLLOWER:
            if (dst, src) not in g.arcs:
                return False
    return True


def union_acyclic(schedule: SwitchingSchedule) -> bool:
    """True iff the follower subgraph of the whole-horizon union is acyclic."""
    union = union_graph(schedule, 0.0, schedule.horizon)
    preds = {i: set(union.follower_sources(i)) for i in range(1, union.n + 1)}
    resolved = set()
    while True:
        ready = [i for i in preds if i not in resolved and preds[i] <= resolved]
        if not ready:
            return len(resolved) == len(preds)
        resolved.update(ready)


@dataclass(frozen=True)
class ConnectivityReport:
    """Summary of a schedule's connectivity classification."""

    l_connected_per_piece: tuple
    is_jlc_on_horizon: bool
    ujlc_witness_T: float | None
    is_bidirectional: bool
    is_union_acyclic: bool


def connectivity_report(schedule: SwitchingSchedule) -> ConnectivityReport:
    return ConnectivityReport(
        l_connected_per_piece=tuple(
            is_l_connected(g) for _, g in schedule.pieces
        ),
        is_jlc_on_horizon=classify_jlc(schedule),
        ujlc_witness_T=ujlc_witness(schedule),
        is_bidirectional=all(is_bidirectional(g) for _, g in schedule.pieces),
        is_union_acyclic=union_acyclic(schedule),
    )


def schedule_to_json(schedule: SwitchingSchedule) -> dict:
    return {
        "n": schedule.n,
        "k": schedule.k,
        "tau_d": schedule.tau_D,
        "horizon": schedule.horizon,
        "pieces": [
            {
                "start_time": start,
                "arcs": sorted(
                    [src.kind, src.index, dst.kind, dst.index]
                    for src, dst in g.arcs
                ),
            }
            for start, g in schedule.pieces
        ],
    }


def schedule_from_json(data: dict) -> SwitchingSchedule:
    try:
        n, k = int(data["n"]), int(data["k"])
        pieces = []
        for piece in data["pieces"]:
            arcs = frozenset(
                (Agent(sk, int(si)), Agent(dk, int(di)))
                for sk, si, dk, di in piece["arcs"]
            )
            pieces.append((float(piece["start_time"]), Digraph(n, k, arcs)))
        return SwitchingSchedule(
            pieces=tuple(pieces),
            horizon=float(data["horizon"]),
            tau_D=float(data["tau_d"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed schedule document: {exc}") from exc


def save_schedule(schedule: SwitchingSchedule, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(schedule_to_json(schedule), fh, indent=2)
        fh.write("\n")


def load_schedule(path) -> SwitchingSchedule:
    with open(path, encoding="utf-8") as fh:
        return schedule_from_json(json.load(fh))
