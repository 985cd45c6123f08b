"""Numerical integration of the coupled leader/follower dynamics.

Leaders move under exogenous inputs, ``dy_i/dt = u_i(y, t)``.  Each follower
relaxes toward its in-neighbors and connected leaders with state- and
time-dependent positive weights, plus an additive disturbance:

    dx_i/dt = sum_j a_ij(x, y, t) (x_j - x_i)
            + sum_j b_ij(x, y, t) (y_j - x_i) + w_i(t)

with the neighbor sets read from the switching schedule.  Integration is
fixed-step RK4 with substeps split at switching instants so that no step
straddles a topology change; within a substep the graph frozen at the
substep's start time is used for all four stages, while inputs and weights
are evaluated at the exact stage times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivergenceError, InvalidInputError, WeightBoundError
from .topology import Digraph, SwitchingSchedule

__all__ = [
    "WeightBounds",
    "SystemSpec",
    "Trajectory",
    "derivative",
    "simulate",
    "default_dt",
    "trajectory_to_csv",
    "trajectory_from_csv",
    "constant_weight",
    "distance_follower_weight",
    "distance_leader_weight",
    "periodic_weight",
]


@dataclass(frozen=True)
class WeightBounds:
    """Admissible range for the coupling weights: ``a`` two-sided, ``b`` below."""

    a_lo: float
    a_hi: float
    b_lo: float

    def __post_init__(self):
        if not 0 < self.a_lo <= self.a_hi:
            raise InvalidInputError("need 0 < a_lo <= a_hi")
        if self.b_lo <= 0:
            raise InvalidInputError("need b_lo > 0")


@dataclass
class SystemSpec:
    """Complete description of one closed-loop system instance.

    Weight callables receive ``(i, j, x, y, t)`` with 1-based agent indices
    and the full state arrays; every evaluation is checked against
    ``bounds``.  ``leader_input_u(i, y, t)`` and ``disturbance_w(i, t)``
    return length-``d`` vectors.
    """

    n: int
    k: int
    d: int
    bounds: WeightBounds
    weight_fn_a: Callable
    weight_fn_b: Callable
    leader_input_u: Callable
    disturbance_w: Callable
    schedule: SwitchingSchedule

    def __post_init__(self):
        if (self.schedule.n, self.schedule.k) != (self.n, self.k):
            raise InvalidInputError("schedule (n, k) does not match the system")
        if min(self.n, self.k, self.d) < 1:
            raise InvalidInputError("n, k, d must all be positive")


@dataclass
class Trajectory:
    """Sampled states: ``x`` is (m, n, d), ``y`` is (m, k, d), times (m,)."""

    times: np.ndarray
    x: np.ndarray
    y: np.ndarray
    dt: float


def default_dt(tau_D: float) -> float:
    """Default step size: resolves every dwell interval with >= 20 steps."""
    return min(tau_D / 20.0, 1e-2)


def _checked_weight_a(spec, i, j, x, y, t):
    a = float(spec.weight_fn_a(i, j, x, y, t))
    if not (spec.bounds.a_lo - 1e-12 <= a <= spec.bounds.a_hi + 1e-12):
        raise WeightBoundError("a", i, j, t, a, spec.bounds.a_lo, spec.bounds.a_hi)
    return a


def _checked_weight_b(spec, i, j, x, y, t):
    b = float(spec.weight_fn_b(i, j, x, y, t))
    if b < spec.bounds.b_lo - 1e-12:
        raise WeightBoundError("b", i, j, t, b, spec.bounds.b_lo)
    return b


def _rhs(spec: SystemSpec, graph: Digraph, x, y, t):
    dy = np.empty_like(y)
    for j in range(1, spec.k + 1):
        dy[j - 1] = np.asarray(spec.leader_input_u(j, y, t), dtype=float)
    dx = np.empty_like(x)
    for i in range(1, spec.n + 1):
        xi = x[i - 1]
        acc = np.array(spec.disturbance_w(i, t), dtype=float, copy=True)
        for j in graph.follower_sources(i):
            acc += _checked_weight_a(spec, i, j, x, y, t) * (x[j - 1] - xi)
        for j in graph.leader_sources(i):
            acc += _checked_weight_b(spec, i, j, x, y, t) * (y[j - 1] - xi)
        dx[i - 1] = acc
    return dx, dy


def derivative(spec: SystemSpec, x, y, t: float):
    """Right-hand side at time ``t`` under the graph active at ``t``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (spec.n, spec.d) or y.shape != (spec.k, spec.d):
        raise InvalidInputError("state arrays must be (n, d) and (k, d)")
    return _rhs(spec, spec.schedule.graph_at(t), x, y, t)


def _rk4_step(spec, graph, x, y, t, h):
    k1x, k1y = _rhs(spec, graph, x, y, t)
    k2x, k2y = _rhs(spec, graph, x + 0.5 * h * k1x, y + 0.5 * h * k1y, t + 0.5 * h)
    k3x, k3y = _rhs(spec, graph, x + 0.5 * h * k2x, y + 0.5 * h * k2y, t + 0.5 * h)
    k4x, k4y = _rhs(spec, graph, x + h * k3x, y + h * k3y, t + h)
    x_new = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    y_new = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
    return x_new, y_new


def simulate(spec: SystemSpec, x0, y0, dt: float, t_end: float) -> Trajectory:
    """Integrate from t=0 to ``t_end`` with nominal step ``dt``.

    Substeps are clipped at switching instants and at ``t_end``; states are
    recorded at every substep boundary.  Raises on nonfinite states, naming
    the first offending time.
    """
    x = np.array(x0, dtype=float)
    y = np.array(y0, dtype=float)
    if x.shape != (spec.n, spec.d) or y.shape != (spec.k, spec.d):
        raise InvalidInputError("initial arrays must be (n, d) and (k, d)")
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    if not 0 < t_end <= spec.schedule.horizon + 1e-9:
        raise InvalidInputError("t_end must lie in (0, horizon]")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise InvalidInputError("nonfinite initial state")

    seg_ends = [s for s in spec.schedule.starts if 1e-12 < s < t_end - 1e-12]
    seg_ends.append(float(t_end))

    times = [0.0]
    xs = [x.copy()]
    ys = [y.copy()]
    t = 0.0
    for seg_end in seg_ends:
        graph = spec.schedule.graph_at(t)
        nsteps = max(1, math.ceil((seg_end - t) / dt - 1e-9))
        seg_start = t
        for step in range(1, nsteps + 1):
            t_next = seg_end if step == nsteps else seg_start + step * dt
            h = t_next - t
            x, y = _rk4_step(spec, graph, x, y, t, h)
            if not (np.isfinite(x).all() and np.isfinite(y).all()):
                raise DivergenceError(t_next)
            t = t_next
            times.append(t)
            xs.append(x.copy())
            ys.append(y.copy())
    return Trajectory(
        times=np.array(times), x=np.array(xs), y=np.array(ys), dt=float(dt)
    )


def _csv_header(n, k, d):
    cols = ["t"]
    cols += [f"x_{i}_{c}" for i in range(1, n + 1) for c in range(1, d + 1)]
    cols += [f"y_{j}_{c}" for j in range(1, k + 1) for c in range(1, d + 1)]
    return ",".join(cols)


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """Write samples with 17 significant digits so doubles round-trip exactly."""
    m, n, d = traj.x.shape
    k = traj.y.shape[1]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_csv_header(n, k, d) + "\n")
        for idx in range(m):
            row = [traj.times[idx]]
            row += traj.x[idx].reshape(-1).tolist()
            row += traj.y[idx].reshape(-1).tolist()
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def trajectory_from_csv(path) -> Trajectory:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [list(map(float, line.split(","))) for line in fh if line.strip()]
    x_cols = [c for c in header if c.startswith("x_")]
    y_cols = [c for c in header if c.startswith("y_")]
    if not rows or header[0] != "t" or not x_cols or not y_cols:
        raise InvalidInputError(f"malformed trajectory file {path}")
    d = max(int(c.split("_")[2]) for c in x_cols)
    n = max(int(c.split("_")[1]) for c in x_cols)
    k = max(int(c.split("_")[1]) for c in y_cols)
    data = np.array(rows)
    times = data[:, 0]
    x = data[:, 1 : 1 + n * d].reshape(-1, n, d)
    y = data[:, 1 + n * d : 1 + (n + k) * d].reshape(-1, k, d)
    dt = float(np.median(np.diff(times))) if len(times) > 1 else 0.0
    return Trajectory(times=times, x=x, y=y, dt=dt)


def constant_weight(value: float) -> Callable:
    """Weight function that ignores its arguments."""

    def fn(i, j, x, y, t):
        return value

    return fn


def distance_follower_weight(a_lo: float, a_hi: float) -> Callable:
    """State-dependent follower weight ``a_lo + (a_hi - a_lo) exp(-|x_i - x_j|^2)``."""

    def fn(i, j, x, y, t):
        gap = x[i - 1] - x[j - 1]
        return a_lo + (a_hi - a_lo) * math.exp(-float(gap @ gap))

    return fn


def distance_leader_weight(b_lo: float, b_amp: float) -> Callable:
    """State-dependent leader weight ``b_lo + b_amp * exp(-|x_i - y_j|^2)``."""

    def fn(i, j, x, y, t):
        gap = x[i - 1] - y[j - 1]
        return b_lo + b_amp * math.exp(-float(gap @ gap))

    return fn


def periodic_weight(lo: float, hi: float, period: float) -> Callable:
    """Time-periodic weight sweeping [lo, hi] sinusoidally."""

    def fn(i, j, x, y, t):
        mid, amp = 0.5 * (lo + hi), 0.5 * (hi - lo)
        return mid + amp * math.sin(2.0 * math.pi * t / period)

    return fn
