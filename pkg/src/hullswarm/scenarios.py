"""Reproducible scenario generators, one family per connectivity class.

Each generator assembles a full system (schedule, weights, inputs, initial
states) and self-checks at construction that the schedule really belongs to
the class its name claims.  All generators are deterministic under a fixed
seed.

Input families
--------------
``zero``     no leader motion, no disturbance.
``bounded``  sinusoidal inputs with a known sup-norm.
``c1``       exponentially decaying inputs; the input norm is integrable.
``c2``       inputs decaying like 1/(1+t); vanishing but *not* integrable.
``drift``    constant unit drift on every leader (used by the divergence
             counterexample).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dynamics import (
    SystemSpec,
    Trajectory,
    WeightBounds,
    constant_weight,
    default_dt,
    distance_follower_weight,
    distance_leader_weight,
    simulate,
)
from .errors import CertificateError, InvalidInputError
from .topology import (
    Digraph,
    SwitchingSchedule,
    classify_jlc,
    classify_ujlc,
    follower,
    is_bidirectional,
    is_l_connected,
    leader,
    schedule_from_json,
    schedule_to_json,
    union_acyclic,
    union_graph,
)

__all__ = [
    "InputFamily",
    "Scenario",
    "inputs_zero",
    "inputs_bounded",
    "make_inputs_c1",
    "make_inputs_c2",
    "inputs_drift",
    "make_ujlc",
    "make_counterexample",
    "make_jlc_bidirectional",
    "make_jlc_acyclic",
    "simulate_scenario",
    "suite",
    "scenario_to_json",
    "scenario_from_json",
    "save_scenario",
    "load_scenario",
]


@dataclass
class InputFamily:
    """Leader-input and disturbance callables plus their norm bookkeeping."""

    condition: str
    scale: float
    u: Callable
    w: Callable
    z_norm: Callable
    z_integral: Callable | None
    z_sup: float


def _unit(d: int) -> np.ndarray:
    return np.ones(d) / math.sqrt(d)


def inputs_zero(shape) -> InputFamily:
    n, k, d = shape
    zero = np.zeros(d)
    return InputFamily(
        condition="zero",
        scale=0.0,
        u=lambda i, y, t: zero,
        w=lambda i, t: zero,
        z_norm=lambda t: 0.0,
        z_integral=lambda t1, t2: 0.0,
        z_sup=0.0,
    )


def inputs_bounded(shape, scale: float, freq: float = 0.25) -> InputFamily:
    """Sinusoidal inputs with stacked norm at most ``scale`` at all times."""
    n, k, d = shape
    if scale < 0:
        raise InvalidInputError("scale must be nonnegative")
    per = scale / math.sqrt(n + k)
    e = _unit(d)
    omega = 2.0 * math.pi * freq

    def phase(idx):
        return idx * 2.0 * math.pi / (n + k + 1)

    def u(i, y, t):
        return per * math.cos(omega * t + phase(i)) * e

    def w(i, t):
        return per * math.cos(omega * t + phase(k + i)) * e

    def z_norm(t):
        total = sum(
            (per * math.cos(omega * t + phase(i))) ** 2 for i in range(1, k + 1)
        )
        total += sum(
            (per * math.cos(omega * t + phase(k + i))) ** 2 for i in range(1, n + 1)
        )
        return math.sqrt(total)

    return InputFamily(
        condition="bounded",
        scale=scale,
        u=u,
        w=w,
        z_norm=z_norm,
        z_integral=None,
        z_sup=scale,
    )


def make_inputs_c1(shape, scale: float) -> InputFamily:
    """Exponentially decaying inputs: ``|z(t)| = scale * exp(-t)``.

    Integrable over the whole half-line with total mass ``scale``.
    """
    n, k, d = shape
    if scale < 0:
        raise InvalidInputError("scale must be nonnegative")
    per = scale / math.sqrt(n + k)
    e = _unit(d)
    return InputFamily(
        condition="c1",
        scale=scale,
        u=lambda i, y, t: per * math.exp(-t) * e,
        w=lambda i, t: per * math.exp(-t) * e,
        z_norm=lambda t: scale * math.exp(-t),
        z_integral=lambda t1, t2: scale * (math.exp(-t1) - math.exp(-t2)),
        z_sup=scale,
    )


def make_inputs_c2(shape, scale: float) -> InputFamily:
    """Slowly vanishing inputs: ``|z(t)| = scale / (1 + t)``.

    The norm tends to zero but its integral ``scale * log(1 + t)`` grows
    without bound, so this family vanishes without being integrable.
    """
    n, k, d = shape
    if scale < 0:
        raise InvalidInputError("scale must be nonnegative")
    per = scale / math.sqrt(n + k)
    e = _unit(d)
    return InputFamily(
        condition="c2",
        scale=scale,
        u=lambda i, y, t: per / (1.0 + t) * e,
        w=lambda i, t: per / (1.0 + t) * e,
        z_norm=lambda t: scale / (1.0 + t),
        z_integral=lambda t1, t2: scale * (math.log1p(t2) - math.log1p(t1)),
        z_sup=scale,
    )


def inputs_drift(shape, rate: float = 1.0) -> InputFamily:
    """Constant per-coordinate leader drift ``rate``; no disturbance."""
    n, k, d = shape
    vec = rate * np.ones(d)
    zero = np.zeros(d)
    norm = rate * math.sqrt(k * d)
    return InputFamily(
        condition="drift",
        scale=rate,
        u=lambda i, y, t: vec,
        w=lambda i, t: zero,
        z_norm=lambda t: norm,
        z_integral=lambda t1, t2: norm * (t2 - t1),
        z_sup=norm,
    )


_INPUT_FAMILIES = {
    "zero": lambda shape, scale: inputs_zero(shape),
    "bounded": inputs_bounded,
    "c1": make_inputs_c1,
    "c2": make_inputs_c2,
    "drift": lambda shape, scale: inputs_drift(shape, scale),
}


def _make_inputs(family: str, shape, scale: float) -> InputFamily:
    if family not in _INPUT_FAMILIES:
        raise InvalidInputError(f"unknown input family {family!r}")
    return _INPUT_FAMILIES[family](shape, scale)


def _make_weights(descriptor: dict, bounds: WeightBounds):
    kind = descriptor.get("kind", "constant")
    if kind == "constant":
        return (
            constant_weight(descriptor["a"]),
            constant_weight(descriptor["b"]),
        )
    if kind == "distance":
        return (
            distance_follower_weight(bounds.a_lo, bounds.a_hi),
            distance_leader_weight(bounds.b_lo, descriptor.get("b_amp", bounds.b_lo)),
        )
    raise InvalidInputError(f"unknown weight kind {kind!r}")


@dataclass
class Scenario:
    """A named, fully specified simulation setup."""

    name: str
    spec: SystemSpec
    x0: np.ndarray
    y0: np.ndarray
    horizon: float
    expected: str
    seed: int
    dt: float
    inputs: InputFamily
    ujlc_T: float | None = None
    marks: list | None = None
    meta: dict = field(default_factory=dict)


def simulate_scenario(sc: Scenario, dt: float | None = None) -> Trajectory:
    return simulate(sc.spec, sc.x0, sc.y0, dt or sc.dt, sc.horizon)


def _spec(n, k, d, bounds, weights_desc, fam, schedule):
    weight_a, weight_b = _make_weights(weights_desc, bounds)
    return SystemSpec(
        n=n,
        k=k,
        d=d,
        bounds=bounds,
        weight_fn_a=weight_a,
        weight_fn_b=weight_b,
        leader_input_u=fam.u,
        disturbance_w=fam.w,
        schedule=schedule,
    )


def _initial_states(rng, n, k, d, follower_radius=(1.5, 3.0), leader_radius=0.5):
    y0 = rng.uniform(-leader_radius, leader_radius, size=(k, d))
    center = y0.mean(axis=0)
    x0 = np.empty((n, d))
    for i in range(n):
        direction = rng.normal(size=d)
        direction /= max(np.linalg.norm(direction), 1e-12)
        x0[i] = center + rng.uniform(*follower_radius) * direction
    return x0, y0


def make_ujlc(
    n: int,
    k: int,
    d: int,
    T: float,
    tau_D: float,
    seed: int,
    input_family: str = "zero",
    scale: float = 0.0,
    horizon: float | None = None,
    bounds: WeightBounds | None = None,
    weights: str = "constant",
    rotating: bool = True,
) -> Scenario:
    """Uniform-window scenario: a leader-rooted spanning structure shown one
    arc per piece (rotating) or held constant.

    In the rotating form any window of length ``T = n * piece`` meets every
    arc, so ``T`` is a valid uniform window; this requires ``T >= n * tau_D``.
    """
    if n < 2 or k < 1 or d < 1:
        raise InvalidInputError("need n >= 2, k >= 1, d >= 1")
    rng = np.random.default_rng(seed)
    bounds = bounds or WeightBounds(0.5, 1.5, 1.0)
    T0 = T + 2.0 * tau_D
    T_star = n * T0
    horizon = float(horizon if horizon is not None else 2.5 * T_star)

    parents = {}
    for i in range(1, n + 1):
        pool = [leader(j) for j in range(1, k + 1)]
        if i > 1:
            pool += [follower(j) for j in range(1, i)]
        parents[i] = pool[int(rng.integers(len(pool)))]
    arcs = [(parents[i], follower(i)) for i in range(1, n + 1)]

    if rotating:
        if T < n * tau_D - 1e-12:
            raise InvalidInputError("rotating construction needs T >= n * tau_D")
        piece_len = T / n
        order = list(rng.permutation(n))
        pieces = []
        start, slot = 0.0, 0
        while start < horizon - 1e-12:
            arc = arcs[order[slot % n]]
            pieces.append((start, Digraph(n, k, frozenset([arc]))))
            start += piece_len
            slot += 1
        # close with the whole spanning structure so every suffix union on
        # the horizon stays leader-connected
        pieces[-1] = (pieces[-1][0], Digraph(n, k, frozenset(arcs)))
        schedule = SwitchingSchedule(tuple(pieces), horizon=horizon, tau_D=tau_D)
    else:
        graph = Digraph(n, k, frozenset(arcs))
        schedule = SwitchingSchedule(
            ((0.0, graph),), horizon=horizon, tau_D=tau_D
        )

    fam = _make_inputs(input_family, (n, k, d), scale)
    mid_a = 0.5 * (bounds.a_lo + bounds.a_hi)
    weights_desc = (
        {"kind": "constant", "a": mid_a, "b": bounds.b_lo}
        if weights == "constant"
        else {"kind": "distance", "b_amp": bounds.b_lo}
    )
    spec = _spec(n, k, d, bounds, weights_desc, fam, schedule)
    x0, y0 = _initial_states(rng, n, k, d)
    sc = Scenario(
        name=f"ujlc-{'rot' if rotating else 'static'}-n{n}k{k}d{d}-{input_family}-s{seed}",
        spec=spec,
        x0=x0,
        y0=y0,
        horizon=horizon,
        expected="siss",
        seed=seed,
        dt=default_dt(tau_D),
        inputs=fam,
        ujlc_T=float(T),
        meta={"weights": weights_desc, "input_family": input_family, "scale": scale},
    )
    if not classify_ujlc(schedule, T):
        raise CertificateError("constructed schedule failed its uniform-window check")
    return sc


def make_counterexample(
    n: int,
    k: int,
    d: int,
    windows: int = 5,
    window_growth: Callable | None = None,
    tau_D: float = 0.5,
    connect_len: float | None = None,
    drift: float = 1.0,
) -> Scenario:
    """Divergence scenario: disconnected windows of strictly growing length.

    Leaders drift one unit per coordinate per unit time while followers are
    cut off during windows whose length doubles by default; the tracking
    error grows past any fixed envelope.  Followers start at the origin,
    leaders at the all-ones point, so the hull is the single drifting point
    ``(1 + t, ..., 1 + t)``.
    """
    if n < 1 or k < 1 or d < 1:
        raise InvalidInputError("need n, k, d >= 1")
    growth = window_growth or (lambda kappa: tau_D * 2.0**kappa)
    lengths = [float(growth(kappa)) for kappa in range(1, windows + 1)]
    if any(b - a <= 0 for a, b in zip(lengths, lengths[1:])):
        raise InvalidInputError("window growth must be strictly increasing")
    if min(lengths) < tau_D:
        raise InvalidInputError("every window must last at least the dwell time")
    connect = float(connect_len if connect_len is not None else max(tau_D, 0.5))

    full = Digraph(
        n,
        k,
        frozenset(
            (leader(j), follower(i))
            for j in range(1, k + 1)
            for i in range(1, n + 1)
        ),
    )
    empty = Digraph(n, k, frozenset())

    pieces = [(0.0, full)]
    disconnected = []
    t = connect
    for kappa, length in enumerate(lengths, start=1):
        pieces.append((t, empty))
        disconnected.append([t, t + length])
        t += length
        if kappa < windows:
            pieces.append((t, full))
            t += connect
    horizon = t
    schedule = SwitchingSchedule(tuple(pieces), horizon=horizon, tau_D=tau_D)

    bounds = WeightBounds(0.5, 1.5, 1.0)
    fam = inputs_drift((n, k, d), drift)
    weights_desc = {"kind": "constant", "a": 1.0, "b": 1.0}
    spec = _spec(n, k, d, bounds, weights_desc, fam, schedule)
    sc = Scenario(
        name=f"counterexample-n{n}k{k}d{d}-w{windows}",
        spec=spec,
        x0=np.zeros((n, d)),
        y0=np.ones((k, d)),
        horizon=horizon,
        expected="divergence",
        seed=0,
        dt=default_dt(tau_D),
        inputs=fam,
        meta={
            "weights": weights_desc,
            "input_family": "drift",
            "scale": drift,
            "disconnected_windows": disconnected,
            "drift": drift,
            "windows": windows,
        },
    )
    if classify_jlc(schedule):
        raise CertificateError("counterexample schedule is unexpectedly connected")
    for lo, hi in disconnected:
        if is_l_connected(union_graph(schedule, lo, hi)):
            raise CertificateError("a disconnected window is leader-connected")
    return sc


def _jlc_connect_graph(rng, n, k, d, kind, isolated=None):
    """One leader-connected piece: direct leader arcs plus follower coupling."""
    arcs = set()
    active = [i for i in range(1, n + 1) if i != isolated]
    for i in active:
        arcs.add((leader(int(rng.integers(1, k + 1))), follower(i)))
    if len(active) >= 2:
        if kind == "bidirectional":
            for a, b in zip(active, active[1:]):
                if rng.random() < 0.75:
                    arcs.add((follower(a), follower(b)))
                    arcs.add((follower(b), follower(a)))
        else:  # acyclic: arcs only from lower to higher index
            for a, b in zip(active, active[1:]):
                if rng.random() < 0.75:
                    arcs.add((follower(a), follower(b)))
    return Digraph(n, k, frozenset(arcs))


def _make_jlc(
    n,
    k,
    d,
    tau_D,
    seed,
    kind,
    intervals,
    scale,
    input_family,
    disconnect_follower,
):
    if n < 2 or k < 1 or d < 1:
        raise InvalidInputError("need n >= 2, k >= 1, d >= 1")
    rng = np.random.default_rng(seed)
    connect = 2.0 * tau_D
    empty = Digraph(n, k, frozenset())

    pieces = []
    marks = [0.0]
    inner_marks = []
    t = 0.0
    # activity intervals: n leader-connected sub-windows each, with a rest
    # of doubling length closing every interval but the last
    for i in range(1, intervals + 1):
        inner = []
        for _ in range(n):
            inner.append(t)
            pieces.append(
                (t, _jlc_connect_graph(rng, n, k, d, kind, disconnect_follower))
            )
            t += connect
        inner_marks.append(inner)
        if i < intervals:
            pieces.append((t, empty))
            t += tau_D * 2.0**i
            marks.append(t)
        else:
            activity_end = t
    # one dominating rest (at least half the horizon), then a closing
    # leader-connected piece so every suffix union stays connected
    long_rest = activity_end + 2.0 * connect
    pieces.append((activity_end, empty))
    t = activity_end + long_rest
    pieces.append((t, _jlc_connect_graph(rng, n, k, d, kind, disconnect_follower)))
    horizon = t + connect
    marks.append(horizon)
    schedule = SwitchingSchedule(tuple(pieces), horizon=horizon, tau_D=tau_D)

    bounds = WeightBounds(0.5, 1.5, 1.0)
    fam = _make_inputs(input_family, (n, k, d), scale)
    weights_desc = {"kind": "constant", "a": 1.0, "b": 2.0}
    spec = _spec(n, k, d, bounds, weights_desc, fam, schedule)
    x0, y0 = _initial_states(rng, n, k, d, follower_radius=(2.0, 3.0))

    broken = disconnect_follower is not None
    sc = Scenario(
        name=(
            f"jlc-{kind}{'-broken' if broken else ''}-n{n}k{k}d{d}-"
            f"{input_family}-s{seed}"
        ),
        spec=spec,
        x0=x0,
        y0=y0,
        horizon=horizon,
        expected="divergence" if broken else "tracking",
        seed=seed,
        dt=default_dt(tau_D),
        inputs=fam,
        marks=marks,
        meta={
            "weights": weights_desc,
            "input_family": input_family,
            "scale": scale,
            "kind": kind,
            "rest_length": long_rest,
            "inner_marks": inner_marks,
            "disconnect_follower": disconnect_follower,
        },
    )
    _check_jlc_class(sc, schedule, kind, long_rest, marks, inner_marks, broken)
    return sc


def _check_jlc_class(sc, schedule, kind, rest, marks, inner_marks, broken):
    if kind == "bidirectional":
        if not all(is_bidirectional(g) for _, g in schedule.pieces):
            raise CertificateError("a piece is not bidirectional")
    else:
        if not union_acyclic(schedule):
            raise CertificateError("union follower graph is not acyclic")
    if broken:
        if classify_jlc(schedule):
            raise CertificateError("broken schedule is still jointly connected")
        return
    if not classify_jlc(schedule):
        raise CertificateError("schedule failed its joint-connectivity check")
    # long rest defeats every uniform window up to (at least) half the horizon
    if rest < schedule.horizon / 2.0 - 1e-9:
        raise CertificateError("dominating rest shorter than half the horizon")
    if classify_ujlc(schedule, rest):
        raise CertificateError("schedule is unexpectedly uniformly connected")
    # every inter-mark interval must split into leader-connected sub-windows
    for i in range(len(marks) - 1):
        windows = inner_marks[i] + [marks[i + 1]]
        for lo, hi in zip(windows, windows[1:]):
            if not is_l_connected(union_graph(schedule, lo, hi)):
                raise CertificateError("an inner sub-window is not leader-connected")


def make_jlc_bidirectional(
    n: int,
    k: int,
    d: int,
    tau_D: float,
    seed: int,
    intervals: int = 3,
    scale: float = 0.4,
    input_family: str = "c1",
    disconnect_follower: int | None = None,
) -> Scenario:
    """Jointly (not uniformly) connected schedule with paired follower arcs.

    Activity intervals each contain ``n`` leader-connected sub-windows; a
    rest covering at least half the horizon defeats every uniform window,
    and a closing connected piece keeps every suffix union connected.
    Setting ``disconnect_follower`` isolates that follower throughout,
    breaking joint connectivity (the negative control).
    """
    return _make_jlc(
        n, k, d, tau_D, seed, "bidirectional", intervals, scale, input_family,
        disconnect_follower,
    )


def make_jlc_acyclic(
    n: int,
    k: int,
    d: int,
    tau_D: float,
    seed: int,
    intervals: int = 3,
    scale: float = 0.4,
    input_family: str = "c1",
    disconnect_follower: int | None = None,
) -> Scenario:
    """Jointly (not uniformly) connected schedule whose follower arcs all run
    from lower to higher index, so the union follower graph is acyclic."""
    return _make_jlc(
        n, k, d, tau_D, seed, "acyclic", intervals, scale, input_family,
        disconnect_follower,
    )


_GENERATORS = {
    "ujlc": make_ujlc,
    "counterexample": make_counterexample,
    "jlc_bidirectional": make_jlc_bidirectional,
    "jlc_acyclic": make_jlc_acyclic,
}


def generator(name: str) -> Callable:
    if name not in _GENERATORS:
        raise InvalidInputError(
            f"unknown scenario {name!r}; choose from {sorted(_GENERATORS)}"
        )
    return _GENERATORS[name]


def suite() -> list:
    """The standing verification suite: one scenario per behavior regime."""
    scenarios = [
        make_ujlc(4, 3, 2, T=1.0, tau_D=0.25, seed=1),
        make_ujlc(3, 1, 1, T=0.75, tau_D=0.25, seed=2),
        make_ujlc(5, 2, 3, T=1.0, tau_D=0.2, seed=3),
        make_ujlc(
            2, 1, 2, T=0.5, tau_D=0.5, seed=4, rotating=False,
            bounds=WeightBounds(0.2, 0.2, 0.5),
        ),
        make_ujlc(4, 3, 2, T=1.0, tau_D=0.25, seed=5, input_family="bounded", scale=0.3),
        make_ujlc(3, 2, 2, T=0.75, tau_D=0.25, seed=6, input_family="bounded", scale=0.5),
        make_ujlc(4, 1, 3, T=1.0, tau_D=0.25, seed=7, input_family="bounded", scale=0.2),
        make_ujlc(4, 2, 2, T=1.0, tau_D=0.25, seed=8, input_family="c1", scale=0.5),
        make_ujlc(3, 2, 2, T=0.75, tau_D=0.25, seed=9, input_family="c2", scale=0.5),
        make_ujlc(3, 2, 2, T=0.75, tau_D=0.25, seed=10, weights="distance"),
        make_ujlc(6, 3, 2, T=1.5, tau_D=0.25, seed=11, input_family="bounded", scale=0.3),
        make_jlc_bidirectional(3, 2, 2, tau_D=0.5, seed=12),
        make_jlc_bidirectional(4, 2, 2, tau_D=0.5, seed=13),
        make_jlc_bidirectional(4, 3, 3, tau_D=0.5, seed=14),
        make_jlc_acyclic(3, 2, 2, tau_D=0.5, seed=15),
        make_jlc_acyclic(4, 2, 2, tau_D=0.5, seed=16),
        make_jlc_acyclic(4, 3, 3, tau_D=0.5, seed=17),
        make_jlc_bidirectional(3, 2, 2, tau_D=0.5, seed=18, disconnect_follower=3),
        make_jlc_acyclic(3, 2, 2, tau_D=0.5, seed=19, disconnect_follower=3),
        make_counterexample(3, 2, 2, windows=5),
        make_counterexample(2, 1, 1, windows=4),
        make_ujlc(2, 2, 2, T=0.5, tau_D=0.25, seed=20, input_family="bounded", scale=0.4),
    ]
    return scenarios


def scenario_to_json(sc: Scenario) -> dict:
    return {
        "name": sc.name,
        "n": sc.spec.n,
        "k": sc.spec.k,
        "d": sc.spec.d,
        "seed": sc.seed,
        "horizon": sc.horizon,
        "expected": sc.expected,
        "dt": sc.dt,
        "bounds": {
            "a_lo": sc.spec.bounds.a_lo,
            "a_hi": sc.spec.bounds.a_hi,
            "b_lo": sc.spec.bounds.b_lo,
        },
        "weights": sc.meta.get("weights", {"kind": "constant", "a": 1.0, "b": 1.0}),
        "inputs": {
            "family": sc.inputs.condition,
            "scale": sc.inputs.scale,
        },
        "x0": sc.x0.tolist(),
        "y0": sc.y0.tolist(),
        "ujlc_T": sc.ujlc_T,
        "marks": sc.marks,
        "schedule": schedule_to_json(sc.spec.schedule),
        "meta": {
            key: value
            for key, value in sc.meta.items()
            if key in ("kind", "disconnected_windows", "drift", "windows",
                       "rest_length", "inner_marks", "disconnect_follower")
        },
    }


def scenario_from_json(data: dict) -> Scenario:
    try:
        n, k, d = int(data["n"]), int(data["k"]), int(data["d"])
        bounds = WeightBounds(**data["bounds"])
        schedule = schedule_from_json(data["schedule"])
        fam = _make_inputs(
            data["inputs"]["family"], (n, k, d), float(data["inputs"]["scale"])
        )
        weights_desc = data["weights"]
        spec = _spec(n, k, d, bounds, weights_desc, fam, schedule)
        meta = dict(data.get("meta", {}))
        meta["weights"] = weights_desc
        return Scenario(
            name=data["name"],
            spec=spec,
            x0=np.array(data["x0"], dtype=float),
            y0=np.array(data["y0"], dtype=float),
            horizon=float(data["horizon"]),
            expected=data["expected"],
            seed=int(data["seed"]),
            dt=float(data["dt"]),
            inputs=fam,
            ujlc_T=None if data.get("ujlc_T") is None else float(data["ujlc_T"]),
            marks=data.get("marks"),
            meta=meta,
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed scenario document: {exc}") from exc


def save_scenario(sc: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_json(sc), fh, indent=2)
        fh.write("\n")


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return scenario_from_json(json.load(fh))
