"""Integration of the coupled dynamics: exactness, invariance, determinism."""

import math

import numpy as np
import pytest

from hullswarm import (
    DivergenceError,
    InvalidInputError,
    WeightBoundError,
)
from hullswarm.dynamics import (
    SystemSpec,
    WeightBounds,
    constant_weight,
    default_dt,
    derivative,
    distance_follower_weight,
    simulate,
    trajectory_from_csv,
    trajectory_to_csv,
)
from hullswarm.hull import distance
from hullswarm.topology import Digraph, SwitchingSchedule, follower, leader


def zero_vec(d):
    z = np.zeros(d)
    return lambda *args: z


def make_spec(n, k, d, arcs, horizon=10.0, tau_D=0.5, a=1.0, b=1.0,
              u=None, w=None, bounds=None, weight_a=None, weight_b=None):
    g = Digraph(n, k, frozenset(arcs))
    sched = SwitchingSchedule(((0.0, g),), horizon=horizon, tau_D=tau_D)
    return SystemSpec(
        n=n, k=k, d=d,
        bounds=bounds or WeightBounds(0.5, 1.5, 0.5),
        weight_fn_a=weight_a or constant_weight(a),
        weight_fn_b=weight_b or constant_weight(b),
        leader_input_u=u or zero_vec(d),
        disturbance_w=w or zero_vec(d),
        schedule=sched,
    )


def reference_rhs(spec, graph, x, y, t):
    """Straight re-reading of the model equations, loops and all."""
    n, k, d = spec.n, spec.k, spec.d
    dy = np.zeros((k, d))
    for i in range(1, k + 1):
        dy[i - 1] = spec.leader_input_u(i, y, t)
    dx = np.zeros((n, d))
    for i in range(1, n + 1):
        total = np.array(spec.disturbance_w(i, t), dtype=float)
        for (src, dst) in graph.arcs:
            if dst != follower(i):
                continue
            if src.kind == "F":
                total = total + spec.weight_fn_a(i, src.index, x, y, t) * (
                    x[src.index - 1] - x[i - 1]
                )
            else:
                total = total + spec.weight_fn_b(i, src.index, x, y, t) * (
                    y[src.index - 1] - x[i - 1]
                )
        dx[i - 1] = total
    return dx, dy


def test_derivative_no_arcs_no_disturbance():
    spec = make_spec(2, 1, 2, [])
    dx, dy = derivative(spec, np.ones((2, 2)), np.zeros((1, 2)), 0.0)
    np.testing.assert_array_equal(dx, 0.0)
    np.testing.assert_array_equal(dy, 0.0)


def test_derivative_single_leader_arc():
    spec = make_spec(1, 1, 3, [(leader(1), follower(1))], b=1.0)
    x = np.array([[1.0, 0.0, -1.0]])
    y = np.array([[0.0, 2.0, 1.0]])
    dx, _ = derivative(spec, x, y, 0.0)
    np.testing.assert_allclose(dx[0], y[0] - x[0])


def test_derivative_matches_reference_on_random_states():
    rng = np.random.default_rng(41)
    for _ in range(40):
        n, k, d = int(rng.integers(2, 5)), int(rng.integers(1, 3)), int(rng.integers(1, 4))
        arcs = set()
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j and rng.random() < 0.4:
                    arcs.add((follower(j), follower(i)))
            for j in range(1, k + 1):
                if rng.random() < 0.5:
                    arcs.add((leader(j), follower(i)))
        amp = 0.3

        def u(i, y, t):
            return amp * np.sin(t + i) * np.ones(d)

        def w(i, t):
            return amp * np.cos(t * i) * np.ones(d)

        spec = make_spec(
            n, k, d, arcs, u=u, w=w,
            weight_a=distance_follower_weight(0.5, 1.5),
        )
        x = rng.normal(size=(n, d))
        y = rng.normal(size=(k, d))
        t = float(rng.uniform(0, 5))
        dx, dy = derivative(spec, x, y, t)
        ref_dx, ref_dy = reference_rhs(spec, spec.schedule.graph_at(t), x, y, t)
        np.testing.assert_allclose(dx, ref_dx, atol=1e-12)
        np.testing.assert_allclose(dy, ref_dy, atol=1e-12)


def test_scalar_exponential_decay():
    spec = make_spec(1, 1, 1, [(leader(1), follower(1))], b=1.0)
    traj = simulate(spec, np.array([[1.0]]), np.array([[0.0]]), dt=0.01, t_end=1.0)
    idx = int(np.argmin(np.abs(traj.times - 1.0)))
    assert traj.times[idx] == pytest.approx(1.0, abs=1e-12)
    assert traj.x[idx, 0, 0] == pytest.approx(math.exp(-1.0), abs=1e-8)


def test_hull_invariance_static_leaders():
    rng = np.random.default_rng(43)
    verts = rng.uniform(-1, 1, size=(3, 2))
    arcs = [(leader(j), follower(i)) for j in range(1, 4) for i in range(1, 4)]
    arcs += [(follower(1), follower(2)), (follower(2), follower(3))]
    spec = make_spec(3, 3, 2, arcs, horizon=10.0)
    weights = rng.dirichlet(np.ones(3), size=3)
    x0 = weights @ verts
    traj = simulate(spec, x0, verts, dt=0.01, t_end=10.0)
    worst = max(
        distance(traj.x[idx, i], traj.y[idx])
        for idx in range(0, len(traj.times), 20)
        for i in range(3)
    )
    assert worst <= 1e-9


def test_counterexample_drift_positions():
    # empty graph, unit drift: leaders move as 1 + t, followers stay put
    d = 3
    ones = np.ones(d)
    spec = make_spec(
        2, 2, d, [], horizon=5.0,
        u=lambda i, y, t: ones, w=None,
    )
    traj = simulate(spec, np.zeros((2, d)), np.ones((2, d)), dt=0.01, t_end=5.0)
    np.testing.assert_allclose(traj.x[-1], 0.0, atol=1e-12)
    np.testing.assert_allclose(traj.y[-1], 1.0 + traj.times[-1], atol=1e-10)
    # per-coordinate gap 1 + t makes the hull distance sqrt(d) * (1 + t)
    gap = distance(traj.x[-1, 0], traj.y[-1])
    assert gap == pytest.approx(math.sqrt(d) * (1.0 + traj.times[-1]), rel=1e-9)


def test_rk4_step_halving_order():
    arcs = [(leader(1), follower(1)), (follower(1), follower(2)),
            (follower(2), follower(1))]

    def u(i, y, t):
        return 0.5 * np.array([math.sin(t), math.cos(t)])

    spec = make_spec(2, 1, 2, arcs, u=u, weight_a=distance_follower_weight(0.5, 1.5))
    x0 = np.array([[1.0, -1.0], [2.0, 0.5]])
    y0 = np.array([[0.0, 0.0]])

    def run(dt):
        return simulate(spec, x0, y0, dt=dt, t_end=2.0).x[-1]

    ref = run(0.4 / 16)
    err1 = np.abs(run(0.4) - ref).max()
    err2 = np.abs(run(0.2) - ref).max()
    ratio = err1 / err2
    assert 8.0 <= ratio <= 40.0  # fourth-order: nominally ~16x per halving


def test_weight_bound_violation_aborts():
    def bad_a(i, j, x, y, t):
        return 10.0 if t > 0.5 else 1.0

    spec = make_spec(
        2, 1, 1,
        [(follower(1), follower(2)), (leader(1), follower(1))],
        weight_a=bad_a,
    )
    with pytest.raises(WeightBoundError, match=r"a\(2,1\)"):
        simulate(spec, np.zeros((2, 1)), np.ones((1, 1)), dt=0.1, t_end=2.0)


def test_low_b_weight_violation_named():
    spec = make_spec(1, 1, 1, [(leader(1), follower(1))],
                     weight_b=constant_weight(0.1))
    with pytest.raises(WeightBoundError, match=r"b\(1,1\)"):
        simulate(spec, np.zeros((1, 1)), np.ones((1, 1)), dt=0.1, t_end=1.0)


def test_divergence_reported_with_time():
    # leader input turns nonfinite partway through the run
    spec = make_spec(
        1, 1, 1, [(leader(1), follower(1))],
        weight_b=constant_weight(1.0),
        u=lambda i, y, t: np.array([np.inf if t > 2.0 else 1.0]),
    )
    with pytest.raises(DivergenceError) as err, np.errstate(invalid="ignore"):
        simulate(spec, np.zeros((1, 1)), np.ones((1, 1)), dt=0.5, t_end=10.0)
    assert 0.0 < err.value.t <= 10.0


def test_substeps_split_at_switches():
    g_on = Digraph(1, 1, frozenset([(leader(1), follower(1))]))
    g_off = Digraph(1, 1, frozenset())
    sched = SwitchingSchedule(
        ((0.0, g_off), (0.55, g_on)), horizon=2.0, tau_D=0.5
    )
    spec = SystemSpec(
        n=1, k=1, d=1, bounds=WeightBounds(0.5, 1.5, 0.5),
        weight_fn_a=constant_weight(1.0), weight_fn_b=constant_weight(1.0),
        leader_input_u=zero_vec(1), disturbance_w=zero_vec(1), schedule=sched,
    )
    traj = simulate(spec, np.zeros((1, 1)), np.ones((1, 1)), dt=0.2, t_end=2.0)
    assert 0.55 in traj.times.tolist()  # switch instant is a substep boundary
    # before the switch nothing moves; afterwards the follower closes the gap
    idx = traj.times.tolist().index(0.55)
    assert traj.x[idx, 0, 0] == 0.0
    assert traj.x[-1, 0, 0] > 0.5


def test_determinism_bit_identical(tmp_path):
    arcs = [(leader(1), follower(i)) for i in (1, 2)]
    spec = make_spec(2, 1, 2, arcs, u=lambda i, y, t: np.array([0.1, -0.2]))
    x0 = np.array([[1.0, 2.0], [-0.5, 0.25]])
    y0 = np.array([[0.0, 0.0]])
    t1 = simulate(spec, x0, y0, dt=0.01, t_end=3.0)
    t2 = simulate(spec, x0, y0, dt=0.01, t_end=3.0)
    assert np.array_equal(t1.x, t2.x) and np.array_equal(t1.y, t2.y)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    trajectory_to_csv(t1, p1)
    trajectory_to_csv(t2, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_round_trip(tmp_path):
    spec = make_spec(2, 1, 3, [(leader(1), follower(1))],
                     u=lambda i, y, t: np.array([0.3, 0.0, -0.7]))
    traj = simulate(spec, np.ones((2, 3)) / 3, np.zeros((1, 3)), dt=0.05, t_end=1.0)
    path = tmp_path / "traj.csv"
    trajectory_to_csv(traj, path)
    header = path.read_text().splitlines()[0]
    assert header == "t,x_1_1,x_1_2,x_1_3,x_2_1,x_2_2,x_2_3,y_1_1,y_1_2,y_1_3"
    back = trajectory_from_csv(path)
    assert np.array_equal(back.times, traj.times)
    assert np.array_equal(back.x, traj.x)
    assert np.array_equal(back.y, traj.y)


def test_default_dt_policy():
    assert default_dt(0.1) == pytest.approx(0.005)
    assert default_dt(10.0) == pytest.approx(1e-2)


def test_simulate_validates_inputs():
    spec = make_spec(1, 1, 1, [])
    with pytest.raises(InvalidInputError):
        simulate(spec, np.zeros((2, 1)), np.zeros((1, 1)), dt=0.1, t_end=1.0)
    with pytest.raises(InvalidInputError):
        simulate(spec, np.zeros((1, 1)), np.zeros((1, 1)), dt=-0.1, t_end=1.0)
    with pytest.raises(InvalidInputError):
        simulate(spec, np.zeros((1, 1)), np.zeros((1, 1)), dt=0.1, t_end=99.0)
