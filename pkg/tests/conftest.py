import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hullswarm.analysis import compute_metrics
from hullswarm.scenarios import simulate_scenario, suite


@pytest.fixture(scope="session")
def suite_runs():
    """Every standing scenario simulated once, with metrics, shared by tests."""
    runs = []
    for sc in suite():
        traj = simulate_scenario(sc)
        metrics = compute_metrics(traj, sc.spec)
        runs.append((sc, traj, metrics))
    return runs
