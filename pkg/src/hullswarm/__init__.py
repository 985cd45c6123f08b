"""Multi-agent tracking of a moving leader polytope: simulation and verification.

The package simulates follower agents chasing the convex hull spanned by
moving leaders under switching directed communication topologies, computes
closed-form convergence certificates from the dwell time, the connectivity
window, and the coupling-weight bounds, and verifies every certified bound
numerically along simulated trajectories.
"""

from .errors import (
    CertificateError,
    DivergenceError,
    HullswarmError,
    InvalidInputError,
    PreconditionError,
    WeightBoundError,
)
from .hull import Projection, alignment_bound, distance, project, sq_distance_gradient
from .topology import (
    Agent,
    ConnectivityReport,
    Digraph,
    SwitchingSchedule,
    acyclic_partition,
    classify_jlc,
    classify_ujlc,
    connectivity_report,
    follower,
    is_bidirectional,
    is_l_connected,
    leader,
    load_schedule,
    persistent_paths,
    save_schedule,
    ujlc_witness,
    union_graph,
)
from .dynamics import (
    SystemSpec,
    Trajectory,
    WeightBounds,
    default_dt,
    derivative,
    simulate,
    trajectory_from_csv,
    trajectory_to_csv,
)
from .certificates import (
    CertificateBundle,
    build_certificates,
    certificate_report,
    direct_link_gain,
    dwell_gain,
    gamma_constants,
    holdover_gain,
    jlc_discrete_bound,
    relay_dwell_gain,
    relay_link_gain,
    siiss_envelope_ujlc,
    siiss_functions,
    siiss_recursion_jlc,
    siss_envelope,
    ujlc_discrete_bound,
    window_contraction_chain,
)
from .analysis import (
    BoundVerdict,
    MetricSeries,
    check_dini_bound,
    check_frozen_hull_drift,
    check_input_norm_sandwich,
    check_window_contraction,
    compute_metrics,
    detect_set_tracking,
    metrics_from_csv,
    metrics_to_csv,
    ujlc_siiss_envelope,
    verify_siiss,
    verify_siiss_marks,
    verify_siss,
)
from .scenarios import (
    InputFamily,
    Scenario,
    load_scenario,
    make_counterexample,
    make_inputs_c1,
    make_inputs_c2,
    make_jlc_acyclic,
    make_jlc_bidirectional,
    make_ujlc,
    save_scenario,
    simulate_scenario,
    suite,
)

__version__ = "0.1.0"
