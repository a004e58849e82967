"""Min-max capture-time pursuit-evasion on a sphere.

A faster pursuer chases a slower evader, both moving along great circles at
bounded speed. The package provides the equilibrium feedback strategies and
game value, the evader's dominance (Apollonius) domain with its implicit
boundary solve, the equilibrium intercept point and its critical-angle
classification, two-pursuer cooperation, target-guarding verdicts with the
geodesic parallel strategy, a deterministic time-stepped simulator, and a
scenario-driven CLI.
"""

from .apollonius import (
    ApolloniusBoundary,
    BoundarySample,
    BracketError,
    MonotonicityError,
    NumericalBreakdownError,
    boundary,
    classify_intercept,
    contains,
    critical_alpha,
    delta_of_lambda,
    intercept_point,
)
from .engagements import (
    DegenerateOverlapError,
    GeodesicParallelPursuer,
    InterceptResult,
    PolylineEvader,
    TargetRegion,
    TwoPursuerConfig,
    UnresolvedEngagementError,
    boundary_intersections,
    evader_wins_guarding,
    geodesic_parallel_heading,
    guarding_threshold,
    pursuer_wins_guarding,
    two_pursuer_intercept,
)
from .geometry import (
    DegenerateConfigError,
    GameParams,
    GreatCircleFrame,
    RelativeConfig,
    SurfacePoint,
    arc_between,
    from_spherical,
    heading_to_velocity,
    positions_at_separation,
    relative_config,
    step_geodesic,
)
from .kinematics import ControlInput, advance, alpha_rate
from .scenario import (
    Scenario,
    ScenarioError,
    TargetSpec,
    TwoPursuerSpec,
    emit_scenario,
    load_scenario,
    parse_scenario,
)
from .sim import PolicyError, Trajectory, TrajectoryStep, default_max_time, run
from .strategies import (
    dispersal_controls,
    equilibrium_controls,
    equilibrium_evader_policy,
    equilibrium_pursuer_policy,
    rate_of_loss,
    value,
)

__version__ = "0.1.0"
