"""Real-time trajectory generation for planar constant-curvature soft arms.

The arm's curvature vector is a flat output of its dynamics, so feasible
state/input trajectories follow algebraically from a kinematic plan:
inverse kinematics per tip sample, finite differences for rates, and the
flatness input map. An adaptive RK45 rollout validates the result open
loop, and the CLI benchmarks planning latency against the sample period.
"""

from .dynamics import (
    DynamicsTerms,
    coriolis,
    dynamics_terms,
    forward_dynamics,
    inertia,
    inertia_partials,
    inertia_projected,
    mechanical_energy,
)
from .errors import (
    IntegrationError,
    SingularDynamicsError,
    SingularityError,
    UnreachableTargetError,
)
from .flatness import FlatOutputPoint, flat_input, flat_state
from .ik import ConcavityBranch, IkProblem, seed_for_branch, solve_ik, tip_residual
from .kinematics import (
    EPS_SING,
    WORKING_BOUND,
    ConfigurationState,
    PlanarTransform,
    RobotParams,
    arc_sinc,
    arc_versinc,
    chain_transform,
    segment_transform,
    tip_jacobian,
    tip_position,
)
from .rigid import (
    RigidConfiguration,
    joint_map,
    joint_map_jacobian,
    joint_map_jacobian_rate,
    mass_point_jacobian,
    mass_point_position,
    rigid_chain_transform,
    rigid_inertia,
    rigid_mass_points,
)
from .simulate import RolloutResult, input_schedule, integrate, rollout_open_loop
from .trajectory import (
    FlatTrajectory,
    SplineSpec,
    TipPath,
    finite_diff,
    generate,
    sample_spline,
)

__version__ = "0.1.0"

__all__ = [
    "EPS_SING",
    "WORKING_BOUND",
    "ConcavityBranch",
    "ConfigurationState",
    "DynamicsTerms",
    "FlatOutputPoint",
    "FlatTrajectory",
    "IkProblem",
    "IntegrationError",
    "PlanarTransform",
    "RigidConfiguration",
    "RobotParams",
    "RolloutResult",
    "SingularDynamicsError",
    "SingularityError",
    "SplineSpec",
    "TipPath",
    "UnreachableTargetError",
    "arc_sinc",
    "arc_versinc",
    "chain_transform",
    "coriolis",
    "dynamics_terms",
    "finite_diff",
    "flat_input",
    "flat_state",
    "forward_dynamics",
    "generate",
    "inertia",
    "inertia_partials",
    "inertia_projected",
    "input_schedule",
    "integrate",
    "joint_map",
    "joint_map_jacobian",
    "joint_map_jacobian_rate",
    "mass_point_jacobian",
    "mass_point_position",
    "mechanical_energy",
    "rigid_chain_transform",
    "rigid_inertia",
    "rigid_mass_points",
    "rollout_open_loop",
    "sample_spline",
    "seed_for_branch",
    "segment_transform",
    "solve_ik",
    "tip_jacobian",
    "tip_position",
    "tip_residual",
]
