"""Exception types raised by the planning and simulation layers.

Input validation (shapes, finiteness, construction invariants) uses plain
ValueError; the classes here mark numerical failures that callers may want
to catch and report, e.g. the CLI maps them to exit code 1.
"""


class UnreachableTargetError(RuntimeError):
    """IK failed to converge; carries the best residual norm reached (m)."""

    def __init__(self, message, best_residual, timestep=None):
        super().__init__(message)
        self.best_residual = float(best_residual)
        self.timestep = timestep


class SingularityError(RuntimeError):
    """An iterate or requested pose sits at (or too close to) a kinematic
    singularity, e.g. the straight-arm branch-merge boundary."""

    def __init__(self, message, timestep=None):
        super().__init__(message)
        self.timestep = timestep


class SingularDynamicsError(RuntimeError):
    """The inertia matrix could not be factorized as SPD."""


class IntegrationError(RuntimeError):
    """Adaptive integration failed; carries the time of failure (s)."""

    def __init__(self, message, t_fail):
        super().__init__(message)
        self.t_fail = float(t_fail)
