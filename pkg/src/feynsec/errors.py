"""Exception hierarchy shared by all feynsec modules.

The CLI maps these onto exit codes: input/parse problems -> 2,
kinematics/domain problems -> 3, strategy failures -> 4.
"""


class FeynsecError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FeynsecError):
    """Malformed input file or expression (CLI exit code 2)."""


class TopologyError(FeynsecError):
    """Graph is disconnected or otherwise not a valid Feynman topology."""


class KinematicsError(FeynsecError):
    """Missing or inconsistent kinematic invariants."""


class EuclideanRegionError(KinematicsError):
    """An invariant s_T > 0 was supplied; only s_T <= 0 is supported."""


class ScalelessError(FeynsecError):
    """The second graph polynomial vanishes identically; the integral is ill-defined."""


class DomainError(FeynsecError):
    """Function evaluated outside its supported domain."""


class DivergenceError(FeynsecError):
    """A singularity is not regulated by the dimensional parameter."""


class StrategyError(FeynsecError):
    """A sub-sector selection strategy failed (move cap or no legal move)."""


class IllegalMoveError(FeynsecError):
    """A polyhedra-game move would create a negative coordinate."""


class IntegrandEvaluationError(FeynsecError):
    """A Monte Carlo sample produced a non-finite integrand value."""
