"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end.
"""


class OrbilefError(Exception):
    exit_code = 1


class ParseError(OrbilefError):
    exit_code = 2


class ValidationError(OrbilefError):
    exit_code = 3


# group and character algebra
class AlgebraError(OrbilefError):
    exit_code = 4


class NotAHomomorphism(AlgebraError):
    pass


class NotBijective(AlgebraError):
    pass


class NotInvariant(AlgebraError):
    pass


class GroupMismatch(AlgebraError):
    pass


class ConvergenceFailure(AlgebraError):
    pass


class NonIntegralMultiplicity(AlgebraError):
    exit_code = 6


# orientation characters
class OrientationError(OrbilefError):
    exit_code = 5


class NotIntertwiner(OrientationError):
    pass


class SingularIntertwiner(OrientationError):
    pass


class AmbiguousSign(OrientationError):
    pass


# geometry
class GeometryError(OrbilefError):
    exit_code = 7


class ExplosionGuard(GeometryError):
    pass


class NotClosed(GeometryError):
    pass


class OutOfReach(GeometryError):
    pass


class NonDifferentiable(GeometryError):
    pass


class TangencyDetected(GeometryError):
    pass


class CosetMismatch(GeometryError):
    pass


class NonIntegerTotal(OrbilefError):
    exit_code = 8


class MissedRootRisk(UserWarning):
    """Root bracketing grid is coarser than the configured minimum."""
