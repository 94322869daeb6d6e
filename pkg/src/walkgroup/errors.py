"""Exception types raised across the package."""


class WalkGroupError(Exception):
    """Base class for all package errors."""


class InvalidWeights(WalkGroupError, ValueError):
    pass


class ParseError(WalkGroupError, ValueError):
    pass


class DegenerateVariance(WalkGroupError):
    pass


class DegenerateCorrelation(WalkGroupError):
    pass


class SingularWalk(WalkGroupError):
    pass


class WrongGenus(WalkGroupError):
    pass


class RootFindingFailure(WalkGroupError):
    pass


class SamplingDegenerate(WalkGroupError):
    pass


class DegenerateBranchPoints(WalkGroupError):
    pass


class QuadratureFailure(WalkGroupError):
    pass


class PoleAtLatticePoint(WalkGroupError):
    pass


class DivisionNearZero(WalkGroupError):
    pass


class ValidationFailure(WalkGroupError):
    pass


class BranchCutViolation(WalkGroupError):
    pass


class RealRoots(WalkGroupError):
    pass


class NormZero(WalkGroupError, ZeroDivisionError):
    pass


class NotExact(WalkGroupError):
    pass


class OrbitEscape(WalkGroupError):
    pass


class InconsistentVerdicts(WalkGroupError):
    pass
