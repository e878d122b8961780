"""Exception hierarchy for geowalk."""


class GeowalkError(Exception):
    """Base class for all library errors."""


class ContractViolation(GeowalkError, ValueError):
    """An input violated a documented precondition."""


class NumericalContractError(GeowalkError):
    """A geometric or numerical guarantee failed at run time."""


class NonUniqueGeodesic(NumericalContractError):
    """Points are antipodal, so the minimizing geodesic is not unique."""


class RayExitsImmediately(NumericalContractError):
    """The chord direction does not enter the body."""


class CurvatureBoundViolated(NumericalContractError):
    """A chord is longer than the outer-sphere bound allows; m2 is too large."""


class ThetaTooLarge(NumericalContractError):
    """The chord-oracle accuracy precondition beta*sqrt(M2)*theta*delta < 1 failed."""


class DegenerateLanding(NumericalContractError):
    """The chord arrives (almost) along the surface normal."""


class FinalAdjustFailed(NumericalContractError):
    """The final theta bisection did not reach its target window."""


class InsufficientSamples(ContractViolation):
    """Too few samples for a statistic to be meaningful."""
