"""Exception types raised across the package."""


class HilbertClarkError(ValueError):
    """Base class for all errors raised by :mod:`hilbert_clark`."""


class InvalidNodeSet(HilbertClarkError):
    pass


class PointOnGamma(HilbertClarkError):
    """Raised when an evaluation point coincides with a node."""


class NotOnCircle(HilbertClarkError):
    pass


class OutOfDomain(HilbertClarkError):
    pass


class DecompositionResidual(HilbertClarkError):
    """The partial-fraction identity failed its verification residual."""


class Overlap(HilbertClarkError):
    pass


class ShapeMismatch(HilbertClarkError):
    pass


class DegenerateQuadruple(HilbertClarkError):
    pass


class TooFewPoints(HilbertClarkError):
    pass


class BasisNotCertified(HilbertClarkError):
    pass


class AtOne(HilbertClarkError):
    pass


class BetaEqualsOne(HilbertClarkError):
    pass


class SingularPair(HilbertClarkError):
    pass


class QuadratureUnresolved(HilbertClarkError):
    pass


class UnknownDemo(HilbertClarkError):
    pass
