"""Exception hierarchy. Every error raised by the library derives from ThetaForgeError."""


class ThetaForgeError(Exception):
    pass


class VerificationFailure(ThetaForgeError):
    """A mathematical check failed. The CLI maps this to exit code 1."""


# rootdata
class UnsupportedFamily(ThetaForgeError):
    pass


class OddNonIsotropicRoot(ThetaForgeError):
    pass


class DimensionMismatch(ThetaForgeError):
    pass


class IsotropicCoroot(ThetaForgeError):
    pass


class NotInEvenOrbit(ThetaForgeError):
    pass


class NonReducedWord(ThetaForgeError):
    pass


class NotSimple(ThetaForgeError):
    pass


class NotIsotropic(ThetaForgeError):
    pass


# structure
class NormalizationImpossible(VerificationFailure):
    pass


class NotInSpan(VerificationFailure):
    pass


# pbw
class UnevaluatedVariable(ThetaForgeError):
    pass


class NotDivisible(ThetaForgeError):
    pass


# verma / shapovalov / jantzen
class NotOrthogonalIsotropic(ThetaForgeError):
    pass


class SampleDegeneracy(ThetaForgeError):
    pass


class InterpolationMismatch(VerificationFailure):
    pass


class PropertyViolated(VerificationFailure):
    pass


class BoundViolated(VerificationFailure):
    pass


class LeadingTermMismatch(VerificationFailure):
    pass


class SquareNonzero(VerificationFailure):
    pass


class NotProportional(VerificationFailure):
    pass


class ZeroFactorAtSample(ThetaForgeError):
    pass


class DegenerateSample(ThetaForgeError):
    pass


class PreconditionViolated(ThetaForgeError):
    pass


class RankDisagreement(ThetaForgeError):
    pass


class NotGenericSample(ThetaForgeError):
    pass


class DepthTooSmallForSanity(ThetaForgeError):
    pass
