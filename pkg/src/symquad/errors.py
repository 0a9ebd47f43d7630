"""Exception hierarchy.

Every library error derives from :class:`SymQuadError` so the CLI can map
domain failures to exit status 1 in one place.
"""


class SymQuadError(Exception):
    """Base class for all domain errors raised by symquad."""


class MissingVariable(SymQuadError):
    pass


class MixedScalarMode(SymQuadError):
    """Exact and numeric scalars were combined without explicit conversion."""


class DimensionMismatch(SymQuadError):
    pass


class DimensionTooLarge(SymQuadError):
    pass


class SingularMatrix(SymQuadError):
    pass


class NotSymmetric(SymQuadError):
    """Raised with a witness of the first violated permutation equality."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSymmetricInput(NotSymmetric):
    pass


class NotGeneric(SymQuadError):
    pass


class NotAlmostGeneric(SymQuadError):
    pass


class NotReducible(SymQuadError):
    pass


class DegenerateInput(SymQuadError):
    pass


class DegenerateInitialData(DegenerateInput):
    pass


class ZeroScale(SymQuadError):
    pass


class GenericityViolated(SymQuadError):
    pass


class IndexOutOfRange(SymQuadError):
    pass


class BadIndices(SymQuadError):
    pass


class StepSizeUnderflow(SymQuadError):
    pass


class MissingAuxiliaryInitialValue(SymQuadError):
    pass


class DiscriminantDegenerate(SymQuadError):
    """Roots collided or could not be followed; ``partial`` holds what was tracked."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class RootSolverDiverged(SymQuadError):
    pass


class UnknownCase(SymQuadError):
    pass


class SingularGridPoint(SymQuadError):
    pass


class ConfigError(SymQuadError):
    """Malformed or invalid run configuration (usage error, exit code 2)."""


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    pass
