"""Exception hierarchy shared by every layer of the toolkit."""


class FaceRingError(Exception):
    """Base class for every error the toolkit raises on bad input or degenerate data."""


# --- complexes ---
class EmptyInput(FaceRingError, ValueError):
    pass


class VertexOutOfRange(FaceRingError, ValueError):
    pass


class DimensionOutOfRange(FaceRingError, ValueError):
    pass


class NotPure(FaceRingError):
    pass


class FaceNotInComplex(FaceRingError):
    pass


class VertexClash(FaceRingError, ValueError):
    pass


class NonOrientable(FaceRingError):
    pass


class DisconnectedDualGraph(FaceRingError):
    pass


class BadParams(FaceRingError, ValueError):
    pass


# --- moves ---
class InvalidMove(FaceRingError):
    pass


# --- algebra ---
class DivisionByZeroPoly(FaceRingError, ZeroDivisionError):
    pass


class WrongCharacteristic(FaceRingError):
    pass


class DenominatorVanishes(FaceRingError):
    """A specialization hit a zero denominator; retry with a fresh point."""


class PolynomialSyntaxError(FaceRingError, ValueError):
    pass


# --- l.s.o.p. ---
class NoPinningFacet(FaceRingError):
    pass


class BadLabeling(FaceRingError):
    pass


class NotACone(FaceRingError):
    pass


class DimensionMismatch(FaceRingError, ValueError):
    pass


class BadIndex(FaceRingError, IndexError):
    pass


class InvalidLsop(FaceRingError):
    pass


# --- reduction ---
class DegreeOutOfRange(FaceRingError, ValueError):
    pass


class WitnessSearchFailed(FaceRingError):
    """Randomized search exhausted its attempts. Inconclusive, never a disproof."""


class SupportNotAFace(FaceRingError):
    pass


class SupportNotInterior(FaceRingError):
    pass


class WrongDegree(FaceRingError, ValueError):
    pass


class MinorVanishes(FaceRingError):
    pass


class CostGuard(FaceRingError):
    pass


# --- certify ---
class NotHomologySphere(FaceRingError):
    pass


class NotHomologyBall(FaceRingError):
    pass


class BadParameters(FaceRingError, ValueError):
    pass


# --- input streams ---
class MalformedInput(FaceRingError, ValueError):
    """Input that is not a complex record (bad JSON or wrong shape)."""
