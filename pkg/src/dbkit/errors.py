"""Error taxonomy.

Every failure mode that callers are expected to catch carries a stable
string code. Codes are part of the public contract; messages are not.
"""

from __future__ import annotations


class DBKError(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "generic"

    def __init__(self, message: str = "", **data):
        super().__init__(message or self.code)
        self.data = data


class MagnitudeOverflow(DBKError):
    code = "magnitude-overflow"


class InvalidGrid(DBKError):
    code = "invalid-grid"


class OrientationViolation(DBKError):
    code = "orientation-violation"


class SpectrumMissing(DBKError):
    code = "spectrum-missing"


class DivergentIntegrand(DBKError):
    code = "divergent-integrand"


class SampleShapeError(DBKError):
    code = "sample-shape"


class CountMismatch(DBKError):
    code = "count-mismatch"


class NonSimpleZero(DBKError):
    code = "non-simple-zero"


class RelationCase(DBKError):
    code = "relation-case"


class SameBeta(DBKError):
    code = "same-beta"


class BetaSingular(DBKError):
    code = "beta-singular"


class NotInDomain(DBKError):
    code = "not-in-domain"


class ResolventPole(DBKError):
    code = "resolvent-pole"


class S0VanishesOnSpectrum(DBKError):
    code = "s0-vanishes-on-spectrum"


class IndeterminateBound(DBKError):
    code = "indeterminate-bound"


class InterlacingViolation(DBKError):
    code = "interlacing-violation"


class OracleCalibrationFailure(DBKError):
    code = "oracle-calibration-failure"


class ModelCorruption(DBKError):
    code = "model-corruption"
