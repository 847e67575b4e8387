"""Exception hierarchy. Every error raised by the package derives from ``QTruthError``."""


class QTruthError(ValueError):
    pass


class NormalizationError(QTruthError):
    pass


class NotAProjectorError(QTruthError):
    pass


class NotUnitaryError(QTruthError):
    pass


class NotHermitianError(QTruthError):
    pass


class DimensionMismatchError(QTruthError):
    pass


class NumericalIntegrityError(QTruthError):
    """A computed truth value left [0, 1] by more than the tolerance."""


class NonCommutingFamilyError(QTruthError):
    pass


class NonOrthogonalFamilyError(QTruthError):
    pass


class UnsupportedCascadeError(QTruthError):
    pass


class ConfigError(QTruthError):
    pass
