"""Exception hierarchy shared by all modules."""


class DrazinError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(DrazinError, ValueError):
    pass


class MatrixFormatError(DrazinError, ValueError):
    """Malformed matrix input (wrong length, non-finite entries, bad JSON)."""


class SingularMatrixError(DrazinError):
    def __init__(self, message, pivot=0.0):
        super().__init__(message)
        self.pivot = pivot


class ConvergenceError(DrazinError):
    def __init__(self, message, matrix_hash=None):
        super().__init__(message)
        self.matrix_hash = matrix_hash


class ChainStabilizationError(DrazinError):
    pass


class NotGroupInvertibleError(DrazinError):
    def __init__(self, index):
        super().__init__(f"not group invertible: index {index} >= 2")
        self.index = index


class AmbiguousEigenvalueError(DrazinError):
    pass


class NotAnEigenvalueError(DrazinError):
    pass


class SpectralCertificationError(DrazinError):
    """A computed spectral object failed its own certification."""


class OnSpectrumError(DrazinError):
    pass


class ContourError(DrazinError):
    pass


class LaurentMismatchError(DrazinError):
    def __init__(self, message, algebraic_order, index_order):
        super().__init__(message)
        self.algebraic_order = algebraic_order
        self.index_order = index_order


class NoFactorizationError(DrazinError):
    def __init__(self, message, rank_joint, rank_b):
        super().__init__(message)
        self.rank_joint = rank_joint
        self.rank_b = rank_b


class LiftTooLargeError(DrazinError):
    pass


class UndecidableRegionError(DrazinError):
    """The region normalizer cannot canonicalize a configuration."""


class ProfileVerificationError(DrazinError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class GenerationError(DrazinError):
    pass


class UnknownSuiteError(DrazinError, KeyError):
    pass
