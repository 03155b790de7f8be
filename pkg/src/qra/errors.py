"""Exception types shared across the toolkit."""


class QraError(Exception):
    """Base class for all toolkit errors."""


class MalformedName(QraError):
    """Filename does not follow the measurement-file naming scheme."""


class BadRow(QraError):
    """A sample-file line has the wrong length or a foreign character."""

    def __init__(self, line_no, message=""):
        self.line_no = line_no
        super().__init__(message or f"bad row at line {line_no}")


class EmptyFile(QraError):
    """Sample file contains no bit-string rows."""


class TooWide(QraError):
    """Bit-strings are too wide for the requested dense representation."""


class DimensionTooLarge(QraError):
    """Requested Hilbert-space dimension exceeds the sampler cap."""


class DomainError(QraError):
    """Function argument outside its mathematical domain."""


class ShapeMismatch(QraError):
    """Operands have incompatible widths or lengths."""


class NonUnitary(QraError):
    """Matrix failed a unitarity check."""


class TooFewRows(QraError):
    """Not enough rows to slice the requested matrix ensemble."""


class EigenFailure(QraError):
    """Dense eigensolver did not converge."""


class StreamTooShort(QraError):
    """Bit stream shorter than the hard minimum for a statistical test."""


class SpecParseError(QraError):
    """Generator spec string could not be parsed."""


class DegenerateSpectrumWarning(UserWarning):
    """Embedding had fewer than two positive eigenvalues; coordinates padded."""
