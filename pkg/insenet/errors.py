"""Exception types raised across the pipeline.

Every error derives from InsenetError so the CLI can turn it into a
processing failure (exit code 1) with a readable message.
"""


class InsenetError(Exception):
    """Base class for all insenet errors."""


class ArgumentError(InsenetError, ValueError):
    """An argument is outside its valid range."""


class SampleRateError(InsenetError, ValueError):
    """Audio is not at the pipeline sample rate."""


class SignalLengthError(InsenetError, ValueError):
    """A signal is empty or shorter than required."""


class PairingError(InsenetError, ValueError):
    """Reference and degraded spectrograms cannot be paired."""


class NormalizationStateError(InsenetError, RuntimeError):
    """A paired input is normalized twice, or used un-normalized."""


class ShapeError(InsenetError, ValueError):
    """A tensor does not have the expected shape or channel count."""


class ModelConstructionError(InsenetError, ValueError):
    """A model spec is inconsistent; the message names the offending layer."""


class ConfigurationError(InsenetError, RuntimeError):
    """A required external tool or setting is missing or invalid."""


class CodecError(InsenetError, RuntimeError):
    """An external codec exited with a failure."""

    def __init__(self, message: str, output: str = ""):
        super().__init__(message if not output else f"{message}\n{output}")
        self.output = output


class LabelingError(InsenetError, RuntimeError):
    """A quality label could not be produced for a pair."""


class UndefinedCorrelationError(InsenetError, ValueError):
    """A correlation coefficient is undefined for the given data."""


class CannotScaleError(InsenetError, ValueError):
    """A silent signal cannot be scaled to a target level."""


class ManifestError(InsenetError, ValueError):
    """A manifest file or entry violates the manifest schema."""
