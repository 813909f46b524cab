"""
Exception hierarchy for the ADFF pipeline.

Every error raised on purpose by the package derives from ``ADFFError`` so the
CLI can tell configuration problems (exit 1) from runtime failures (exit 2).
Structured context is kept on the instance as well as in the message.
"""

from typing import Any, Dict, Optional


class ADFFError(Exception):
    """Base class for all pipeline errors."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.context}


class ConfigError(ADFFError):
    """Invalid run configuration: unknown key, bad type, missing root."""

    def __init__(self, message: str, key: Optional[str] = None, suggestion: Optional[str] = None):
        if suggestion:
            message = f"{message} (did you mean '{suggestion}'?)"
        super().__init__(message, key=key, suggestion=suggestion)
        self.key = key
        self.suggestion = suggestion


class AudioDecodeError(ADFFError):
    """Audio file could not be turned into samples."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message, path=path)
        self.path = path


class FrontendError(ADFFError):
    """Invalid input to a spectrogram stage."""


class DatasetError(ADFFError):
    """Corpus ingestion, cutting, stacking or fold planning failure."""


class ModelError(ADFFError):
    """Input or parameter shape incompatible with the network."""


class TrainingError(ADFFError):
    """Failure while optimising a model."""


class NonFiniteGradientError(TrainingError):
    def __init__(self, param_name: str, step: int):
        super().__init__(
            f"non-finite gradient in '{param_name}' at step {step}",
            param_name=param_name,
            step=step,
        )
        self.param_name = param_name
        self.step = step


class DivergenceError(TrainingError):
    def __init__(self, epoch: int, batch: int, loss: float):
        super().__init__(
            f"loss diverged to {loss} at epoch {epoch}, batch {batch}",
            epoch=epoch,
            batch=batch,
            loss=loss,
        )
        self.epoch = epoch
        self.batch = batch


class MetricError(ADFFError):
    """Metric or loss called on inputs where it is undefined."""
