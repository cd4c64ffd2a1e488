from .config import DetectorConfig, DetectorKind
from .builtin import binarize, detect_builtin
from .scheduler import Decision, DetectionScheduler
from .external import (
    DetectorTimeout,
    DetectorUnreachable,
    ExternalDetector,
    MalformedResponse,
)
from .mock import MockDetectorServer

__all__ = [
    "DetectorConfig",
    "DetectorKind",
    "binarize",
    "detect_builtin",
    "Decision",
    "DetectionScheduler",
    "DetectorTimeout",
    "DetectorUnreachable",
    "ExternalDetector",
    "MalformedResponse",
    "MockDetectorServer",
]
