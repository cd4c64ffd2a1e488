"""Ground-station video pipeline: simulated UAV feeds in, detection
overlays on, multipart HTTP streams out."""

__version__ = "0.1.0"
