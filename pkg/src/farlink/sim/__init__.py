from .rng import SplitMix64
from .world import (
    SourceConfig,
    SourceMode,
    Target,
    WorldState,
    initial_world,
    step_world,
    world_at,
)
from .render import (
    BACKGROUND_RGB,
    FOOTPRINT_M,
    FPV_LOOKAHEAD_M,
    ground_truth_boxes,
    render_camera,
    render_camera_array,
    target_pixel_rect,
)
from .sources import (
    BadHeader,
    IngestSource,
    play_sequence,
    read_sequence,
    record_sequence,
    send_frames,
    synthetic_frames,
)

__all__ = [
    "SplitMix64",
    "SourceConfig",
    "SourceMode",
    "Target",
    "WorldState",
    "initial_world",
    "step_world",
    "world_at",
    "BACKGROUND_RGB",
    "FOOTPRINT_M",
    "FPV_LOOKAHEAD_M",
    "ground_truth_boxes",
    "render_camera",
    "render_camera_array",
    "target_pixel_rect",
    "BadHeader",
    "IngestSource",
    "play_sequence",
    "read_sequence",
    "record_sequence",
    "send_frames",
    "synthetic_frames",
]
