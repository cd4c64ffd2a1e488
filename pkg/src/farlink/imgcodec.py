"""Browser-consumable image encoding (PNG lossless, JPEG for bandwidth)."""
from __future__ import annotations

import io
from enum import Enum

import numpy as np
from PIL import Image

from .model import Frame

JPEG_QUALITY = 80


class ImageCodec(Enum):
    PNG = "png"
    JPEG = "jpeg"

    @property
    def content_type(self) -> str:
        return f"image/{self.value}"


def encode_image(frame: Frame, codec: ImageCodec) -> bytes:
    img = Image.frombuffer(
        "RGB", (frame.width, frame.height), frame.payload, "raw", "RGB", 0, 1
    )
    buf = io.BytesIO()
    if codec == ImageCodec.PNG:
        img.save(buf, format="PNG", compress_level=1)
    elif codec == ImageCodec.JPEG:
        img.save(buf, format="JPEG", quality=JPEG_QUALITY)
    else:
        raise ValueError(f"unsupported codec {codec!r}")
    return buf.getvalue()


def decode_image(data: bytes) -> np.ndarray:
    """(H, W, 3) uint8 pixels of an encoded image (test/verification aid)."""
    img = Image.open(io.BytesIO(data))
    return np.asarray(img.convert("RGB"))
