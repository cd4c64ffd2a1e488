import numpy as np

from farlink.model import BBox, Detection, DetectionResult, Frame, StreamId, bbox_to_pixels
from farlink.overlay import OverlayStyle, draw_overlay, label_text, tag_rect


def base_frame(w=640, h=480) -> Frame:
    return Frame.from_array(np.full((h, w, 3), 64, np.uint8), StreamId.FPV, 3, 12345)


def result_with(*boxes, conf=1.0) -> DetectionResult:
    dets = tuple(Detection(0, conf, b) for b in boxes)
    return DetectionResult(StreamId.FPV, 3, 99, 1, dets)


def test_no_result_is_byte_identical():
    f = base_frame()
    assert draw_overlay(f, None, OverlayStyle()).payload == f.payload
    assert draw_overlay(f, result_with(), OverlayStyle()).payload == f.payload


def test_border_pixels_and_interior():
    f = base_frame()
    out = draw_overlay(
        f, result_with(BBox(0.25, 0.25, 0.5, 0.5)), OverlayStyle(label_enabled=False)
    )
    arr = out.to_array()
    # rect at (160,120) size 320x240, border 2
    assert (arr[120, 160:480] == (0, 255, 0)).all()  # top band row
    assert (arr[121, 160:480] == (0, 255, 0)).all()
    assert (arr[359, 160:480] == (0, 255, 0)).all()  # bottom band
    assert (arr[120:360, 160] == (0, 255, 0)).all()  # left band
    assert (arr[120:360, 479] == (0, 255, 0)).all()  # right band
    assert (arr[240, 320] == (64, 64, 64)).all()  # interior untouched
    assert (arr[122, 320] == (64, 64, 64)).all()  # just inside the border


def test_metadata_preserved():
    f = base_frame()
    out = draw_overlay(f, result_with(BBox(0.1, 0.1, 0.2, 0.2)), OverlayStyle())
    assert (out.seq, out.capture_ts_ns, out.width, out.height) == (
        f.seq,
        f.capture_ts_ns,
        f.width,
        f.height,
    )


def test_edge_box_stays_in_bounds():
    f = base_frame()
    out = draw_overlay(f, result_with(BBox(0.0, 0.0, 0.1, 0.1)), OverlayStyle())
    assert out.width == 640 and len(out.payload) == 640 * 480 * 3


def test_locality_outside_borders_and_tags():
    f = base_frame()
    style = OverlayStyle()
    box = BBox(0.25, 0.25, 0.5, 0.5)
    det = Detection(0, 1.0, box)
    out = draw_overlay(f, result_with(box), style)
    before = f.to_array().astype(int)
    after = out.to_array().astype(int)
    changed = np.argwhere((before != after).any(axis=2))
    x0, y0, w, h = bbox_to_pixels(box, 640, 480)
    t = style.border_px
    tag = tag_rect(det, 640, 480)
    for r, c in changed:
        in_border = (
            x0 <= c < x0 + w
            and y0 <= r < y0 + h
            and (
                r < y0 + t or r >= y0 + h - t or c < x0 + t or c >= x0 + w - t
            )
        )
        in_tag = tag is not None and (
            tag[0] <= c < tag[0] + tag[2] and tag[1] <= r < tag[1] + tag[3]
        )
        assert in_border or in_tag, (r, c)


def test_label_text_formats():
    assert label_text(Detection(0, 1.0, BBox(0, 0, 0.1, 0.1))) == "P 100%"
    assert label_text(Detection(0, 0.87, BBox(0, 0, 0.1, 0.1))) == "P 87%"
    assert label_text(Detection(3, 0.5, BBox(0, 0, 0.1, 0.1))) == "3 50%"


def test_tag_flips_below_box_at_top_edge():
    det = Detection(0, 1.0, BBox(0.0, 0.0, 0.2, 0.2))
    x0, y0, w, h = bbox_to_pixels(det.box, 640, 480)
    tag = tag_rect(det, 640, 480)
    assert tag is not None
    assert tag[1] == y0 + h  # below the box

    det2 = Detection(0, 1.0, BBox(0.25, 0.25, 0.5, 0.5))
    tag2 = tag_rect(det2, 640, 480)
    y2 = bbox_to_pixels(det2.box, 640, 480)[1]
    assert tag2[1] + tag2[3] == y2  # sits directly above the box


def test_tag_drawn_pixels_use_box_color():
    f = base_frame()
    box = BBox(0.25, 0.25, 0.5, 0.5)
    out = draw_overlay(f, result_with(box, conf=1.0), OverlayStyle())
    arr = out.to_array()
    det = Detection(0, 1.0, box)
    tx, ty, tw, th = tag_rect(det, 640, 480)
    tag_pixels = arr[ty : ty + th, tx : tx + tw].reshape(-1, 3)
    colors = {tuple(px) for px in tag_pixels.tolist()}
    assert colors == {(0, 0, 0), (0, 255, 0)}  # filled background + glyphs
