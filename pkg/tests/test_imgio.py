import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shapemotion.imgio import (ColorFrame, FrameFormatError, GrayFrame, encode_gray,
                               load_frame, parse_frame, save_gray, to_grayscale)


def test_parse_p5():
    frame = parse_frame(b"P5\n2 2\n255\n" + bytes([1, 2, 3, 4]))
    assert isinstance(frame, GrayFrame)
    assert (frame.width, frame.height) == (2, 2)
    assert frame.pixels.tolist() == [[1, 2], [3, 4]]


def test_parse_p6():
    frame = parse_frame(b"P6\n1 1\n255\n" + bytes([10, 20, 30]))
    assert isinstance(frame, ColorFrame)
    assert frame.pixels[0, 0].tolist() == [10, 20, 30]


def test_header_comments_are_skipped():
    data = b"P5\n# made by hand\n3 1\n# another\n255\n" + bytes([7, 8, 9])
    assert parse_frame(data).pixels.tolist() == [[7, 8, 9]]


@pytest.mark.parametrize("data", [
    b"P7\n1 1\n255\n\x00",
    b"P2\n1 1\n255\n0",
    b"P5\n2 2\n255\n\x00\x00\x00",        # truncated raster
    b"P5\n1 1\n65535\n\x00\x00",          # unsupported max-value
    b"P5\n1 1\n",                          # truncated header
])
def test_malformed_input_rejected(data):
    with pytest.raises(FrameFormatError):
        parse_frame(data)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_frame(tmp_path / "nope.pgm")


def test_save_single_black_pixel(tmp_path):
    path = tmp_path / "one.pgm"
    save_gray(GrayFrame(np.zeros((1, 1), np.uint8)), path)
    assert path.read_bytes() == b"P5\n1 1\n255\n\x00"


def test_zero_width_frame_rejected():
    with pytest.raises(ValueError):
        GrayFrame(np.zeros((3, 0), np.uint8))


def test_timestamp_defaults_to_index_over_fps(tmp_path):
    path = tmp_path / "f.pgm"
    save_gray(GrayFrame(np.zeros((2, 2), np.uint8)), path)
    assert load_frame(path, index=6, fps=30.0).timestamp == pytest.approx(0.2)


@given(arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12))))
@settings(max_examples=50, deadline=None)
def test_round_trip_identity(pixels):
    frame = parse_frame(encode_gray(GrayFrame(pixels)))
    assert frame.pixels.shape == pixels.shape
    assert np.array_equal(frame.pixels, pixels)


@pytest.mark.parametrize("rgb,expected", [((255, 255, 255), 255), ((0, 0, 0), 0), ((255, 0, 0), 76)])
def test_grayscale_values(rgb, expected):
    frame = ColorFrame(np.array([[rgb]], np.uint8), index=4, timestamp=1.5)
    gray = to_grayscale(frame)
    assert gray.pixels[0, 0] == expected
    assert (gray.index, gray.timestamp) == (4, 1.5)


def test_grayscale_rounds_half_up():
    # compare with the exact rational value of the weighted sum
    for r, g, b in [(1, 1, 1), (5, 0, 0), (0, 0, 5), (200, 100, 50)]:
        exact = (299 * r + 587 * g + 114 * b) / 1000
        out = to_grayscale(ColorFrame(np.array([[[r, g, b]]], np.uint8))).pixels[0, 0]
        assert out == int(np.floor(exact + 0.5))


@given(st.tuples(*[st.integers(0, 255)] * 3), st.integers(0, 2), st.integers(1, 255))
def test_grayscale_monotone_and_bounded(rgb, channel, bump):
    base = np.array([[rgb]], np.uint8)
    raised = base.astype(int)
    raised[0, 0, channel] = min(255, raised[0, 0, channel] + bump)
    lo = to_grayscale(ColorFrame(base)).pixels[0, 0]
    hi = to_grayscale(ColorFrame(raised.astype(np.uint8))).pixels[0, 0]
    assert 0 <= lo <= hi <= 255
