"""Binary PGM/PPM frame I/O and grayscale conversion.

Frames carry their pixel buffer as a numpy array: ``(height, width)`` uint8
for gray, ``(height, width, 3)`` uint8 for color.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


class FrameFormatError(ValueError):
    """Raised for malformed or unsupported PNM data."""


@dataclass
class GrayFrame:
    pixels: np.ndarray
    index: int = 0
    timestamp: float = 0.0

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels)
        if self.pixels.ndim != 2:
            raise ValueError("gray pixels must be a 2-D array")
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ValueError("frame width and height must be >= 1")
        if self.pixels.dtype != np.uint8:
            self.pixels = np.clip(np.rint(self.pixels), 0, 255).astype(np.uint8)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass
class ColorFrame:
    pixels: np.ndarray
    index: int = 0
    timestamp: float = 0.0

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError("color pixels must have shape (height, width, 3)")
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ValueError("frame width and height must be >= 1")
        if self.pixels.dtype != np.uint8:
            self.pixels = np.clip(np.rint(self.pixels), 0, 255).astype(np.uint8)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def _read_header(data: bytes):
    """Parse magic, width, height, maxval; return them with the data offset."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < 4:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise FrameFormatError("truncated header")
        if data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
        if len(tokens) == 1 and tokens[0] not in (b"P5", b"P6"):
            raise FrameFormatError(f"unsupported magic {tokens[0][:2]!r}")
    # exactly one whitespace byte separates maxval from the raster
    if pos >= n or not data[pos:pos + 1].isspace():
        raise FrameFormatError("truncated header")
    pos += 1
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FrameFormatError("non-numeric header field") from exc
    if width < 1 or height < 1:
        raise FrameFormatError("width and height must be >= 1")
    if maxval != 255:
        raise FrameFormatError(f"max-value must be 255, got {maxval}")
    return tokens[0], width, height, pos


def parse_frame(data: bytes, index: int = 0, timestamp: float | None = None,
                fps: float = 30.0):
    """Decode P5/P6 bytes into a GrayFrame or ColorFrame."""
    magic, width, height, offset = _read_header(data)
    channels = 1 if magic == b"P5" else 3
    size = width * height * channels
    raster = data[offset:offset + size]
    if len(raster) < size:
        raise FrameFormatError(f"truncated pixel data: need {size} bytes, have {len(raster)}")
    arr = np.frombuffer(raster, dtype=np.uint8)
    if timestamp is None:
        timestamp = index / fps
    if channels == 1:
        return GrayFrame(arr.reshape(height, width).copy(), index, timestamp)
    return ColorFrame(arr.reshape(height, width, 3).copy(), index, timestamp)


def load_frame(path, index: int = 0, timestamp: float | None = None, fps: float = 30.0):
    """Load a binary PGM (P5) or PPM (P6) file.

    ``timestamp`` defaults to ``index / fps`` since the files carry no time.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_frame(data, index=index, timestamp=timestamp, fps=fps)


def encode_gray(frame: GrayFrame) -> bytes:
    pixels = np.ascontiguousarray(frame.pixels, dtype=np.uint8)
    h, w = pixels.shape
    if w < 1 or h < 1:
        raise ValueError("cannot encode an empty frame")
    return b"P5\n%d %d\n255\n" % (w, h) + pixels.tobytes()


def save_gray(frame: GrayFrame, path) -> None:
    data = encode_gray(frame)
    with open(os.fspath(path), "wb") as fh:
        fh.write(data)


def save_color(frame: ColorFrame, path) -> None:
    pixels = np.ascontiguousarray(frame.pixels, dtype=np.uint8)
    h, w, _ = pixels.shape
    with open(os.fspath(path), "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h) + pixels.tobytes())


# Rec.601 luma, scaled to integers so rounding is exact (half rounds up).
_LUMA = np.array([299, 587, 114], dtype=np.int64)


def to_grayscale(frame):
    """Convert a ColorFrame to a GrayFrame; GrayFrames pass through unchanged."""
    if isinstance(frame, GrayFrame):
        return frame
    weighted = frame.pixels.astype(np.int64) @ _LUMA
    gray = (weighted + 500) // 1000
    return GrayFrame(np.clip(gray, 0, 255).astype(np.uint8), frame.index, frame.timestamp)
