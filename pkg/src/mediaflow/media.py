"""Image and video payload formats.

Images are binary netpbm: PGM (P5) for grayscale, PPM (P6) for RGB, 8-bit
only. Video is a minimal container: one UTF-8 JSON header line
``{"frame_rate": r, "frames": n}`` terminated by ``\\n``, followed by n
frame payloads, each prefixed with its length as an 8-byte big-endian
unsigned integer. Frames are themselves PGM/PPM payloads.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import MalformedContainer, MalformedImage, ZeroDimension


@dataclass
class ImageGrid:
    """Decoded raster: row-major, channel-interleaved 8-bit samples."""

    width: int
    height: int
    channels: int  # 1 = grayscale, 3 = RGB
    pixels: bytes

    def __post_init__(self):
        if self.channels not in (1, 3):
            raise MalformedImage(f"unsupported channel count {self.channels}")
        expected = self.width * self.height * self.channels
        if len(self.pixels) != expected:
            raise MalformedImage(
                f"pixel buffer holds {len(self.pixels)} bytes, expected {expected}"
            )

    def sample(self, x: int, y: int) -> tuple:
        base = (y * self.width + x) * self.channels
        return tuple(self.pixels[base : base + self.channels])

    def digest(self) -> str:
        header = f"{self.width}x{self.height}x{self.channels}".encode()
        return hashlib.sha256(header + b"\0" + self.pixels).hexdigest()


def _read_header_tokens(data: bytes, count: int, start: int) -> tuple[list[int], int]:
    """Read whitespace-separated ASCII integers, honoring '#' comments."""
    tokens: list[int] = []
    i = start
    while len(tokens) < count:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if i < len(data) and data[i] == ord("#"):
            while i < len(data) and data[i] != ord("\n"):
                i += 1
            continue
        j = i
        while j < len(data) and not data[j : j + 1].isspace():
            j += 1
        if j == i:
            raise MalformedImage("truncated netpbm header")
        try:
            tokens.append(int(data[i:j]))
        except ValueError:
            raise MalformedImage(f"bad netpbm header token {data[i:j]!r}") from None
        i = j
    if i >= len(data) or not data[i : i + 1].isspace():
        raise MalformedImage("missing whitespace before raster")
    return tokens, i + 1


def decode_image(payload: bytes) -> ImageGrid:
    if payload[:2] == b"P5":
        channels = 1
    elif payload[:2] == b"P6":
        channels = 3
    else:
        raise MalformedImage("not a P5/P6 netpbm payload")
    (width, height, maxval), offset = _read_header_tokens(payload, 3, 2)
    if width <= 0 or height <= 0:
        raise MalformedImage(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise MalformedImage(f"only 8-bit rasters supported (maxval {maxval})")
    raster = payload[offset : offset + width * height * channels]
    return ImageGrid(width, height, channels, raster)


def encode_image(grid: ImageGrid) -> bytes:
    magic = b"P5" if grid.channels == 1 else b"P6"
    return magic + f"\n{grid.width} {grid.height}\n255\n".encode() + grid.pixels


# --- video container ---------------------------------------------------------


@dataclass
class VideoContainer:
    frame_rate: float  # native frames / second
    frames: list[bytes]  # PGM/PPM payloads in display order

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    def duration_seconds(self) -> Fraction:
        return Fraction(self.frame_count) / Fraction(self.frame_rate)


def encode_video(container: VideoContainer) -> bytes:
    header = json.dumps(
        {"frame_rate": container.frame_rate, "frames": container.frame_count}
    ).encode() + b"\n"
    parts = [header]
    for frame in container.frames:
        parts.append(len(frame).to_bytes(8, "big"))
        parts.append(frame)
    return b"".join(parts)


def decode_video(payload: bytes) -> VideoContainer:
    newline = payload.find(b"\n")
    if newline < 0:
        raise MalformedContainer("missing header line")
    try:
        header = json.loads(payload[:newline].decode("utf-8"))
        frame_rate = float(header["frame_rate"])
        count = int(header["frames"])
    except (ValueError, KeyError, UnicodeDecodeError) as exc:
        raise MalformedContainer(f"bad header: {exc}") from None
    if frame_rate <= 0:
        raise MalformedContainer("frame_rate must be positive")
    if count <= 0:
        raise MalformedContainer("container holds no frames")
    frames = []
    i = newline + 1
    for _ in range(count):
        if i + 8 > len(payload):
            raise MalformedContainer("truncated frame length prefix")
        length = int.from_bytes(payload[i : i + 8], "big")
        i += 8
        if i + length > len(payload):
            raise MalformedContainer("truncated frame payload")
        frames.append(payload[i : i + length])
        i += length
    return VideoContainer(frame_rate=frame_rate, frames=frames)


# --- pixel operations --------------------------------------------------------


def resize_nearest(grid: ImageGrid, out_width: int, out_height: int) -> ImageGrid:
    """Nearest-neighbor resize; source index = (dst * src_dim) // out_dim."""
    if out_width <= 0 or out_height <= 0:
        raise ZeroDimension("resize target must be positive")
    ch = grid.channels
    src = grid.pixels
    rows = []
    for y in range(out_height):
        sy = (y * grid.height) // out_height
        row_base = sy * grid.width * ch
        row = bytearray()
        for x in range(out_width):
            sx = (x * grid.width) // out_width
            base = row_base + sx * ch
            row += src[base : base + ch]
        rows.append(bytes(row))
    return ImageGrid(out_width, out_height, ch, b"".join(rows))


def flip_horizontal(grid: ImageGrid) -> ImageGrid:
    ch = grid.channels
    out = bytearray()
    for y in range(grid.height):
        row_base = y * grid.width * ch
        for x in range(grid.width - 1, -1, -1):
            base = row_base + x * ch
            out += grid.pixels[base : base + ch]
    return ImageGrid(grid.width, grid.height, ch, bytes(out))


def rotate_quarter_turns(grid: ImageGrid, turns: int) -> ImageGrid:
    """Rotate clockwise by 90° * turns (turns in {1, 2, 3})."""
    if turns % 4 == 0:
        return grid
    ch = grid.channels
    w, h = grid.width, grid.height
    if turns % 2 == 0:
        ow, oh = w, h
    else:
        ow, oh = h, w
    out = bytearray(ow * oh * ch)
    for y in range(h):
        for x in range(w):
            if turns % 4 == 1:  # 90° cw: (x, y) -> (h-1-y, x)
                nx, ny = h - 1 - y, x
            elif turns % 4 == 2:  # 180°
                nx, ny = w - 1 - x, h - 1 - y
            else:  # 270° cw: (x, y) -> (y, w-1-x)
                nx, ny = y, w - 1 - x
            src = (y * w + x) * ch
            dst = (ny * ow + nx) * ch
            out[dst : dst + ch] = grid.pixels[src : src + ch]
    return ImageGrid(ow, oh, ch, bytes(out))
