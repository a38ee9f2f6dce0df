"""Axis-aligned bounding boxes in normalized image coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateBox, InvalidBox


@dataclass(frozen=True)
class BoundingBox:
    """left/top/width/height as fractions of the image, all inside [0, 1]."""

    left: float
    top: float
    width: float
    height: float

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise DegenerateBox(f"box {self.width}x{self.height} has no area")
        if self.left < 0 or self.top < 0:
            raise InvalidBox("box origin outside the unit square")
        if self.left + self.width > 1 + 1e-12 or self.top + self.height > 1 + 1e-12:
            raise InvalidBox("box extends past the unit square")

    @property
    def right(self) -> float:
        return self.left + self.width

    @property
    def bottom(self) -> float:
        return self.top + self.height

    def area(self) -> float:
        return self.width * self.height

    def to_json(self) -> dict:
        return {"left": self.left, "top": self.top, "width": self.width, "height": self.height}

    @classmethod
    def from_json(cls, doc: dict) -> "BoundingBox":
        return cls(doc["left"], doc["top"], doc["width"], doc["height"])


def intersection_over_union(a: BoundingBox, b: BoundingBox) -> float:
    """IoU computed in exact rational arithmetic, rounded once at the end.

    Floats are binary rationals, so Fraction(value) is exact; the one
    rounding step is the final float conversion (relative error <= 2^-53).
    """
    al, at = Fraction(a.left), Fraction(a.top)
    ar, ab = al + Fraction(a.width), at + Fraction(a.height)
    bl, bt = Fraction(b.left), Fraction(b.top)
    br, bb = bl + Fraction(b.width), bt + Fraction(b.height)

    iw = min(ar, br) - max(al, bl)
    ih = min(ab, bb) - max(at, bt)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = Fraction(a.width) * Fraction(a.height) + Fraction(b.width) * Fraction(b.height) - inter
    return float(inter / union)
