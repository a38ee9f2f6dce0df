"""Multi-label dataset substrate and the deterministic synthetic detector.

Holds the eight health-condition labels, labeled examples with optional
ground-truth boxes, preprocessing and augmentation of rasters, the
70/20/10 split, minority-class oversampling, and a profile-driven
detector whose hits and misses are pure functions of (seed, example id,
label index) via the fixed 64-bit hash (see hashing module).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .boxes import BoundingBox
from .errors import DatasetTooSmall, NoPositives, TooSmall, ZeroDimension
from .hashing import HashStream, hash_parts, unit_interval
from .media import ImageGrid, flip_horizontal, resize_nearest, rotate_quarter_turns

CONDITION_LABELS = (
    "dental_issues",
    "skin_lesions",
    "eye_abnormalities",
    "ear_infections",
    "limping",
    "respiratory_distress",
    "gastrointestinal_problems",
    "behavioral_changes",
)

LABEL_INDEX = {name: i + 1 for i, name in enumerate(CONDITION_LABELS)}  # 1-based

MIN_SHORT_SIDE = 80

EXAMPLE_SOURCES = ("Clinic", "Crowdsourced", "Repository", "VideoFrame")


def label_index(name: str) -> int:
    try:
        return LABEL_INDEX[name]
    except KeyError:
        raise ValueError(f"unknown condition label {name!r}") from None


@dataclass
class LabeledExample:
    asset_id: str
    labels: frozenset[str]
    boxes: dict[str, list[BoundingBox]] = field(default_factory=dict)
    source: str = "Clinic"
    variant: Optional[int] = None  # set on oversampling duplicates

    def __post_init__(self):
        unknown = set(self.labels) - set(CONDITION_LABELS)
        if unknown:
            raise ValueError(f"labels outside the condition set: {sorted(unknown)}")
        boxed_only = set(self.boxes) - set(self.labels)
        if boxed_only:
            raise ValueError(f"boxes for labels not assigned: {sorted(boxed_only)}")
        if self.source not in EXAMPLE_SOURCES:
            raise ValueError(f"unknown source {self.source!r}")

    def to_json(self) -> dict:
        doc = {
            "asset_id": self.asset_id,
            "labels": sorted(self.labels),
            "boxes": {name: [b.to_json() for b in bs] for name, bs in sorted(self.boxes.items())},
            "source": self.source,
        }
        if self.variant is not None:
            doc["variant"] = self.variant
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "LabeledExample":
        return cls(
            asset_id=doc["asset_id"],
            labels=frozenset(doc["labels"]),
            boxes={
                name: [BoundingBox.from_json(b) for b in bs]
                for name, bs in doc.get("boxes", {}).items()
            },
            source=doc.get("source", "Clinic"),
            variant=doc.get("variant"),
        )


@dataclass
class LabeledDataset:
    examples: list[LabeledExample]

    @property
    def n(self) -> int:
        return len(self.examples)

    def label_counts(self) -> dict[str, int]:
        counts = {name: 0 for name in CONDITION_LABELS}
        for example in self.examples:
            for name in example.labels:
                counts[name] += 1
        return counts

    def asset_ids(self) -> set[str]:
        return {e.asset_id for e in self.examples}

    def digest(self) -> str:
        h = hashlib.sha256()
        for example in self.examples:
            h.update(json.dumps(example.to_json(), sort_keys=True).encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def save_manifest(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as handle:
            for example in self.examples:
                handle.write(json.dumps(example.to_json(), ensure_ascii=False) + "\n")

    @classmethod
    def load_manifest(cls, path: Path) -> "LabeledDataset":
        examples = []
        with Path(path).open("r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    examples.append(LabeledExample.from_json(json.loads(line)))
        return cls(examples)


# --- preprocessing -----------------------------------------------------------


def preprocess(grid: ImageGrid) -> tuple[ImageGrid, list[float]]:
    """Enforce the 80-pixel minimum short side and return the /255 view.

    Images already at or above the minimum pass through unchanged; smaller
    ones are upscaled (nearest-neighbor) so the short side is exactly 80
    with the long side rounded half-up, preserving aspect ratio.
    """
    if grid.width == 0 or grid.height == 0:
        raise ZeroDimension("image has a zero dimension")
    short = min(grid.width, grid.height)
    if short < MIN_SHORT_SIDE:
        if grid.width <= grid.height:
            out_w = MIN_SHORT_SIDE
            out_h = (2 * grid.height * MIN_SHORT_SIDE + grid.width) // (2 * grid.width)
        else:
            out_h = MIN_SHORT_SIDE
            out_w = (2 * grid.width * MIN_SHORT_SIDE + grid.height) // (2 * grid.height)
        grid = resize_nearest(grid, out_w, out_h)
    normalized = [p / 255 for p in grid.pixels]
    return grid, normalized


def augment(grid: ImageGrid, seed: int) -> list[ImageGrid]:
    """Return [crop, flip, rotate] variants, deterministic per (pixels, seed).

    Crop picks a window covering at least 80% of each dimension and
    resizes it back to the source dimensions; rotate picks one of
    90/180/270 degrees.
    """
    if grid.width < 8 or grid.height < 8:
        raise TooSmall(f"{grid.width}x{grid.height} below the 8x8 augmentation minimum")
    stream = HashStream(seed, grid.digest(), "augment")

    min_w = -(-8 * grid.width // 10)  # ceil(0.8 w)
    min_h = -(-8 * grid.height // 10)
    crop_w = min_w + stream.next_below(grid.width - min_w + 1)
    crop_h = min_h + stream.next_below(grid.height - min_h + 1)
    off_x = stream.next_below(grid.width - crop_w + 1)
    off_y = stream.next_below(grid.height - crop_h + 1)
    ch = grid.channels
    rows = []
    for y in range(off_y, off_y + crop_h):
        base = (y * grid.width + off_x) * ch
        rows.append(grid.pixels[base : base + crop_w * ch])
    window = ImageGrid(crop_w, crop_h, ch, b"".join(rows))
    crop = resize_nearest(window, grid.width, grid.height)

    flip = flip_horizontal(grid)
    rotate = rotate_quarter_turns(grid, 1 + stream.next_below(3))
    return [crop, flip, rotate]


# --- split and balance -------------------------------------------------------


def split_dataset(
    dataset: LabeledDataset, seed: int
) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """Seeded shuffle, then 70% train / 20% validation / rest held out."""
    n = dataset.n
    if n < 10:
        raise DatasetTooSmall(f"need at least 10 examples, got {n}")
    shuffled = HashStream(seed, "split").shuffled(dataset.examples)
    n_train = (7 * n) // 10
    n_val = (2 * n) // 10
    return (
        LabeledDataset(shuffled[:n_train]),
        LabeledDataset(shuffled[n_train : n_train + n_val]),
        LabeledDataset(shuffled[n_train + n_val :]),
    )


def split_report(
    train: LabeledDataset, validation: LabeledDataset, test: LabeledDataset, seed: int
) -> dict:
    return {
        "seed": seed,
        "sizes": {"train": train.n, "validation": validation.n, "test": test.n},
        "label_counts": {
            "train": train.label_counts(),
            "validation": validation.label_counts(),
            "test": test.label_counts(),
        },
    }


def balance(dataset: LabeledDataset, alpha: float = 0.5, seed: int = 0) -> LabeledDataset:
    """Oversample minority labels up to floor(alpha * max label count).

    Duplicates are seeded-random draws from the label's positives, tagged
    with a variant number standing for an augmented copy. Originals are
    always retained. A label that needs boosting but has zero positives is
    an error: there is nothing to duplicate from.
    """
    if not dataset.examples:
        raise DatasetTooSmall("cannot balance an empty dataset")
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    counts = dataset.label_counts()
    target = math.floor(alpha * max(counts.values()) + 1e-9)
    out = list(dataset.examples)
    next_variant: dict[str, int] = {}
    for name in CONDITION_LABELS:
        if counts[name] >= target:
            continue
        if counts[name] == 0:
            raise NoPositives(f"label {name} has no positive examples to oversample")
        pool = sorted(
            (e for e in dataset.examples if name in e.labels), key=lambda e: e.asset_id
        )
        stream = HashStream(seed, "balance", label_index(name))
        while counts[name] < target:
            chosen = pool[stream.next_below(len(pool))]
            variant = next_variant.get(chosen.asset_id, 0) + 1
            next_variant[chosen.asset_id] = variant
            duplicate = LabeledExample(
                asset_id=chosen.asset_id,
                labels=chosen.labels,
                boxes=chosen.boxes,
                source=chosen.source,
                variant=variant,
            )
            out.append(duplicate)
            for other in duplicate.labels:
                counts[other] += 1
    return LabeledDataset(out)


# --- synthetic detector ------------------------------------------------------


@dataclass(frozen=True)
class LabelProfile:
    """Target hit/false-alarm behavior for one label."""

    tpr: float = 0.92
    fpr: float = 0.02
    pos_confidence_range: tuple[float, float] = (0.6, 1.0)
    neg_confidence_range: tuple[float, float] = (0.0, 0.4)

    def __post_init__(self):
        a, b = self.pos_confidence_range
        c, d = self.neg_confidence_range
        if not (0.5 < a <= b <= 1.0):
            raise ValueError(f"positive confidence range {a}..{b} must sit inside (0.5, 1]")
        if not (0.0 <= c <= d <= 0.5):
            raise ValueError(f"negative confidence range {c}..{d} must sit inside [0, 0.5]")
        if not (0.0 <= self.tpr <= 1.0 and 0.0 <= self.fpr <= 1.0):
            raise ValueError("tpr and fpr must be fractions")

    def to_json(self) -> dict:
        return {
            "tpr": self.tpr,
            "fpr": self.fpr,
            "pos_confidence_range": list(self.pos_confidence_range),
            "neg_confidence_range": list(self.neg_confidence_range),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LabelProfile":
        return cls(
            tpr=doc.get("tpr", 0.92),
            fpr=doc.get("fpr", 0.02),
            pos_confidence_range=tuple(doc.get("pos_confidence_range", (0.6, 1.0))),
            neg_confidence_range=tuple(doc.get("neg_confidence_range", (0.0, 0.4))),
        )


@dataclass(frozen=True)
class LabelDetection:
    label: str
    confidence: float
    box: Optional[BoundingBox] = None

    def __post_init__(self):
        if self.label not in LABEL_INDEX:
            raise ValueError(f"unknown condition label {self.label!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    def to_json(self) -> dict:
        doc: dict = {"label": self.label, "confidence": self.confidence}
        if self.box is not None:
            doc["box"] = self.box.to_json()
        return doc


class SyntheticDetector:
    """Deterministic stand-in for a trained vision model.

    For key k (an example's asset id, or an image digest in uncoupled
    mode) and label j, the presence draw is u = unit(hash(seed, k, j)):
    ground-truth positives score in the positive confidence range when
    u < tpr, ground-truth negatives when u < fpr, otherwise in the
    negative range. The confidence's position inside its range is a second
    draw, hash(seed, k, j, "confidence"). Box coordinates are the ground
    truth jittered by at most ``box_jitter`` per coordinate.
    """

    CONFIDENCE_SALT = "confidence"
    TRUTH_SALT = "truth"

    def __init__(
        self,
        seed: int,
        profiles: Optional[dict[str, LabelProfile]] = None,
        box_jitter: float = 0.02,
        base_rate: float = 0.25,
    ):
        self.seed = seed
        self.profiles = {name: LabelProfile() for name in CONDITION_LABELS}
        if profiles:
            for name, profile in profiles.items():
                if name not in LABEL_INDEX:
                    raise ValueError(f"unknown condition label {name!r}")
                self.profiles[name] = profile
        if not 0 <= box_jitter <= 0.5:
            raise ValueError("box_jitter must be in [0, 0.5]")
        self.box_jitter = box_jitter
        self.base_rate = base_rate

    # -- draws --------------------------------------------------------------

    def _confidence(self, key: str, j: int, profile: LabelProfile, positive_range: bool) -> float:
        lo, hi = (
            profile.pos_confidence_range if positive_range else profile.neg_confidence_range
        )
        u = unit_interval(hash_parts(self.seed, key, j, self.CONFIDENCE_SALT))
        return lo + (hi - lo) * u

    def _emit(self, key: str, name: str, is_positive: bool) -> float:
        j = label_index(name)
        profile = self.profiles[name]
        u = unit_interval(hash_parts(self.seed, key, j))
        rate = profile.tpr if is_positive else profile.fpr
        return self._confidence(key, j, profile, positive_range=u < rate)

    def _jitter_box(self, key: str, j: int, box_i: int, box: BoundingBox) -> BoundingBox:
        def delta(coord: int) -> float:
            u = unit_interval(hash_parts(self.seed, key, j, "box", box_i, coord))
            return (2 * u - 1) * self.box_jitter

        width = min(max(box.width + delta(2), 1e-6), 1.0)
        height = min(max(box.height + delta(3), 1e-6), 1.0)
        left = min(max(box.left + delta(0), 0.0), 1.0 - width)
        top = min(max(box.top + delta(1), 0.0), 1.0 - height)
        return BoundingBox(left, top, width, height)

    # -- inference ----------------------------------------------------------

    def predict(self, example: LabeledExample) -> list[LabelDetection]:
        """One detection per label (one per ground-truth box where boxed)."""
        detections = []
        for name in CONDITION_LABELS:
            confidence = self._emit(example.asset_id, name, name in example.labels)
            gt_boxes = example.boxes.get(name, [])
            if gt_boxes:
                j = label_index(name)
                for i, box in enumerate(gt_boxes):
                    jittered = self._jitter_box(example.asset_id, j, i, box)
                    detections.append(LabelDetection(name, confidence, jittered))
            else:
                detections.append(LabelDetection(name, confidence))
        return detections

    def pseudo_truth(self, image_digest: str) -> frozenset[str]:
        """Deterministic stand-in labels for images that carry no annotation."""
        present = []
        for name in CONDITION_LABELS:
            u = unit_interval(
                hash_parts(self.seed, image_digest, label_index(name), self.TRUTH_SALT)
            )
            if u < self.base_rate:
                present.append(name)
        return frozenset(present)

    def detect(
        self, image_digest: str, truth_labels: Optional[Iterable[str]] = None
    ) -> list[LabelDetection]:
        """Detections keyed by image digest; pseudo-truth unless coupled."""
        labels = (
            frozenset(truth_labels) if truth_labels is not None else self.pseudo_truth(image_digest)
        )
        return [
            LabelDetection(name, self._emit(image_digest, name, name in labels))
            for name in CONDITION_LABELS
        ]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "profiles": {name: p.to_json() for name, p in sorted(self.profiles.items())},
            "box_jitter": self.box_jitter,
            "base_rate": self.base_rate,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SyntheticDetector":
        return cls(
            seed=doc["seed"],
            profiles={
                name: LabelProfile.from_json(p) for name, p in doc.get("profiles", {}).items()
            },
            box_jitter=doc.get("box_jitter", 0.02),
            base_rate=doc.get("base_rate", 0.25),
        )


# --- synthetic corpora -------------------------------------------------------


def generate_dataset(
    n: int,
    seed: int,
    label_rates: Optional[dict[str, float]] = None,
    box_rate: float = 0.5,
    source: str = "Repository",
) -> LabeledDataset:
    """Desk-scale synthetic corpus: seeded ids, label sets, and boxes.

    ``label_rates`` gives each label's independent prevalence (default
    0.3). ``box_rate`` is the chance a positive label carries one
    ground-truth box.
    """
    rates = {name: 0.3 for name in CONDITION_LABELS}
    if label_rates:
        rates.update(label_rates)
    examples = []
    id_stream = HashStream(seed, "corpus-ids")
    for i in range(n):
        asset_id = id_stream.hex_id()
        labels = set()
        boxes: dict[str, list[BoundingBox]] = {}
        for name in CONDITION_LABELS:
            j = label_index(name)
            if unit_interval(hash_parts(seed, "truth", i, j)) < rates[name]:
                labels.add(name)
                if unit_interval(hash_parts(seed, "has-box", i, j)) < box_rate:
                    u1 = unit_interval(hash_parts(seed, "box", i, j, 0))
                    u2 = unit_interval(hash_parts(seed, "box", i, j, 1))
                    u3 = unit_interval(hash_parts(seed, "box", i, j, 2))
                    u4 = unit_interval(hash_parts(seed, "box", i, j, 3))
                    width = 0.2 + 0.3 * u3
                    height = 0.2 + 0.3 * u4
                    left = (1 - width) * u1
                    top = (1 - height) * u2
                    boxes[name] = [BoundingBox(left, top, width, height)]
        examples.append(
            LabeledExample(asset_id=asset_id, labels=frozenset(labels), boxes=boxes, source=source)
        )
    return LabeledDataset(examples)
