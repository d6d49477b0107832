"""Tiered medical record sizes and file-class subset arithmetic.

Sizes are in GB (10^9 bytes) throughout; rates elsewhere use the same GB so
delay ratios stay unit-consistent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum


class FileClass(Enum):
    """One tier of a medical record set."""

    TEXT = "text"
    IMAGE = "image"
    VIDEO = "video"

    def __str__(self) -> str:
        return self.value


# Canonical ordering used for deterministic iteration, labels and tie-breaks.
CLASS_ORDER = (FileClass.TEXT, FileClass.IMAGE, FileClass.VIDEO)
ALL_CLASSES = frozenset(CLASS_ORDER)
EMPTY_SUBSET: frozenset = frozenset()


class VideoMode(Enum):
    """Which video recording the size calculations use."""

    CONVENTIONAL = "conventional"
    DVS = "dvs"


@dataclass(frozen=True)
class RecordSet:
    """Per-class record sizes in GB.

    The video tier carries two sizes: the conventional frame-based recording
    and the much smaller event-camera (DVS) recording; VideoMode picks one.
    Defaults are the reference scenario sizes, but every size is an input.
    """

    text_gb: float = 3.0
    image_gb: float = 87.0
    video_conventional_gb: float = 200.0
    video_dvs_gb: float = 16.66

    def __post_init__(self):
        for name in ("text_gb", "image_gb", "video_conventional_gb", "video_dvs_gb"):
            if getattr(self, name) < 0:
                raise ValueError(f"records.{name} must be >= 0")
        if self.video_dvs_gb > self.video_conventional_gb:
            raise ValueError("records.video_dvs_gb cannot exceed video_conventional_gb")

    def video_gb(self, mode: VideoMode) -> float:
        return self.video_dvs_gb if mode is VideoMode.DVS else self.video_conventional_gb

    def class_gb(self, file_class: FileClass, mode: VideoMode) -> float:
        if file_class is FileClass.TEXT:
            return self.text_gb
        if file_class is FileClass.IMAGE:
            return self.image_gb
        return self.video_gb(mode)


def subset_size(subset, records: RecordSet, mode: VideoMode) -> float:
    """Total size in GB of the given file classes.

    Summation follows the canonical class order so equal subsets always
    produce bit-identical totals.
    """
    return sum(records.class_gb(c, mode) for c in CLASS_ORDER if c in subset)


def full_emr_size(records: RecordSet, mode: VideoMode) -> float:
    """Size in GB of the complete three-tier record set."""
    return subset_size(ALL_CLASSES, records, mode)


def _powerset() -> tuple:
    out = []
    for k in range(len(CLASS_ORDER) + 1):
        for combo in itertools.combinations(CLASS_ORDER, k):
            out.append(frozenset(combo))
    return tuple(out)


# All 8 subsets of the three classes, smallest cardinality first.
ALL_SUBSETS = _powerset()


def subset_label(subset) -> str:
    """Canonical text form, e.g. 'text+image'; the empty subset is '(none)'."""
    if not subset:
        return "(none)"
    return "+".join(c.value for c in CLASS_ORDER if c in subset)


def parse_subset(names) -> frozenset:
    """Build a subset from class names; accepts 'text+image' or an iterable."""
    if isinstance(names, str):
        names = [] if names in ("", "(none)") else names.split("+")
    classes = set()
    for name in names:
        try:
            classes.add(FileClass(str(name).strip().lower()))
        except ValueError:
            raise ValueError(f"unknown file class: {name!r}") from None
    return frozenset(classes)
