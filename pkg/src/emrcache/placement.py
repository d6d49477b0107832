"""Penalty tables and the per-device file-placement optimizer.

Each edge device caches one subset of the three file classes, limited by its
storage capacity. Candidate subsets are scored from three penalty families:
a staying-time coefficient for the device's location, a per-class value
coefficient, and a rank coefficient over the cached combination (bigger
combinations rank better because they save more transfer time). The search
is exhaustive over the 8 subsets, which is exact at this problem size.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .records import (
    ALL_CLASSES,
    ALL_SUBSETS,
    CLASS_ORDER,
    FileClass,
    RecordSet,
    VideoMode,
    full_emr_size,
    subset_size,
)

# Slack for capacity and size comparisons on float GB values.
SIZE_EPS = 1e-9

EMPTY_COMBO_PENALTY = 16

DEFAULT_VALUE_PENALTIES = {FileClass.IMAGE: 1, FileClass.TEXT: 2, FileClass.VIDEO: 3}


@dataclass(frozen=True)
class LocationProfile:
    """A place the patient spends part of the day.

    `dwell_hours` is the average daily time spent there; the fraction of the
    day it represents weights that location's delay term.
    """

    name: str
    dwell_hours: float

    @property
    def probability(self) -> float:
        return self.dwell_hours / 24.0


@dataclass(frozen=True)
class EdgeDevice:
    """A cache node pinned to one location."""

    id: str
    capacity_gb: float
    location: LocationProfile


def staying_penalty(hours) -> int:
    """Coefficient for a location occupied `hours` per day: 25 - hours.

    Only whole hours in 1..24 are defined; anything else is rejected.
    """
    h = float(hours)
    if h != int(h) or not 1 <= h <= 24:
        raise ValueError(f"staying time must be a whole number of hours in 1..24, got {hours!r}")
    return 25 - int(h)


def value_penalty(file_class: FileClass) -> int:
    """Default clinical-value coefficient: images 1, text 2, video 3."""
    return DEFAULT_VALUE_PENALTIES[file_class]


def default_staying_table() -> dict:
    return {h: 25 - h for h in range(1, 25)}


def _rank_key(subset, records: RecordSet, mode: VideoMode):
    # Descending size, then fewer classes, then canonical class order.
    lex = tuple(sorted(CLASS_ORDER.index(c) for c in subset))
    return (-subset_size(subset, records, mode), len(subset), lex)


@lru_cache(maxsize=4096)
def ranked_subsets(records: RecordSet, mode: VideoMode) -> tuple:
    """The 7 non-empty subsets ordered largest first."""
    nonempty = [s for s in ALL_SUBSETS if s]
    return tuple(sorted(nonempty, key=lambda s: _rank_key(s, records, mode)))


def combo_penalty(subset, records: RecordSet, mode: VideoMode) -> int:
    """Rank coefficient: 2 x position in the size-descending order; empty set 16.

    Equal-size ties rank the subset with fewer classes first.
    """
    if not subset:
        return EMPTY_COMBO_PENALTY
    order = ranked_subsets(records, mode)
    return 2 * (order.index(frozenset(subset)) + 1)


@dataclass(frozen=True)
class PenaltyTables:
    """The three coefficient families used by the placement score.

    `staying` maps whole hours to a coefficient, `value` maps file classes,
    and `combo` optionally pins explicit combination coefficients; when it is
    None the size-rank rule supplies them for any record sizes.
    """

    staying: dict
    value: dict
    combo: dict | None = None

    def __post_init__(self):
        staying = {int(k): int(v) for k, v in self.staying.items()}
        for h in range(1, 25):
            if h not in staying:
                raise ValueError(f"tables.staying must cover hour {h}")
        value = {FileClass(k) if not isinstance(k, FileClass) else k: int(v)
                 for k, v in self.value.items()}
        for c in CLASS_ORDER:
            if c not in value:
                raise ValueError(f"tables.value must cover file class {c.value}")
        object.__setattr__(self, "staying", staying)
        object.__setattr__(self, "value", value)
        if self.combo is not None:
            combo = {frozenset(k): int(v) for k, v in self.combo.items()}
            object.__setattr__(self, "combo", combo)

    @classmethod
    def default(cls) -> "PenaltyTables":
        return cls(default_staying_table(), dict(DEFAULT_VALUE_PENALTIES))

    def staying_for(self, dwell_hours) -> int:
        h = float(dwell_hours)
        if h != int(h) or int(h) not in self.staying:
            raise ValueError(f"no staying coefficient for dwell time {dwell_hours!r}")
        return self.staying[int(h)]

    def value_for(self, file_class: FileClass) -> int:
        return self.value[file_class]

    def combo_for(self, subset, records: RecordSet, mode: VideoMode) -> int:
        if self.combo is not None and frozenset(subset) in self.combo:
            return self.combo[frozenset(subset)]
        return combo_penalty(subset, records, mode)


class PlacementMode(Enum):
    OMISSION = "omission"  # charge staying+value for classes left out, plus the combo rank
    MIN_COMBO = "min-combo"  # best combo rank that fits
    REFERENCE = "paper"  # the published allocation for the built-in scenario, verbatim
    CUSTOM = "custom"  # user-weighted blend of the three penalty terms


# Published allocation for the built-in scenario, by device id.
REFERENCE_ALLOCATION = {
    "EA": frozenset({FileClass.TEXT, FileClass.IMAGE}),
    "EB": ALL_CLASSES,
    "EC": ALL_CLASSES,
    "ED": frozenset({FileClass.TEXT}),
    "EE": frozenset({FileClass.TEXT}),
}

# Built-in scenario layout: id -> (location name, dwell hours, capacity GB).
REFERENCE_DEVICES = {
    "EA": ("home", 10, 100.0),
    "EB": ("work", 8, 500.0),
    "EC": ("family", 3, 150.0),
    "ED": ("friend", 2, 50.0),
    "EE": ("other", 1, 10.0),
}


def _is_reference_device(device: EdgeDevice, records: RecordSet, mode: VideoMode) -> bool:
    spec = REFERENCE_DEVICES.get(device.id)
    if spec is None:
        return False
    name, dwell, capacity = spec
    return (device.location.name == name
            and device.location.dwell_hours == dwell
            and device.capacity_gb == capacity
            and records == RecordSet()
            and mode is VideoMode.DVS)


def enumerate_feasible(device: EdgeDevice, records: RecordSet, mode: VideoMode) -> list:
    """Every subset whose total size fits the device capacity, empty set included."""
    return [s for s in ALL_SUBSETS
            if subset_size(s, records, mode) <= device.capacity_gb + SIZE_EPS]


def placement_score(subset, device: EdgeDevice, records: RecordSet, video_mode: VideoMode,
                    tables: PenaltyTables, mode: PlacementMode, weights=None) -> float:
    """Score one candidate subset under the given placement mode.

    Leaving a class out of the cache charges that location's staying
    coefficient plus the class value coefficient; the cached combination
    always contributes its rank coefficient.
    """
    excluded = ALL_CLASSES - frozenset(subset)
    staying_term = tables.staying_for(device.location.dwell_hours) * len(excluded)
    value_term = sum(tables.value_for(c) for c in excluded)
    combo_term = tables.combo_for(subset, records, video_mode)
    if mode is PlacementMode.OMISSION:
        return staying_term + value_term + combo_term
    if mode is PlacementMode.MIN_COMBO:
        return combo_term
    if mode is PlacementMode.CUSTOM:
        if weights is None or len(weights) != 3:
            raise ValueError("custom mode needs three weights (staying, value, combo)")
        w_stay, w_value, w_combo = weights
        return w_stay * staying_term + w_value * value_term + w_combo * combo_term
    raise ValueError(f"no score function for mode {mode}")


def optimize_device(device: EdgeDevice, records: RecordSet, tables: PenaltyTables,
                    mode: PlacementMode, *, video_mode: VideoMode = VideoMode.DVS,
                    weights=None) -> frozenset:
    """Pick the cached subset for one device.

    Exhaustive search over the feasible subsets; score ties break toward the
    better combination rank, so the result is deterministic. REFERENCE mode
    returns the published allocation and only accepts the built-in layout.
    """
    if mode is PlacementMode.REFERENCE:
        if not _is_reference_device(device, records, video_mode):
            raise ValueError(
                f"mode 'paper' only applies to the built-in scenario; device {device.id!r} differs")
        return REFERENCE_ALLOCATION[device.id]
    feasible = enumerate_feasible(device, records, video_mode)
    return min(feasible, key=lambda s: (
        placement_score(s, device, records, video_mode, tables, mode, weights),
        tables.combo_for(s, records, video_mode)))


@dataclass(frozen=True)
class PlanEntry:
    """One device's slice of an allocation."""

    device_id: str
    location: str
    subset: frozenset
    cached_gb: float
    residual_gb: float


@dataclass(frozen=True)
class AllocationPlan:
    """Cached subset per device plus what stays at the registered hospital."""

    mode: PlacementMode
    video_mode: VideoMode
    entries: tuple

    def entry_for(self, location_name: str) -> PlanEntry:
        for entry in self.entries:
            if entry.location == location_name:
                return entry
        raise ValueError(f"plan has no device for location {location_name!r}")

    def by_device(self) -> dict:
        return {entry.device_id: entry for entry in self.entries}


def plan_scenario(scenario, mode: PlacementMode, weights=None) -> AllocationPlan:
    """Optimize every device in the scenario and assemble the allocation."""
    full = full_emr_size(scenario.records, scenario.video_mode)
    entries = []
    for device in scenario.devices:
        subset = optimize_device(device, scenario.records, scenario.tables, mode,
                                 video_mode=scenario.video_mode, weights=weights)
        cached = subset_size(subset, scenario.records, scenario.video_mode)
        if cached > device.capacity_gb + SIZE_EPS:
            raise ValueError(f"{device.id}: cached {cached:.3f} GB exceeds capacity")
        entries.append(PlanEntry(device.id, device.location.name, subset, cached, full - cached))
    return AllocationPlan(mode, scenario.video_mode, tuple(entries))


def reference_divergences(plan: AllocationPlan) -> list:
    """(device id, published subset, chosen subset) where the plan differs.

    Only meaningful for plans built on the built-in layout; unknown device
    ids are skipped.
    """
    out = []
    for entry in plan.entries:
        published = REFERENCE_ALLOCATION.get(entry.device_id)
        if published is not None and entry.subset != published:
            out.append((entry.device_id, published, entry.subset))
    return out
