"""Independent brute-force scorers and randomized scenario builders.

These re-derive feasibility, subset sizes, ranks and scores from first
principles with plain loops, so the optimizer has something other than
itself to agree with.
"""

import itertools

from emrcache.delay import DEFAULT_RATES, DemandProfile
from emrcache.dvs import ActivityTimeline
from emrcache.placement import (
    EdgeDevice,
    LocationProfile,
    PenaltyTables,
    PlacementMode,
)
from emrcache.records import ALL_CLASSES, FileClass, RecordSet, VideoMode
from emrcache.scenario import EdgeScenario
from emrcache.sharing import SharingPolicy

TEXT, IMAGE, VIDEO = FileClass.TEXT, FileClass.IMAGE, FileClass.VIDEO
_LEX = {TEXT: 0, IMAGE: 1, VIDEO: 2}

SIZE_GRID = [0.0, 1.0, 2.5, 3.0, 10.0, 16.66, 50.0, 87.0, 100.0, 120.0, 200.0]
CAPACITY_GRID = [0.0, 2.5, 3.0, 5.0, 10.0, 16.66, 19.66, 50.0, 87.0, 90.0,
                 100.0, 106.66, 150.0, 200.0, 500.0]


def naive_subsets():
    out = []
    for k in range(4):
        for combo in itertools.combinations((TEXT, IMAGE, VIDEO), k):
            out.append(frozenset(combo))
    return out


def naive_size(subset, records, video_mode):
    total = 0.0
    if TEXT in subset:
        total += records.text_gb
    if IMAGE in subset:
        total += records.image_gb
    if VIDEO in subset:
        total += (records.video_dvs_gb if video_mode is VideoMode.DVS
                  else records.video_conventional_gb)
    return total


def naive_combo(subset, records, video_mode):
    if not subset:
        return 16
    nonempty = [s for s in naive_subsets() if s]
    nonempty.sort(key=lambda s: (-naive_size(s, records, video_mode), len(s),
                                 tuple(sorted(_LEX[c] for c in s))))
    return 2 * (nonempty.index(subset) + 1)


def naive_score(subset, device, records, video_mode, tables, mode, weights=None):
    alpha = tables.staying[int(device.location.dwell_hours)]
    excluded = [c for c in (TEXT, IMAGE, VIDEO) if c not in subset]
    stay = alpha * len(excluded)
    val = sum(tables.value[c] for c in excluded)
    combo = naive_combo(subset, records, video_mode)
    if mode is PlacementMode.OMISSION:
        return stay + val + combo
    if mode is PlacementMode.MIN_COMBO:
        return combo
    if mode is PlacementMode.CUSTOM:
        w_stay, w_value, w_combo = weights
        return w_stay * stay + w_value * val + w_combo * combo
    raise AssertionError(f"oracle has no score for {mode}")


def naive_optimize(device, records, video_mode, tables, mode, weights=None):
    best = None
    best_key = None
    for subset in naive_subsets():
        if naive_size(subset, records, video_mode) > device.capacity_gb + 1e-9:
            continue
        key = (naive_score(subset, device, records, video_mode, tables, mode, weights),
               naive_combo(subset, records, video_mode))
        if best_key is None or key < best_key:
            best, best_key = subset, key
    return best


def random_records(rng) -> RecordSet:
    conventional = rng.choice(SIZE_GRID)
    dvs = rng.choice([v for v in SIZE_GRID if v <= conventional])
    return RecordSet(text_gb=rng.choice(SIZE_GRID), image_gb=rng.choice(SIZE_GRID),
                     video_conventional_gb=conventional, video_dvs_gb=dvs)


def random_locations(rng, count=None):
    count = count or rng.randint(1, 5)
    dwell = [1] * count
    for _ in range(24 - count):
        dwell[rng.randrange(count)] += 1
    return tuple(LocationProfile(f"loc{i}", dwell[i]) for i in range(count))


def random_tables(rng) -> PenaltyTables:
    if rng.random() < 0.5:
        return PenaltyTables.default()
    value = {c: rng.randint(1, 5) for c in (TEXT, IMAGE, VIDEO)}
    return PenaltyTables({h: 25 - h for h in range(1, 25)}, value)


def random_scenario(rng) -> EdgeScenario:
    records = random_records(rng)
    locations = random_locations(rng)
    devices = tuple(EdgeDevice(f"dev{i}", rng.choice(CAPACITY_GRID), loc)
                    for i, loc in enumerate(locations))
    video_mode = rng.choice([VideoMode.DVS, VideoMode.CONVENTIONAL])
    return EdgeScenario(
        records=records,
        video_mode=video_mode,
        locations=locations,
        devices=devices,
        rates=DEFAULT_RATES,
        tables=random_tables(rng),
        demand=DemandProfile({loc.name: ALL_CLASSES for loc in locations}),
        policy=SharingPolicy(),
        timeline=ActivityTimeline(),
    )
