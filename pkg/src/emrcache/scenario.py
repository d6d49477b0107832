"""Scenario definitions: loading, validation, defaults, and the built-in setup.

A scenario file is a single JSON document with top-level keys `records`,
`video_mode`, `locations`, `devices`, `rates`, `tables`, `demand`, `policy`
and `timeline`. Omitted keys fall back to the built-in reference scenario;
unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace

from .delay import DEFAULT_RATES, DemandProfile, LinkRates
from .dvs import ActivityTimeline, MotionLevel, sleep_night_timeline
from .placement import (
    REFERENCE_DEVICES,
    EdgeDevice,
    LocationProfile,
    PenaltyTables,
)
from .records import (
    ALL_CLASSES,
    CLASS_ORDER,
    FileClass,
    RecordSet,
    VideoMode,
    parse_subset,
    subset_label,
)
from .sharing import SharingPolicy

DWELL_SUM_EPS = 1e-9


class ScenarioError(ValueError):
    """A scenario file failed to parse or violated an invariant."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class EdgeScenario:
    """One complete simulation setup consumed by every other module."""

    records: RecordSet
    video_mode: VideoMode
    locations: tuple
    devices: tuple
    rates: LinkRates
    tables: PenaltyTables
    demand: DemandProfile
    policy: SharingPolicy
    timeline: ActivityTimeline

    def location(self, name: str) -> LocationProfile:
        for loc in self.locations:
            if loc.name == name:
                return loc
        raise ValueError(f"scenario has no location {name!r}")

    def device_at(self, location_name: str) -> EdgeDevice:
        for device in self.devices:
            if device.location.name == location_name:
                return device
        raise ValueError(f"scenario has no device at location {location_name!r}")

    def with_video_mode(self, mode: VideoMode) -> "EdgeScenario":
        return replace(self, video_mode=mode)


# Required subset per reference location for the no-edge comparison.
_REFERENCE_DEMAND = {
    "home": frozenset({FileClass.TEXT, FileClass.IMAGE}),
    "work": ALL_CLASSES,
    "family": ALL_CLASSES,
    "friend": frozenset({FileClass.TEXT}),
    "other": frozenset({FileClass.TEXT}),
}


def reference_scenario() -> EdgeScenario:
    """The built-in five-location scenario with calibrated link rates."""
    locations = []
    devices = []
    for device_id, (name, dwell, capacity) in REFERENCE_DEVICES.items():
        loc = LocationProfile(name, dwell)
        locations.append(loc)
        devices.append(EdgeDevice(device_id, capacity, loc))
    return EdgeScenario(
        records=RecordSet(),
        video_mode=VideoMode.DVS,
        locations=tuple(locations),
        devices=tuple(devices),
        rates=DEFAULT_RATES,
        tables=PenaltyTables.default(),
        demand=DemandProfile(dict(_REFERENCE_DEMAND)),
        policy=SharingPolicy(),
        timeline=sleep_night_timeline(),
    )


def matches_reference_layout(scenario: EdgeScenario) -> bool:
    """True when records, devices and locations equal the built-in scenario."""
    if scenario.records != RecordSet() or scenario.video_mode is not VideoMode.DVS:
        return False
    if len(scenario.devices) != len(REFERENCE_DEVICES):
        return False
    for device in scenario.devices:
        spec = REFERENCE_DEVICES.get(device.id)
        if spec is None:
            return False
        name, dwell, capacity = spec
        if (device.location.name, device.location.dwell_hours, device.capacity_gb) != (
                name, dwell, capacity):
            return False
    return True


def validate(scenario: EdgeScenario) -> list:
    """Every violated invariant, as human-readable strings; empty when valid."""
    violations = []
    names = [loc.name for loc in scenario.locations]
    if not names:
        violations.append("locations: at least one location is required")
    if len(set(names)) != len(names):
        violations.append("locations: names must be unique")
    for loc in scenario.locations:
        if not 1 <= loc.dwell_hours <= 24:
            violations.append(
                f"locations[{loc.name}].dwell_hours: {loc.dwell_hours} outside [1, 24]")
    total = sum(loc.dwell_hours for loc in scenario.locations)
    if abs(total - 24.0) > DWELL_SUM_EPS:
        violations.append(f"locations: dwell_hours sum to {total}, expected 24")

    ids = [d.id for d in scenario.devices]
    if len(set(ids)) != len(ids):
        violations.append("devices: ids must be unique")
    for device in scenario.devices:
        if device.capacity_gb < 0:
            violations.append(f"devices[{device.id}].capacity_gb: must be >= 0")
        if device.location.name not in names:
            violations.append(
                f"devices[{device.id}].location: {device.location.name!r} is not a scenario location")
    covered = [d.location.name for d in scenario.devices]
    if sorted(covered) != sorted(names):
        violations.append("devices: must map one device to each location (bijection)")

    for name in names:
        if name not in scenario.demand.requirements:
            violations.append(f"demand[{name}]: missing required subset")
    for name in scenario.demand.requirements:
        if name not in names:
            violations.append(f"demand[{name}]: references an unknown location")
    return violations


_TOP_KEYS = ("records", "video_mode", "locations", "devices", "rates", "tables",
             "demand", "policy", "timeline")


def _check_keys(section: str, data: dict, allowed) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ScenarioError(f"{section}: unknown keys {unknown}")


def scenario_from_dict(data: dict) -> EdgeScenario:
    """Build and validate a scenario; omitted sections use reference defaults."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario document must be a JSON object")
    _check_keys("scenario", data, _TOP_KEYS)
    ref = reference_scenario()
    try:
        if "records" in data:
            _check_keys("records", data["records"],
                        ("text_gb", "image_gb", "video_conventional_gb", "video_dvs_gb"))
            records = RecordSet(**data["records"])
        else:
            records = ref.records

        video_mode = VideoMode(data.get("video_mode", ref.video_mode.value))

        if "locations" in data:
            locations = []
            for row in data["locations"]:
                _check_keys("locations[]", row, ("name", "dwell_hours"))
                locations.append(LocationProfile(str(row["name"]), float(row["dwell_hours"])))
            locations = tuple(locations)
        else:
            locations = ref.locations
        by_name = {loc.name: loc for loc in locations}

        if "devices" in data:
            devices = []
            for row in data["devices"]:
                _check_keys("devices[]", row, ("id", "capacity_gb", "location"))
                loc_name = str(row["location"])
                if loc_name not in by_name:
                    raise ScenarioError(
                        f"devices[{row.get('id')}].location: unknown location {loc_name!r}")
                devices.append(EdgeDevice(str(row["id"]), float(row["capacity_gb"]),
                                          by_name[loc_name]))
            devices = tuple(devices)
        elif "locations" in data:
            raise ScenarioError("devices: required when locations are customized")
        else:
            devices = ref.devices

        if "rates" in data:
            _check_keys("rates", data["rates"], ("edge_rate", "macro_rate"))
            rates = LinkRates(**data["rates"])
        else:
            rates = ref.rates

        if "tables" in data:
            _check_keys("tables", data["tables"], ("staying", "value", "combo"))
            staying = data["tables"].get("staying")
            value = data["tables"].get("value")
            combo = data["tables"].get("combo")
            tables = PenaltyTables(
                staying if staying is not None else ref.tables.staying,
                ({FileClass(k): v for k, v in value.items()}
                 if value is not None else ref.tables.value),
                ({parse_subset(k): v for k, v in combo.items()}
                 if combo is not None else None),
            )
        else:
            tables = ref.tables

        if "demand" in data:
            demand = DemandProfile({str(k): parse_subset(v)
                                    for k, v in data["demand"].items()})
        else:
            requirements = {}
            for loc in locations:
                requirements[loc.name] = _REFERENCE_DEMAND.get(loc.name, ALL_CLASSES)
            demand = DemandProfile(requirements)

        if "policy" in data:
            _check_keys("policy", data["policy"],
                        ("host_requirement_gb", "guest_requirement_gb"))
            policy = SharingPolicy(**data["policy"])
        else:
            policy = ref.policy

        if "timeline" in data:
            timeline = ActivityTimeline.from_pairs(data["timeline"])
        else:
            timeline = ref.timeline
    except ScenarioError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ScenarioError(str(exc)) from exc

    scenario = EdgeScenario(records, video_mode, locations, devices, rates,
                            tables, demand, policy, timeline)
    violations = validate(scenario)
    if violations:
        raise ScenarioError(violations)
    return scenario


def scenario_to_dict(scenario: EdgeScenario) -> dict:
    """Canonical JSON-ready form; load(save(s)) is the identity."""
    return {
        "records": {
            "text_gb": float(scenario.records.text_gb),
            "image_gb": float(scenario.records.image_gb),
            "video_conventional_gb": float(scenario.records.video_conventional_gb),
            "video_dvs_gb": float(scenario.records.video_dvs_gb),
        },
        "video_mode": scenario.video_mode.value,
        "locations": [{"name": loc.name, "dwell_hours": float(loc.dwell_hours)}
                      for loc in scenario.locations],
        "devices": [{"id": d.id, "capacity_gb": float(d.capacity_gb),
                     "location": d.location.name}
                    for d in scenario.devices],
        "rates": {"edge_rate": float(scenario.rates.edge_rate),
                  "macro_rate": float(scenario.rates.macro_rate)},
        "tables": {
            "staying": {str(h): c for h, c in sorted(scenario.tables.staying.items())},
            "value": {c.value: scenario.tables.value[c] for c in CLASS_ORDER},
            "combo": (None if scenario.tables.combo is None else
                      {subset_label(s): v for s, v in sorted(
                          scenario.tables.combo.items(), key=lambda kv: subset_label(kv[0]))}),
        },
        "demand": {name: sorted(c.value for c in subset)
                   for name, subset in sorted(scenario.demand.requirements.items())},
        "policy": {"host_requirement_gb": scenario.policy.host_requirement_gb,
                   "guest_requirement_gb": scenario.policy.guest_requirement_gb},
        "timeline": [[duration, level.name.lower()]
                     for duration, level in scenario.timeline.segments],
    }


def load_scenario(path_or_name) -> EdgeScenario:
    """Load a scenario file; the name 'paper' selects the built-in scenario."""
    if path_or_name == "paper":
        return reference_scenario()
    with open(path_or_name) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"parse error in {path_or_name}: {exc}") from exc
    return scenario_from_dict(data)


def save_scenario(scenario: EdgeScenario, path) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2, sort_keys=True)
        fh.write("\n")


def scenario_digest(scenario: EdgeScenario) -> str:
    """Content digest of the canonical form, for reproducibility stamps."""
    canonical = json.dumps(scenario_to_dict(scenario), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()
