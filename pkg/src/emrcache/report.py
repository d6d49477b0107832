"""Rollup reporting: scheme comparison, improvement matrix, sharing summary.

Everything here is derived from a scenario plus a placement mode, and every
report carries the scenario digest so its numbers can be recomputed.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

from .delay import (
    DelayCase,
    DelayReport,
    baseline_delay,
    expected_delay,
    femtocache_delay,
    improvement_pct,
)
from .placement import (
    AllocationPlan,
    PlacementMode,
    plan_scenario,
    reference_divergences,
)
from .scenario import EdgeScenario, matches_reference_layout, scenario_digest
from .records import subset_label
from .sharing import patients_served, scenario_capacity

SCHEME_EDGE = "edge_dvs"
SCHEME_FEMTO = "femtocache"
SCHEME_BASELINE = "baseline"


@dataclass(frozen=True)
class ImprovementRow:
    reference_scheme: str
    case: DelayCase
    reference_minutes: float
    new_minutes: float
    pct: float


@dataclass(frozen=True)
class SharingSummary:
    per_device: tuple  # of (device id, capacity_gb, patients)
    total: int
    total_with_hosts: int


@dataclass(frozen=True)
class RunReport:
    digest: str
    mode: PlacementMode
    plan: AllocationPlan
    schemes: dict  # scheme label -> DelayReport
    improvements: tuple
    sharing: SharingSummary
    divergences: tuple  # of (device id, published subset, chosen subset)


def compare_schemes(scenario: EdgeScenario, mode: PlacementMode, weights=None) -> dict:
    """Delay reports for the edge-cached, conventional-cache and no-edge schemes."""
    plan = plan_scenario(scenario, mode, weights=weights)
    edge = expected_delay(plan, scenario.locations, scenario.rates, scheme=SCHEME_EDGE)
    femto = femtocache_delay(scenario)
    base = baseline_delay(scenario.demand, scenario.records, scenario.locations,
                          scenario.rates)
    return {SCHEME_EDGE: edge, SCHEME_FEMTO: femto, SCHEME_BASELINE: base}


def improvement_rows(schemes: dict) -> tuple:
    """How much the edge-cached scheme saves against each reference scheme."""
    edge = schemes[SCHEME_EDGE]
    rows = []
    for ref_label in (SCHEME_FEMTO, SCHEME_BASELINE):
        ref = schemes[ref_label]
        for case in (DelayCase.BEST, DelayCase.WORST):
            rows.append(ImprovementRow(
                ref_label, case, ref.minutes(case), edge.minutes(case),
                improvement_pct(ref.minutes(case), edge.minutes(case))))
    return tuple(rows)


def sharing_summary(scenario: EdgeScenario) -> SharingSummary:
    per_device = tuple((d.id, d.capacity_gb, patients_served(d.capacity_gb, scenario.policy))
                       for d in scenario.devices)
    return SharingSummary(
        per_device,
        scenario_capacity(scenario.devices, scenario.policy),
        scenario_capacity(scenario.devices, scenario.policy, count_hosts=True),
    )


def build_report(scenario: EdgeScenario, mode: PlacementMode, weights=None) -> RunReport:
    plan = plan_scenario(scenario, mode, weights=weights)
    schemes = compare_schemes(scenario, mode, weights=weights)
    divergences = ()
    if mode is not PlacementMode.REFERENCE and matches_reference_layout(scenario):
        divergences = tuple(reference_divergences(plan))
    return RunReport(
        digest=scenario_digest(scenario),
        mode=mode,
        plan=plan,
        schemes=schemes,
        improvements=improvement_rows(schemes),
        sharing=sharing_summary(scenario),
        divergences=divergences,
    )


def plan_to_rows(plan: AllocationPlan) -> list:
    return [[e.device_id, e.location, subset_label(e.subset),
             f"{e.cached_gb:.3f}", f"{e.residual_gb:.3f}"] for e in plan.entries]


def delay_report_to_dict(report: DelayReport) -> dict:
    return {
        "scheme": report.scheme,
        "best_minutes": report.best_minutes,
        "worst_minutes": report.worst_minutes,
        "terms": [{"location": t.location, "probability": t.probability,
                   "best_minutes": t.best_minutes, "worst_minutes": t.worst_minutes}
                  for t in report.terms],
    }


def plan_to_dict(plan: AllocationPlan) -> dict:
    return {
        "mode": plan.mode.value,
        "video_mode": plan.video_mode.value,
        "entries": [{"device": e.device_id, "location": e.location,
                     "subset": subset_label(e.subset), "cached_gb": e.cached_gb,
                     "residual_gb": e.residual_gb} for e in plan.entries],
    }


def report_to_dict(report: RunReport) -> dict:
    return {
        "digest": report.digest,
        "mode": report.mode.value,
        "plan": plan_to_dict(report.plan),
        "schemes": {label: delay_report_to_dict(rep)
                    for label, rep in sorted(report.schemes.items())},
        "improvements": [{"reference_scheme": r.reference_scheme, "case": r.case.value,
                          "reference_minutes": r.reference_minutes,
                          "new_minutes": r.new_minutes, "pct": r.pct}
                         for r in report.improvements],
        "sharing": {
            "per_device": [{"device": d, "capacity_gb": c, "patients": p}
                           for d, c, p in report.sharing.per_device],
            "total": report.sharing.total,
            "total_with_hosts": report.sharing.total_with_hosts,
        },
        "divergences": [{"device": d, "published": subset_label(ref),
                         "chosen": subset_label(got)}
                        for d, ref, got in report.divergences],
    }


def format_table(headers, rows) -> str:
    """Plain aligned-column rendering."""
    table = [list(map(str, headers))] + [list(map(str, r)) for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = [" | ".join(cell.ljust(w) for cell, w in zip(table[0], widths)),
             "-+-".join("-" * w for w in widths)]
    for row in table[1:]:
        lines.append(" | ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)


def write_csv(path, headers, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(headers)
        writer.writerows(rows)


def write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def ensure_out_dir(out_dir) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return out_dir
