"""Two-tier transmission-delay model, rate calibration, and Monte Carlo estimation.

A request at some location first pulls whatever its edge device caches at
the fast edge rate; in the worst case the remainder ships from the
registered hospital over the slower macro link. Expected delay weights each
location's term by the fraction of the day spent there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import sample_sums
from .placement import AllocationPlan, PlacementMode, plan_scenario
from .records import RecordSet, VideoMode, full_emr_size, subset_size

PROBABILITY_EPS = 1e-9


@dataclass(frozen=True)
class LinkRates:
    """Constant link throughputs in GB/s: the edge tier and the macro cell."""

    edge_rate: float
    macro_rate: float

    def __post_init__(self):
        if self.edge_rate <= 0 or self.macro_rate <= 0:
            raise ValueError("link rates must be positive")


# Calibrated defaults that reproduce the reported delay set (ratio 7.5).
DEFAULT_RATES = LinkRates(edge_rate=0.146484375, macro_rate=0.01953125)


class DelayCase(Enum):
    BEST = "best"  # edge cache alone satisfies the request
    WORST = "worst"  # the full remainder also ships from the registered hospital


@dataclass(frozen=True)
class DemandProfile:
    """What the nearest hospital needs at each location (subset per location)."""

    requirements: dict

    def for_location(self, name: str) -> frozenset:
        try:
            return self.requirements[name]
        except KeyError:
            raise ValueError(f"demand profile has no entry for location {name!r}") from None


@dataclass(frozen=True)
class LocationTerm:
    """Unweighted per-location delay, both cases."""

    location: str
    probability: float
    best_minutes: float
    worst_minutes: float


@dataclass(frozen=True)
class DelayReport:
    """Expected delay for one scheme; both cases share the location terms."""

    scheme: str
    best_minutes: float
    worst_minutes: float
    terms: tuple

    def minutes(self, case: DelayCase) -> float:
        return self.best_minutes if case is DelayCase.BEST else self.worst_minutes


def transfer_minutes(size_gb: float, rate_gb_s: float) -> float:
    """Minutes to move `size_gb` over a constant-rate link."""
    if rate_gb_s <= 0:
        raise ValueError("transfer rate must be positive")
    if size_gb < 0:
        raise ValueError("transfer size must be >= 0")
    return size_gb / rate_gb_s / 60.0


def _check_probabilities(locations):
    total = sum(loc.probability for loc in locations)
    if abs(total - 1.0) > PROBABILITY_EPS:
        raise ValueError(f"location probabilities sum to {total}, expected 1")


def expected_delay(plan: AllocationPlan, locations, rates: LinkRates,
                   scheme: str = "edge") -> DelayReport:
    """Dwell-weighted delay report for an allocation plan.

    The best case bills exactly the cached files at the edge rate; the worst
    case adds the uncached remainder at the macro rate.
    """
    _check_probabilities(locations)
    terms = []
    best = worst = 0.0
    for loc in locations:
        entry = plan.entry_for(loc.name)
        t_best = transfer_minutes(entry.cached_gb, rates.edge_rate)
        t_worst = t_best + transfer_minutes(entry.residual_gb, rates.macro_rate)
        terms.append(LocationTerm(loc.name, loc.probability, t_best, t_worst))
        best += loc.probability * t_best
        worst += loc.probability * t_worst
    return DelayReport(scheme, best, worst, tuple(terms))


def femtocache_delay(scenario) -> DelayReport:
    """Delay report for edge caching of conventional recordings (no event camera)."""
    conventional = scenario.with_video_mode(VideoMode.CONVENTIONAL)
    plan = plan_scenario(conventional, PlacementMode.MIN_COMBO)
    return expected_delay(plan, conventional.locations, conventional.rates,
                          scheme="femtocache")


def baseline_delay(demand: DemandProfile, records: RecordSet, locations,
                   rates: LinkRates) -> DelayReport:
    """Delay report with no edge caching and conventional video.

    Every transfer runs at the macro rate: the best case ships just what
    each location needs, the worst case ships the complete record set.
    """
    _check_probabilities(locations)
    full = full_emr_size(records, VideoMode.CONVENTIONAL)
    t_worst = transfer_minutes(full, rates.macro_rate)
    terms = []
    best = worst = 0.0
    for loc in locations:
        need = subset_size(demand.for_location(loc.name), records, VideoMode.CONVENTIONAL)
        t_best = transfer_minutes(need, rates.macro_rate)
        terms.append(LocationTerm(loc.name, loc.probability, t_best, t_worst))
        best += loc.probability * t_best
        worst += loc.probability * t_worst
    return DelayReport("baseline", best, worst, tuple(terms))


def improvement_pct(reference_minutes: float, new_minutes: float) -> float:
    """Percent reduction relative to `reference_minutes`."""
    if reference_minutes <= 0:
        raise ValueError("reference delay must be positive")
    return (reference_minutes - new_minutes) / reference_minutes * 100.0


@dataclass(frozen=True)
class RateObservation:
    """One reported delay tied to the GB it moved on each link tier."""

    edge_gb: float
    macro_gb: float
    minutes: float


def plan_observation(plan: AllocationPlan, locations, case: DelayCase,
                     minutes: float) -> RateObservation:
    """Coefficient row for a reported delay of an edge-cached scheme."""
    _check_probabilities(locations)
    edge = sum(loc.probability * plan.entry_for(loc.name).cached_gb for loc in locations)
    macro = 0.0
    if case is DelayCase.WORST:
        macro = sum(loc.probability * plan.entry_for(loc.name).residual_gb for loc in locations)
    return RateObservation(edge, macro, minutes)


def baseline_observation(demand: DemandProfile, records: RecordSet, locations,
                         case: DelayCase, minutes: float) -> RateObservation:
    """Coefficient row for a reported delay of the no-edge scheme."""
    _check_probabilities(locations)
    if case is DelayCase.WORST:
        macro = full_emr_size(records, VideoMode.CONVENTIONAL)
    else:
        macro = sum(loc.probability
                    * subset_size(demand.for_location(loc.name), records, VideoMode.CONVENTIONAL)
                    for loc in locations)
    return RateObservation(0.0, macro, minutes)


def calibrate_rates(observations) -> LinkRates:
    """Recover the two link rates from reported delays by least squares.

    Each observation contributes one linear equation in the reciprocal
    rates. Rejects systems that leave either rate unconstrained or solve to
    a non-positive rate.
    """
    observations = list(observations)
    if not observations:
        raise ValueError("calibration needs at least one observation")
    a = np.array([[o.edge_gb, o.macro_gb] for o in observations], dtype=float)
    y = np.array([o.minutes * 60.0 for o in observations], dtype=float)
    for col, label in ((0, "edge"), (1, "macro")):
        if not np.any(np.abs(a[:, col]) > 0):
            raise ValueError(f"observations leave the {label} rate unconstrained")
    if np.linalg.matrix_rank(a) < 2:
        raise ValueError("observations do not separate the two rates")
    inv_rates, *_ = np.linalg.lstsq(a, y, rcond=None)
    if inv_rates[0] <= 0 or inv_rates[1] <= 0:
        raise ValueError("calibration produced a non-positive rate")
    return LinkRates(edge_rate=float(1.0 / inv_rates[0]), macro_rate=float(1.0 / inv_rates[1]))


@dataclass(frozen=True)
class MonteCarloConfig:
    """Sampling setup for the stochastic delay estimate.

    `dwell_rates` overrides the per-location weights (defaults to the dwell
    probabilities). `truncation` caps the occurrence count in the Poisson
    saturation diagnostic only; it does not alter the estimator.
    """

    samples: int
    seed: int = 0
    dwell_rates: tuple | None = None
    truncation: int = 20
    partitions: int = 1

    def __post_init__(self):
        if self.samples <= 0:
            raise ValueError("samples must be positive")
        if self.truncation < 0:
            raise ValueError("truncation must be >= 0")
        if self.partitions < 1:
            raise ValueError("partitions must be >= 1")
        if self.dwell_rates is not None:
            rates = tuple(float(r) for r in self.dwell_rates)
            if any(r < 0 for r in rates) or sum(rates) <= 0:
                raise ValueError("dwell rates must be >= 0 and sum to > 0")
            object.__setattr__(self, "dwell_rates", rates)


@dataclass(frozen=True)
class MonteCarloResult:
    minutes: float
    std_error: float
    samples: int
    seed: int
    partitions: int


def _partition_counts(samples: int, partitions: int):
    base, extra = divmod(samples, partitions)
    return [base + (1 if i < extra else 0) for i in range(partitions)]


def monte_carlo_delay(plan: AllocationPlan, config: MonteCarloConfig, locations,
                      rates: LinkRates, case: DelayCase) -> MonteCarloResult:
    """Seeded sampling estimate of the expected delay for one case.

    Each draw picks a location from the dwell weights and accrues that
    location's delay term. The sample budget is split across independent
    child streams spawned from the seed, so the result is reproducible for a
    fixed (seed, samples, partitions) triple regardless of how partitions
    are evaluated.
    """
    report = expected_delay(plan, locations, rates)
    terms = np.array([t.best_minutes if case is DelayCase.BEST else t.worst_minutes
                      for t in report.terms], dtype=float)
    if config.dwell_rates is None:
        weights = np.array([loc.probability for loc in locations], dtype=float)
    else:
        weights = np.array(config.dwell_rates, dtype=float)
        if len(weights) != len(terms):
            raise ValueError("dwell_rates length must match the location count")
    cum = np.cumsum(weights / weights.sum())
    children = np.random.SeedSequence(config.seed).spawn(config.partitions)
    total = 0.0
    total_sq = 0.0
    for count, child in zip(_partition_counts(config.samples, config.partitions), children):
        if count == 0:
            continue
        u = np.random.default_rng(child).random(count)
        part_sum, part_sq = sample_sums(u, cum, terms)
        total += part_sum
        total_sq += part_sq
    n = config.samples
    mean = total / n
    if n > 1:
        variance = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    else:
        variance = 0.0
    return MonteCarloResult(mean, math.sqrt(variance / n), n, config.seed, config.partitions)


def poisson_partial_sums(lambdas, truncation: int) -> tuple:
    """Partial sums of the Poisson pmf up to the occurrence cap, per rate.

    Shows how quickly the occurrence weighting saturates to one, which is
    why the closed-form expectation can use the dwell probabilities
    directly.
    """
    if truncation < 0:
        raise ValueError("truncation must be >= 0")
    out = []
    for lam in lambdas:
        if lam < 0:
            raise ValueError("rates must be >= 0")
        out.append(sum(math.exp(-lam) * lam ** k / math.factorial(k)
                       for k in range(truncation + 1)))
    return tuple(out)
