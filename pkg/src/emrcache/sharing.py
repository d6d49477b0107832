"""Shared-capacity head-count: how many patients an edge device can host."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_EPS = 1e-9


@dataclass(frozen=True)
class SharingPolicy:
    """Space the owner needs before guests fit, and the per-guest slice.

    Defaults: the owner caches a complete record set (106.66 GB) and each
    guest caches only the smallest useful tier, text (3 GB).
    """

    host_requirement_gb: float = 106.66
    guest_requirement_gb: float = 3.0

    def __post_init__(self):
        if self.host_requirement_gb <= 0 or self.guest_requirement_gb <= 0:
            raise ValueError("sharing requirements must be positive")
        if self.host_requirement_gb < self.guest_requirement_gb:
            raise ValueError("host requirement cannot be below the guest requirement")


def patients_served(capacity_gb: float, policy: SharingPolicy) -> int:
    """Patients one device serves: the host plus one guest per leftover slice.

    A device too small for the host's complete record set serves nobody
    here; partial service for the owner does not count toward shared
    capacity.
    """
    if capacity_gb + _EPS < policy.host_requirement_gb:
        return 0
    leftover = capacity_gb - policy.host_requirement_gb
    return 1 + int(math.floor(leftover / policy.guest_requirement_gb + _EPS))


def scenario_capacity(devices, policy: SharingPolicy, count_hosts: bool = False) -> int:
    """Total patients across devices.

    With `count_hosts`, owners of devices too small to share still count as
    one patient each, for the alternative tally.
    """
    total = 0
    for device in devices:
        served = patients_served(device.capacity_gb, policy)
        if count_hosts and served == 0:
            served = 1
        total += served
    return total


def capacity_sweep(min_gb: float, max_gb: float, step_gb: float,
                   policy: SharingPolicy) -> list:
    """(capacity, patients) along an inclusive grid, for plotting growth."""
    if step_gb <= 0:
        raise ValueError("sweep step must be positive")
    if min_gb > max_gb:
        raise ValueError("sweep min exceeds max")
    capacities = np.arange(min_gb, max_gb + step_gb * 0.5, step_gb)
    leftover = capacities - policy.host_requirement_gb
    counts = np.where(capacities + _EPS < policy.host_requirement_gb, 0,
                      1 + np.floor(leftover / policy.guest_requirement_gb + _EPS)).astype(int)
    return list(zip(capacities.tolist(), counts.tolist()))
