"""Spherical-wave MIMO line-of-sight channel and its singular-value spectrum."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .geometry import ArrayLayout


class ConfigurationError(ValueError):
    reason = "configuration"


@dataclass(frozen=True)
class LosChannel:
    tx_layout: ArrayLayout
    rx_layout: ArrayLayout
    separation_m: float
    matrix: np.ndarray
    singular_values: np.ndarray  # normalized, largest == 1
    raw_singular_values: np.ndarray


def _centered(layout: ArrayLayout) -> np.ndarray:
    x = layout.positions_m()
    return x - (x[0] + x[-1]) / 2.0


def pairwise_distances(tx_layout: ArrayLayout, rx_layout: ArrayLayout, separation_m: float) -> np.ndarray:
    """Element distances (rx x tx) for parallel, centre-aligned arrays."""
    if not separation_m > 0:
        raise ValueError("separation must be positive")
    dx = _centered(rx_layout)[:, None] - _centered(tx_layout)[None, :]
    return np.hypot(separation_m, dx)


def los_channel(tx_layout: ArrayLayout, rx_layout: ArrayLayout, separation_m: float) -> LosChannel:
    if not np.isclose(tx_layout.wavelength_m, rx_layout.wavelength_m, rtol=1e-12, atol=0.0):
        raise ConfigurationError(
            f"configuration: wavelength mismatch ({tx_layout.wavelength_m} vs {rx_layout.wavelength_m})"
        )
    d = pairwise_distances(tx_layout, rx_layout, separation_m)
    H = np.exp(-2j * np.pi / tx_layout.wavelength_m * d)
    sv = scipy.linalg.svdvals(H)
    return LosChannel(tx_layout, rx_layout, float(separation_m), H, sv / sv[0], sv)


def effective_rank(channel: LosChannel, threshold: float) -> int:
    """Number of normalized singular values at or above ``threshold``."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    # guard the leader against rounding in the normalization
    return int(np.count_nonzero(channel.singular_values >= threshold * (1 - 1e-12)))


def rank_vs_distance(
    tx: ArrayLayout, rx: ArrayLayout, distances_m: Sequence[float], threshold: float
) -> list[tuple[float, int]]:
    if not distances_m:
        raise ValueError("need at least one distance")
    return [(float(d), effective_rank(los_channel(tx, rx, d), threshold)) for d in distances_m]
