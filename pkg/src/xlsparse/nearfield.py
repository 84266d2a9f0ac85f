"""Spherical, Fresnel and planar steering vectors for linear layouts.

Elements sit on the x-axis at ``indices * spacing``; a source at angle
``theta`` from broadside and range ``r`` (measured from element 0) sits at
``(r sin(theta), r cos(theta))``. Phases are referenced to element 0 and the
exact model subtracts ``r``, so it tends to the planar vector as ``r`` grows.

Every steering function also accepts ``reference="center"``, which moves the
origin (range and phase reference) to the middle of the aperture.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .geometry import ArrayLayout, aperture_m


class SingularGeometryError(ValueError):
    reason = "singular-geometry"


class SteeringModel(str, Enum):
    SPHERICAL = "SPHERICAL"
    FRESNEL = "FRESNEL"
    PLANAR = "PLANAR"


@dataclass(frozen=True)
class SourceParams:
    theta_rad: float
    range_m: float
    snr_db: float = 0.0
    snapshots: int = 1

    def __post_init__(self):
        if not -np.pi / 2 < self.theta_rad < np.pi / 2:
            raise ValueError(f"theta must lie in (-pi/2, pi/2), got {self.theta_rad}")
        if not self.range_m > 0:
            raise ValueError(f"range must be positive, got {self.range_m}")
        if self.snapshots < 1:
            raise ValueError("snapshots must be >= 1")

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)


@dataclass(frozen=True)
class SteeringVector:
    entries: np.ndarray
    model: SteeringModel

    def __len__(self):
        return len(self.entries)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def element_positions_m(layout: ArrayLayout) -> np.ndarray:
    return layout.positions_m()


def _positions(layout: ArrayLayout, reference: str) -> np.ndarray:
    p = layout.positions_m()
    if reference == "first":
        return p
    if reference == "center":
        return p - aperture_m(layout) / 2.0
    raise ValueError(f"reference must be 'first' or 'center', got {reference!r}")


def path_difference(positions: np.ndarray, theta: float, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(r_n, r_n - r)`` with the difference computed without cancellation."""
    p = np.asarray(positions, dtype=float)
    s = np.sin(theta)
    rn = np.sqrt(r * r + p * p - 2.0 * r * p * s)
    if np.any(rn == 0.0):
        raise SingularGeometryError("singular-geometry: source coincides with an element")
    # r_n - r = (p^2 - 2 r p sin) / (r_n + r)
    return rn, (p * p - 2.0 * r * p * s) / (rn + r)


def spherical_steering(layout: ArrayLayout, src: SourceParams, reference: str = "first") -> SteeringVector:
    k = 2.0 * np.pi / layout.wavelength_m
    _, delta = path_difference(_positions(layout, reference), src.theta_rad, src.range_m)
    return SteeringVector(np.exp(-1j * k * delta), SteeringModel.SPHERICAL)


def planar_steering(
    layout: ArrayLayout, theta_rad: float, wavelength: float | None = None, reference: str = "first"
) -> SteeringVector:
    """Far-field limit of :func:`spherical_steering`.

    The path difference ``r_n - r`` tends to ``-p_n sin(theta)``, so entries
    are ``exp(+i (2 pi / lambda) p_n sin(theta))`` under the shared geometry.
    """
    lam = layout.wavelength_m if wavelength is None else wavelength
    delta = -_positions(layout, reference) * np.sin(theta_rad)
    return SteeringVector(np.exp(-2j * np.pi / lam * delta), SteeringModel.PLANAR)


def fresnel_steering(layout: ArrayLayout, src: SourceParams, reference: str = "first") -> SteeringVector:
    p = _positions(layout, reference)
    th, r = src.theta_rad, src.range_m
    delta = -p * np.sin(th) + p * p * np.cos(th) ** 2 / (2.0 * r)
    return SteeringVector(np.exp(-2j * np.pi / layout.wavelength_m * delta), SteeringModel.FRESNEL)


def steering_derivatives(
    layout: ArrayLayout, src: SourceParams, reference: str = "first"
) -> tuple[np.ndarray, np.ndarray]:
    """Analytic ``(da/dtheta, da/dr)`` of the spherical steering vector."""
    p = _positions(layout, reference)
    th, r = src.theta_rad, src.range_m
    k = 2.0 * np.pi / layout.wavelength_m
    rn, delta = path_difference(p, th, r)
    a = np.exp(-1j * k * delta)
    u = r - p * np.sin(th)
    d_theta = -r * p * np.cos(th) / rn
    # (r - p sin)/r_n - 1, rewritten as -p^2 cos^2 / (r_n (u + r_n))
    d_range = -(p * np.cos(th)) ** 2 / (rn * (u + rn))
    return a * (-1j * k) * d_theta, a * (-1j * k) * d_range


def beampattern(layout: ArrayLayout, focus: SourceParams, grid: Sequence[tuple[float, float]]) -> np.ndarray:
    """Normalized correlation ``|a(focus)^H a(theta, r)| / N`` over ``grid``."""
    if len(grid) == 0:
        raise ValueError("beampattern grid is empty")
    w = spherical_steering(layout, focus).entries.conj()
    n = layout.n_elements
    out = np.empty(len(grid))
    for i, (th, r) in enumerate(grid):
        a = spherical_steering(layout, SourceParams(th, r)).entries
        out[i] = abs(w @ a) / n
    return np.minimum(out, 1.0)


def max_wavefront_phase_error(
    layout: ArrayLayout, range_m: float, theta_rad: float = 0.0, reference: str = "center"
) -> float:
    """Largest phase gap between the spherical and planar steering vectors.

    With the default centre reference this is the quantity bounded by pi/8 at
    the Fraunhofer distance.
    """
    a = spherical_steering(layout, SourceParams(theta_rad, range_m), reference).entries
    b = planar_steering(layout, theta_rad, reference=reference).entries
    return float(np.max(np.abs(np.angle(a * np.conj(b)))))
