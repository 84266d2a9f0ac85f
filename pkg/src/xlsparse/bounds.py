"""Deterministic Cramér-Rao bounds for joint (angle, range) estimation.

Signal model: ``y_t = g a(theta, r) + n_t`` with an unknown complex gain ``g``
(nuisance, projected out) and white noise at the given per-element SNR.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .geometry import ArrayLayout
from .nearfield import SourceParams, SingularGeometryError, steering_derivatives, spherical_steering

FIM_COND_LIMIT = 1e12


class SingularFimError(ValueError):
    reason = "singular-fim"

    def __init__(self, cond: float):
        super().__init__(f"singular-fim: condition number {cond:.3e} exceeds {FIM_COND_LIMIT:.0e}")
        self.cond = cond


@dataclass(frozen=True)
class CrbResult:
    fim: np.ndarray
    crb_theta: float
    crb_range: float
    root_crb_range: float


def fim(layout: ArrayLayout, src: SourceParams) -> np.ndarray:
    """2x2 Fisher information over ``(theta, r)``."""
    if layout.n_elements < 3:
        raise ValueError("joint angle/range estimation needs at least 3 elements")
    a = spherical_steering(layout, src).entries
    D = np.column_stack(steering_derivatives(layout, src))
    # P_perp D without forming the N x N projector
    PD = D - np.outer(a, a.conj() @ D) / np.vdot(a, a).real
    F = 2.0 * src.snapshots * src.snr_linear * np.real(D.conj().T @ PD)
    return 0.5 * (F + F.T)


def crb(layout: ArrayLayout, src: SourceParams) -> CrbResult:
    F = fim(layout, src)
    cond = np.linalg.cond(F)
    if not np.isfinite(cond) or cond > FIM_COND_LIMIT:
        raise SingularFimError(float(cond))
    C = np.linalg.solve(F, np.eye(2))
    return CrbResult(F, float(C[0, 0]), float(C[1, 1]), float(np.sqrt(C[1, 1])))


@dataclass(frozen=True)
class SweepRow:
    layout_name: str
    range_m: float
    root_crb_range_m: float | None
    error: str | None = None


def crb_range_sweep(layouts: Sequence[ArrayLayout], ranges_m: Sequence[float], template: SourceParams) -> list[SweepRow]:
    """Root range CRB for every (layout, range) pair, in input order.

    Cells that fail (singular FIM or geometry) carry an error tag instead of a
    value.
    """
    if not layouts or not ranges_m:
        raise ValueError("sweep needs at least one layout and one range")
    rows = []
    for layout in layouts:
        for r in ranges_m:
            try:
                res = crb(layout, replace(template, range_m=float(r)))
                rows.append(SweepRow(layout.name, float(r), res.root_crb_range))
            except (SingularFimError, SingularGeometryError) as exc:
                rows.append(SweepRow(layout.name, float(r), None, exc.reason))
    return rows
