"""Difference co-array analysis and exhaustive max-DoF layout search."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, islice
from typing import Iterable, Sequence

import numpy as np

from .geometry import ArrayLayout, Kind

SEARCH_MAX_ELEMENTS = 10
SEARCH_MAX_SPAN = 40
_CHUNK = 200_000


class SearchTooLargeError(ValueError):
    reason = "search-too-large"


@dataclass(frozen=True)
class Coarray:
    """Difference co-array of a layout.

    ``weights`` counts ordered element pairs per lag, so ``weights[0]`` is the
    element count and the weights sum to ``N**2``.
    """

    lags: tuple[int, ...]
    weights: dict[int, int]
    dof: int
    holes: tuple[int, ...]
    contiguous_half_len: int


def coarray_of_indices(indices: Sequence[int]) -> Coarray:
    idx = np.asarray(indices, dtype=np.int64)
    diffs = (idx[:, None] - idx[None, :]).ravel()
    weights = dict(sorted(Counter(diffs.tolist()).items()))
    lags = tuple(weights)
    present = set(lags)
    max_lag = lags[-1]
    holes = tuple(l for l in range(1, max_lag + 1) if l not in present)
    contiguous = holes[0] - 1 if holes else max_lag
    return Coarray(lags, weights, len(lags), holes, contiguous)


def difference_coarray(layout: ArrayLayout) -> Coarray:
    return coarray_of_indices(layout.indices)


@dataclass(frozen=True)
class DofRow:
    name: str
    n_elements: int
    span: int
    dof: int
    holes: int


def dof_report(layouts: Iterable[ArrayLayout]) -> list[DofRow]:
    rows = []
    for layout in layouts:
        ca = difference_coarray(layout)
        rows.append(DofRow(layout.name, layout.n_elements, layout.span, ca.dof, len(ca.holes)))
    if not rows:
        raise ValueError("dof_report needs at least one layout")
    return rows


def _dof_batch(interior: np.ndarray, span: int) -> np.ndarray:
    """Distinct-lag count for each row of ``interior`` completed by 0 and ``span``."""
    b = interior.shape[0]
    full = np.empty((b, interior.shape[1] + 2), dtype=np.int16)
    full[:, 0] = 0
    full[:, 1:-1] = interior
    full[:, -1] = span
    i, j = np.triu_indices(full.shape[1], k=1)
    diffs = full[:, j] - full[:, i]
    seen = np.zeros((b, span + 1), dtype=bool)
    seen[np.arange(b)[:, None], diffs] = True
    return 2 * seen.sum(axis=1) + 1


def search_max_dof(n_elements: int, max_span: int, wavelength_m: float = 1.0) -> ArrayLayout:
    """Exhaustively find the ``n_elements`` layout of span <= ``max_span`` with most DoFs.

    Ties go to the smaller span, then the lexicographically smallest index
    vector, so the result is a certified, deterministic optimum.
    """
    if n_elements < 2 or max_span < n_elements - 1:
        raise ValueError(f"cannot place {n_elements} elements within span {max_span}")
    if n_elements > SEARCH_MAX_ELEMENTS or max_span > SEARCH_MAX_SPAN:
        raise SearchTooLargeError(
            f"search-too-large: limits are n <= {SEARCH_MAX_ELEMENTS}, span <= {SEARCH_MAX_SPAN}"
        )
    best_dof, best = -1, None
    ceiling = n_elements * n_elements - n_elements + 1
    for span in range(n_elements - 1, max_span + 1):
        if min(2 * span + 1, ceiling) <= best_dof:
            # a larger span can only tie, and ties prefer the smaller span
            continue
        combos = combinations(range(1, span), n_elements - 2)
        while True:
            chunk = list(islice(combos, _CHUNK))
            if not chunk:
                break
            interior = np.array(chunk, dtype=np.int16).reshape(len(chunk), n_elements - 2)
            dofs = _dof_batch(interior, span)
            # argmax returns the first maximum, which is lexicographically smallest
            k = int(np.argmax(dofs))
            if dofs[k] > best_dof:
                best_dof = int(dofs[k])
                best = (0, *chunk[k], span)
    return ArrayLayout(Kind.CUSTOM, best, wavelength_m, name=f"MAXDOF{n_elements}")
