"""Linear array layouts on an integer grid of unit spacing ``d``.

All generators return :class:`ArrayLayout` objects whose element positions
are non-negative integers (multiples of ``d``) anchored at zero. Physical
coordinates are only produced on demand.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Sequence

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


class LayoutError(ValueError):
    """Raised when a layout cannot be constructed.

    ``reason`` is a short machine-readable tag (``invalid-count``,
    ``invalid-coprime-pair``, ``unsupported-order``, ``overlapping-subarrays``,
    ``invalid-layout``).
    """

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}")
        self.reason = reason


class Kind(str, Enum):
    DUA = "DUA"
    NA = "NA"
    CA = "CA"
    NRA = "NRA"
    WSMS = "WSMS"
    NMS = "NMS"
    CMS = "CMS"
    NRMS = "NRMS"
    CUSTOM = "CUSTOM"


def wavelength_from_frequency(frequency_hz: float) -> float:
    if frequency_hz <= 0:
        raise ValueError("frequency must be positive")
    return SPEED_OF_LIGHT / frequency_hz


@dataclass(frozen=True)
class ArrayLayout:
    """Immutable linear array on the x-axis.

    Attributes:
        kind: Layout family.
        indices: Strictly increasing element positions in units of
            ``spacing_m``, starting at 0.
        wavelength_m: Carrier wavelength.
        spacing_m: Unit grid spacing. Defaults to half a wavelength.
        name: Optional display label.
    """

    kind: Kind
    indices: tuple[int, ...]
    wavelength_m: float
    spacing_m: float | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "kind", Kind(self.kind))
        if len(idx) < 2:
            raise LayoutError("invalid-layout", "a layout needs at least 2 elements")
        if idx[0] != 0:
            raise LayoutError("invalid-layout", "indices must start at 0")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise LayoutError("invalid-layout", "indices must be strictly increasing")
        if not self.wavelength_m > 0:
            raise LayoutError("invalid-layout", "wavelength must be positive")
        if self.spacing_m is None:
            object.__setattr__(self, "spacing_m", self.wavelength_m / 2)
        elif not self.spacing_m > 0:
            raise LayoutError("invalid-layout", "spacing must be positive")
        if not self.name:
            object.__setattr__(self, "name", self.kind.value)

    @property
    def n_elements(self) -> int:
        return len(self.indices)

    @property
    def span(self) -> int:
        return aperture_units(self)

    def positions_m(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=float) * self.spacing_m

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "indices": list(self.indices),
            "wavelength_m": self.wavelength_m,
            "spacing_m": self.spacing_m,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ArrayLayout":
        return cls(
            kind=Kind(data["kind"]),
            indices=tuple(data["indices"]),
            wavelength_m=float(data["wavelength_m"]),
            spacing_m=float(data["spacing_m"]) if data.get("spacing_m") is not None else None,
        )

    @classmethod
    def from_json(cls, text: str) -> "ArrayLayout":
        return cls.from_dict(json.loads(text))

    def renamed(self, name: str) -> "ArrayLayout":
        return ArrayLayout(self.kind, self.indices, self.wavelength_m, self.spacing_m, name)


@dataclass(frozen=True)
class MultiSubarraySpec:
    """Sparse placement of ``num_subarrays`` dense subarrays of ``subarray_size``.

    Subarray starts follow the ``base_kind`` rule applied to ``num_subarrays``
    super-elements, scaled by ``stride_units``. ``coprime_pair`` selects (p, q)
    for a coprime base; when omitted the valid pair with the largest p is used.
    """

    base_kind: Kind
    num_subarrays: int
    subarray_size: int
    stride_units: int | None = None
    coprime_pair: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "base_kind", Kind(self.base_kind))
        if self.base_kind not in (Kind.DUA, Kind.NA, Kind.CA, Kind.NRA):
            raise LayoutError("invalid-layout", f"unsupported base kind {self.base_kind.value}")
        if self.num_subarrays < 1 or self.subarray_size < 1:
            raise LayoutError("invalid-count", "subarray count and size must be positive")
        if self.stride_units is None:
            object.__setattr__(self, "stride_units", self.subarray_size)
        elif self.stride_units < 1:
            raise LayoutError("invalid-count", "stride must be positive")


def _check_count(n: int, minimum: int) -> None:
    if int(n) != n or n < minimum:
        raise LayoutError("invalid-count", f"element count must be an integer >= {minimum}, got {n}")


def gen_dua(n: int, wavelength_m: float) -> ArrayLayout:
    _check_count(n, 2)
    return ArrayLayout(Kind.DUA, tuple(range(n)), wavelength_m)


def nested_indices(n: int) -> list[int]:
    """Two-level nested positions for ``n`` elements.

    Dense level ``{0..n1-1}``, sparse level ``{n1 + k(n1+1)}`` with
    ``n1 = n // 2`` dense and ``n - n1`` sparse elements. For even ``n`` this is
    the classical split; for odd ``n`` the extra element goes to the sparse
    level.
    """
    n1 = n // 2
    n2 = n - n1
    return list(range(n1)) + [n1 + k * (n1 + 1) for k in range(n2)]


def gen_nested(n: int, wavelength_m: float) -> ArrayLayout:
    _check_count(n, 4)
    return ArrayLayout(Kind.NA, tuple(nested_indices(n)), wavelength_m)


def coprime_indices(p: int, q: int) -> list[int]:
    if p < 1 or q < 1 or p >= q or gcd(p, q) != 1:
        raise LayoutError("invalid-coprime-pair", f"need coprime p < q, got p={p}, q={q}")
    return sorted({k * p for k in range(q)} | {k * q for k in range(2 * p)})


def coprime_pair_for_count(m: int) -> tuple[int, int]:
    """Coprime pair (p, q) with ``q + 2p - 1 == m``, preferring the largest p."""
    best = None
    for p in range(1, m):
        q = m + 1 - 2 * p
        if q > p and gcd(p, q) == 1:
            best = (p, q)
    if best is None:
        raise LayoutError("invalid-coprime-pair", f"no coprime pair yields {m} elements")
    return best


def gen_coprime(p: int, q: int, wavelength_m: float) -> ArrayLayout:
    return ArrayLayout(Kind.CA, tuple(coprime_indices(p, q)), wavelength_m)


# Zero-redundancy (Golomb) rulers of minimal length.
NRA_TABLE: dict[int, tuple[int, ...]] = {
    2: (0, 1),
    3: (0, 1, 3),
    4: (0, 1, 4, 6),
    5: (0, 1, 4, 9, 11),
    6: (0, 1, 4, 10, 12, 17),
    7: (0, 1, 4, 10, 18, 23, 25),
    8: (0, 1, 4, 9, 15, 22, 32, 34),
}


def nra_indices(n: int) -> list[int]:
    if n not in NRA_TABLE:
        lo, hi = min(NRA_TABLE), max(NRA_TABLE)
        raise LayoutError("unsupported-order", f"non-redundant arrays are tabulated for {lo} <= n <= {hi}, got {n}")
    return list(NRA_TABLE[n])


def gen_nra(n: int, wavelength_m: float) -> ArrayLayout:
    return ArrayLayout(Kind.NRA, tuple(nra_indices(n)), wavelength_m)


def _expand(starts: Sequence[int], k: int, stride: int) -> tuple[int, ...]:
    out = [s * stride + i for s in starts for i in range(k)]
    if len(set(out)) != len(out):
        raise LayoutError("overlapping-subarrays", "subarrays collide; increase the stride")
    return tuple(sorted(out))


def gen_wsms(m: int, k: int, stride_units: int, wavelength_m: float) -> ArrayLayout:
    if m < 1 or k < 1:
        raise LayoutError("invalid-count", "subarray count and size must be positive")
    if stride_units < k:
        raise LayoutError("overlapping-subarrays", f"stride {stride_units} < subarray size {k}")
    return ArrayLayout(Kind.WSMS, _expand(range(m), k, stride_units), wavelength_m)


_MULTI_KIND = {Kind.DUA: Kind.WSMS, Kind.NA: Kind.NMS, Kind.CA: Kind.CMS, Kind.NRA: Kind.NRMS}


def base_indices(spec: MultiSubarraySpec) -> list[int]:
    m = spec.num_subarrays
    if spec.base_kind is Kind.DUA:
        return list(range(m))
    if spec.base_kind is Kind.NA:
        _check_count(m, 4)
        return nested_indices(m)
    if spec.base_kind is Kind.CA:
        p, q = spec.coprime_pair or coprime_pair_for_count(m)
        idx = coprime_indices(p, q)
        if len(idx) != m:
            raise LayoutError("invalid-coprime-pair", f"pair ({p}, {q}) gives {len(idx)} elements, expected {m}")
        return idx
    return nra_indices(m)


def gen_multi_subarray(spec: MultiSubarraySpec, wavelength_m: float) -> ArrayLayout:
    """Place dense subarrays at the positions of a sparse base rule.

    >>> gen_multi_subarray(MultiSubarraySpec(Kind.NA, 4, 2), 1.0).indices
    (0, 1, 2, 3, 4, 5, 10, 11)
    """
    starts = base_indices(spec)
    indices = _expand(starts, spec.subarray_size, spec.stride_units)
    return ArrayLayout(_MULTI_KIND[spec.base_kind], indices, wavelength_m)


def aperture_units(layout: ArrayLayout) -> int:
    return layout.indices[-1] - layout.indices[0]


def aperture_m(layout: ArrayLayout) -> float:
    return aperture_units(layout) * layout.spacing_m


def fraunhofer_distance_m(layout: ArrayLayout) -> float:
    """Fraunhofer (Rayleigh) distance ``2 D^2 / lambda`` of the full aperture."""
    D = aperture_m(layout)
    return 2.0 * D * D / layout.wavelength_m
