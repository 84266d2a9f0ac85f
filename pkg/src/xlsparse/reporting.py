"""Layout spec strings, experiment config, and deterministic file output."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

import yaml

from .geometry import (
    ArrayLayout,
    Kind,
    LayoutError,
    MultiSubarraySpec,
    gen_coprime,
    gen_dua,
    gen_multi_subarray,
    gen_nested,
    gen_nra,
    gen_wsms,
    wavelength_from_frequency,
)

_MULTI_BASE = {"nms": Kind.NA, "cms": Kind.CA, "nrms": Kind.NRA}
_INT_KEYS = {"n", "p", "q", "m", "k", "stride"}
OUTPUT_ENV = "XLSPARSE_OUTPUT_DIR"


def parse_layout_spec(text: str) -> tuple[str, dict[str, int]]:
    """Split ``"nrms:m=8,k=64"`` into ``("nrms", {"m": 8, "k": 64})``."""
    kind, _, rest = text.strip().partition(":")
    params: dict[str, int] = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip().lower()
        if not sep or key not in _INT_KEYS:
            raise LayoutError("invalid-layout", f"bad layout parameter {item!r} in {text!r}")
        try:
            params[key] = int(value)
        except ValueError:
            raise LayoutError("invalid-layout", f"parameter {key} must be an integer in {text!r}") from None
    return kind.strip().lower(), params


def format_layout_spec(kind: str, params: dict[str, int]) -> str:
    return kind + (":" + ",".join(f"{k}={v}" for k, v in params.items()) if params else "")


def build_layout(kind: str, params: dict[str, int], wavelength_m: float) -> ArrayLayout:
    def need(key):
        if key not in params:
            raise LayoutError("invalid-layout", f"layout kind {kind!r} requires parameter {key!r}")
        return params[key]

    if kind == "dua":
        layout = gen_dua(need("n"), wavelength_m)
    elif kind == "na":
        layout = gen_nested(need("n"), wavelength_m)
    elif kind == "ca":
        layout = gen_coprime(need("p"), need("q"), wavelength_m)
    elif kind == "nra":
        layout = gen_nra(need("n"), wavelength_m)
    elif kind == "wsms":
        k = need("k")
        layout = gen_wsms(need("m"), k, params.get("stride", 2 * k), wavelength_m)
    elif kind in _MULTI_BASE:
        pair = (params["p"], params["q"]) if "p" in params and "q" in params else None
        spec = MultiSubarraySpec(_MULTI_BASE[kind], need("m"), need("k"), params.get("stride"), pair)
        layout = gen_multi_subarray(spec, wavelength_m)
    else:
        raise LayoutError("invalid-layout", f"unknown layout kind {kind!r}")
    return layout


def layout_from_spec(text: str, wavelength_m: float) -> ArrayLayout:
    kind, params = parse_layout_spec(text)
    return build_layout(kind, params, wavelength_m).renamed(kind.upper())


DEFAULT_LAYOUTS = (
    "dua:n=512",
    "wsms:m=8,k=64,stride=128",
    "nms:m=8,k=64",
    "cms:m=8,k=64,p=2,q=5",
    "nrms:m=8,k=64",
)


@dataclass
class ExperimentConfig:
    """Experiment settings; the defaults are the 100 GHz, 8 x 64 setup."""

    frequency_hz: float = 100e9
    layouts: list[str] = field(default_factory=lambda: list(DEFAULT_LAYOUTS))
    ranges_m: list[float] = field(default_factory=lambda: [20.0, 40.0, 60.0, 80.0, 100.0, 120.0])
    theta_deg: float = 0.0
    snr_db: float = 0.0
    snapshots: int = 1
    separation_m: float = 100.0
    sv_threshold: float = 1e-3
    output_dir: str = "out"

    def __post_init__(self):
        self.frequency_hz = float(self.frequency_hz)
        self.ranges_m = [float(r) for r in self.ranges_m]
        self.layouts = [str(s) for s in self.layouts]
        self.theta_deg = float(self.theta_deg)
        self.snr_db = float(self.snr_db)
        self.snapshots = int(self.snapshots)
        self.separation_m = float(self.separation_m)
        self.sv_threshold = float(self.sv_threshold)
        self.output_dir = str(self.output_dir)
        if not self.frequency_hz > 0:
            raise ValueError("frequency_hz must be positive")
        if not 0.0 < self.sv_threshold <= 1.0:
            raise ValueError("sv_threshold must lie in (0, 1]")
        if not self.ranges_m or any(not r > 0 for r in self.ranges_m):
            raise ValueError("ranges_m must be a non-empty list of positive values")
        if self.snapshots < 1:
            raise ValueError("snapshots must be >= 1")
        if not self.separation_m > 0:
            raise ValueError("separation_m must be positive")
        if not self.layouts:
            raise ValueError("layouts must not be empty")

    @property
    def wavelength_m(self) -> float:
        return wavelength_from_frequency(self.frequency_hz)

    def build_layouts(self) -> list[ArrayLayout]:
        return [layout_from_spec(s, self.wavelength_m) for s in self.layouts]

    @classmethod
    def load(cls, path: str | os.PathLike | None, overrides: dict[str, Any] | None = None) -> "ExperimentConfig":
        """Read a flat YAML mapping, then apply non-``None`` overrides.

        Precedence is overrides, then file values, then ``$XLSPARSE_OUTPUT_DIR``
        (output directory only), then the dataclass defaults.
        """
        values: dict[str, Any] = {}
        if path is not None:
            data = yaml.safe_load(Path(path).read_text()) or {}
            if not isinstance(data, dict):
                raise ValueError(f"config {path} must be a key/value mapping")
            known = {f.name for f in fields(cls)}
            unknown = sorted(set(data) - known)
            if unknown:
                raise ValueError(f"unknown config keys: {', '.join(unknown)}")
            values.update(data)
        if "output_dir" not in values and os.environ.get(OUTPUT_ENV):
            values["output_dir"] = os.environ[OUTPUT_ENV]
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls(**values)


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def json_text(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_table1_reference() -> list[dict]:
    text = resources.files("xlsparse").joinpath("data/table1.json").read_text()
    return json.loads(text)["rows"]
