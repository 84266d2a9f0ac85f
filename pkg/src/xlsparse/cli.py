"""Command-line front end: ``xlsparse {generate,table1,crb-sweep,rank,beampattern}``."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .bounds import crb_range_sweep
from .channel import effective_rank, los_channel
from .coarray import difference_coarray, dof_report
from .geometry import fraunhofer_distance_m
from .nearfield import SourceParams, beampattern
from .reporting import (
    OUTPUT_ENV,
    ExperimentConfig,
    atomic_write_text,
    build_layout,
    csv_text,
    fmt_float,
    format_layout_spec,
    json_text,
    layout_from_spec,
    load_table1_reference,
)


class CommandError(Exception):
    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


def _config(args) -> ExperimentConfig:
    overrides = {
        "frequency_hz": args.frequency,
        "snr_db": getattr(args, "snr_db", None),
        "snapshots": getattr(args, "snapshots", None),
        "theta_deg": getattr(args, "theta_deg", None),
        "separation_m": getattr(args, "separation", None),
        "sv_threshold": getattr(args, "threshold", None),
        "ranges_m": getattr(args, "ranges", None),
        "layouts": getattr(args, "layouts", None),
        "output_dir": args.output_dir,
    }
    return ExperimentConfig.load(args.config, overrides)


def _outdir(cfg: ExperimentConfig) -> Path:
    return Path(cfg.output_dir)


def cmd_generate(args) -> int:
    cfg = _config(args)
    params = {k: getattr(args, k) for k in ("n", "p", "q", "m", "k", "stride") if getattr(args, k) is not None}
    layout = build_layout(args.kind, params, cfg.wavelength_m)
    out = Path(args.out) if args.out else _outdir(cfg) / f"layout_{args.kind}.json"
    atomic_write_text(out, layout.to_json())
    print(
        f"layout={format_layout_spec(args.kind, params)} elements={layout.n_elements} "
        f"span={layout.span} fraunhofer_m={fmt_float(fraunhofer_distance_m(layout))} file={out}"
    )
    return 0


def table1_rows(wavelength_m: float = 1.0) -> list[dict]:
    rows = []
    for ref in load_table1_reference():
        layout = layout_from_spec(ref["layout"], wavelength_m)
        ca = difference_coarray(layout)
        rows.append(
            {
                "case": ref["case"],
                "name": ref["name"],
                "positions": list(layout.indices),
                "n_elements": layout.n_elements,
                "span": layout.span,
                "paper_aperture": ref["max_aperture"],
                "aperture_flag": "ok" if layout.span + 1 == ref["max_aperture"] else "convention-mismatch",
                "dof": ca.dof,
                "holes": len(ca.holes),
                "paper_dof": ref["dof"],
                "positions_match": list(layout.indices) == ref["positions"],
            }
        )
    return rows


def cmd_table1(args) -> int:
    cfg = _config(args)
    rows = table1_rows(cfg.wavelength_m)
    header = [
        "case", "name", "positions", "n_elements", "span", "paper_aperture",
        "aperture_flag", "dof", "paper_dof", "holes",
    ]
    body = [
        [r["case"], r["name"], " ".join(map(str, r["positions"])), r["n_elements"], r["span"],
         r["paper_aperture"], r["aperture_flag"], r["dof"], r["paper_dof"], r["holes"]]
        for r in rows
    ]
    outdir = _outdir(cfg)
    atomic_write_text(outdir / "table1.csv", csv_text(header, body))
    layouts = [layout_from_spec(ref["layout"], cfg.wavelength_m).renamed(f"{ref['name']}-case{ref['case']}")
               for ref in load_table1_reference()]
    report = dof_report(layouts)
    atomic_write_text(
        outdir / "dof_report.csv",
        csv_text(["name", "n_elements", "span", "dof", "holes"],
                 [[r.name, r.n_elements, r.span, r.dof, r.holes] for r in report]),
    )
    for r in rows:
        print(f"case{r['case']} {r['name']:<5} N={r['n_elements']:<3} span={r['span']:<3} "
              f"dof={r['dof']:<3} paper_dof={r['paper_dof']:<3} aperture={r['aperture_flag']}")
    if args.verify:
        bad = [f"case{r['case']}-{r['name']}" for r in rows
               if r["dof"] != r["paper_dof"] or not r["positions_match"]]
        matched = len(rows) - len(bad)
        print(f"verify: {matched}/{len(rows)} rows match")
        if bad:
            raise CommandError("table1-mismatch", "rows differ from reference: " + ",".join(bad))
    return 0


def cmd_crb_sweep(args) -> int:
    cfg = _config(args)
    layouts = cfg.build_layouts()
    template = SourceParams(math.radians(cfg.theta_deg), cfg.ranges_m[0], cfg.snr_db, cfg.snapshots)
    rows = crb_range_sweep(layouts, cfg.ranges_m, template)
    body = [[r.layout_name, r.range_m, r.root_crb_range_m if r.error is None else r.error] for r in rows]
    out = _outdir(cfg) / "crb_sweep.csv"
    atomic_write_text(out, csv_text(["layout", "range_m", "root_crb_range_m"], body))
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def cmd_rank(args) -> int:
    cfg = _config(args)
    outdir = _outdir(cfg)
    report = []
    for layout in cfg.build_layouts():
        ch = los_channel(layout, layout, cfg.separation_m)
        rank = effective_rank(ch, cfg.sv_threshold)
        spectrum = f"spectrum_{layout.name.lower()}.csv"
        atomic_write_text(
            outdir / spectrum,
            csv_text(["k", "sigma_normalized"], [[i + 1, float(s)] for i, s in enumerate(ch.singular_values)]),
        )
        report.append({
            "layout": layout.name,
            "distance_m": cfg.separation_m,
            "threshold": cfg.sv_threshold,
            "rank": rank,
            "spectrum_file": spectrum,
        })
        print(f"{layout.name:<5} rank={rank}")
    atomic_write_text(outdir / "rank.json", json_text(report))
    return 0


def cmd_beampattern(args) -> int:
    cfg = _config(args)
    layout = layout_from_spec(args.layout, cfg.wavelength_m)
    focus = SourceParams(math.radians(args.focus_theta_deg), args.focus_range)
    thetas = np.radians(np.linspace(args.theta_min_deg, args.theta_max_deg, args.theta_num))
    ranges = np.linspace(args.range_min, args.range_max, args.range_num)
    grid = [(float(t), float(r)) for t in thetas for r in ranges]
    gains = beampattern(layout, focus, grid)
    body = [[th, r, float(g)] for (th, r), g in zip(grid, gains)]
    out = _outdir(cfg) / "beampattern.csv"
    atomic_write_text(out, csv_text(["theta_rad", "range_m", "gain"], body))
    print(f"wrote {len(grid)} rows to {out}")
    return 0


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat YAML key/value config file")
    common.add_argument("--output-dir", help=f"output directory (fallback: ${OUTPUT_ENV}, then 'out')")
    common.add_argument("--seed", type=int, help="reserved; all computations are deterministic")
    common.add_argument("--frequency", type=_positive_float, help="carrier frequency in Hz")

    parser = argparse.ArgumentParser(prog="xlsparse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write one layout as JSON")
    g.add_argument("--kind", required=True, choices=["dua", "na", "ca", "nra", "wsms", "nms", "cms", "nrms"])
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=int)
    g.add_argument("--q", type=int)
    g.add_argument("--subarrays", "--m", dest="m", type=int)
    g.add_argument("--subarray-size", "--k", dest="k", type=int)
    g.add_argument("--stride", type=int)
    g.add_argument("--out", help="output file (default: <output-dir>/layout_<kind>.json)")
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("table1", parents=[common], help="reproduce the layout/DoF comparison table")
    t.add_argument("--verify", action="store_true", help="fail if any row differs from the reference")
    t.set_defaults(func=cmd_table1)

    layouts_help = "layout spec such as nrms:m=8,k=64 (repeatable; replaces configured layouts)"

    c = sub.add_parser("crb-sweep", parents=[common], help="root range CRB versus range")
    c.add_argument("--layout", dest="layouts", action="append", help=layouts_help)
    c.add_argument("--ranges", type=_positive_float, nargs="+")
    c.add_argument("--theta-deg", type=float)
    c.add_argument("--snr-db", type=float)
    c.add_argument("--snapshots", type=int)
    c.set_defaults(func=cmd_crb_sweep)

    r = sub.add_parser("rank", parents=[common], help="LoS MIMO singular values and effective rank")
    r.add_argument("--layout", dest="layouts", action="append", help=layouts_help)
    r.add_argument("--separation", type=_positive_float)
    r.add_argument("--threshold", type=float)
    r.set_defaults(func=cmd_rank)

    b = sub.add_parser("beampattern", parents=[common], help="near-field beampattern over an angle/range grid")
    b.add_argument("--layout", default="nrms:m=8,k=64")
    b.add_argument("--focus-theta-deg", type=float, default=0.0)
    b.add_argument("--focus-range", type=_positive_float, default=50.0)
    b.add_argument("--theta-min-deg", type=float, default=-45.0)
    b.add_argument("--theta-max-deg", type=float, default=45.0)
    b.add_argument("--theta-num", type=int, default=91)
    b.add_argument("--range-min", type=_positive_float, default=10.0)
    b.add_argument("--range-max", type=_positive_float, default=200.0)
    b.add_argument("--range-num", type=int, default=20)
    b.set_defaults(func=cmd_beampattern)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        reason, message = exc.reason, str(exc)
    except ValueError as exc:
        reason = getattr(exc, "reason", "invalid-input")
        message = str(exc)
        if message.startswith(reason + ": "):
            message = message[len(reason) + 2:]
    except OSError as exc:
        reason, message = "io-error", str(exc)
    print(f"error: {reason}: {' '.join(message.split())}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
