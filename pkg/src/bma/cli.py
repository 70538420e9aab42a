"""Command-line interface.

Subcommands: calibrate, estimate, simulate, predict-pressure, eval,
export-shape.  Exit codes: 0 success, 1 validation/model error, 2 I/O or
configuration error.  The config path comes from --config or the
BMA_CONFIG environment variable.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

from . import config as cfgmod
from .calibration import DEFAULT_DEGREE, fit_height_poly, evaluate_height
from .errors import BmaError, ParseError
from .estimator import EstimatorState, predict_pressure, step
from .geometry import (
    DeformedShape,
    actuator_volume,
    center_shift,
    contact_radius,
    profile_polyline,
    solve_axes,
    sphere_baseline,
    unindented_shape,
)
from .harness import (
    ML_TO_M3,
    MM_TO_M,
    evaluate,
    ingest_trace,
    run_trace,
    simulate_trace,
    write_trace,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _config_path(args) -> str:
    path = args.config or os.environ.get("BMA_CONFIG")
    if not path:
        raise FileNotFoundError("no config given (use --config or BMA_CONFIG)")
    if not os.path.exists(path):
        raise FileNotFoundError(f"config file not found: {path}")
    return path


def _read_calibration_csv(path):
    samples = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"volume_ml", "height_mm", "phase"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ParseError(f"missing required columns {sorted(required)}", line=1)
        for i, row in enumerate(reader, start=2):
            phase = (row["phase"] or "").strip()
            if phase not in ("inflate", "deflate"):
                raise ParseError(f"unknown phase {phase!r}", line=i)
            try:
                v = float(row["volume_ml"]) * ML_TO_M3
                h = float(row["height_mm"]) * MM_TO_M
            except (TypeError, ValueError) as exc:
                raise ParseError(str(exc), line=i) from exc
            samples.append((v, h, phase))
    return samples


def cmd_calibrate(args) -> int:
    cfg_path = _config_path(args)
    samples = _read_calibration_csv(args.csv)
    fit = fit_height_poly(samples, degree=args.degree)
    raw = cfgmod.load_raw(cfg_path)
    raw["height_fit"] = cfgmod.height_fit_to_dict(fit)
    cfgmod.save_raw(cfg_path, raw)
    print(f"fitted degree-{fit.degree} height polynomial over "
          f"[{fit.v_min / ML_TO_M3:.4g}, {fit.v_max / ML_TO_M3:.4g}] ml; "
          f"written to {cfg_path}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    cfg = cfgmod.load_config(_config_path(args))
    records = ingest_trace(args.trace)
    estimates = run_trace(records, cfg)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t_s", "volume_ml", "pressure_pa", "h1_mm", "h2_mm",
                         "h3_mm", "force_n", "p_hat_pa", "flags"])
        for rec, est in zip(records, estimates):
            writer.writerow([
                f"{rec.t:.9g}", f"{rec.v_f / ML_TO_M3:.9g}", f"{rec.p:.9g}",
                f"{est.h1 / MM_TO_M:.9g}", f"{est.h2 / MM_TO_M:.9g}",
                f"{est.h3 / MM_TO_M:.9g}", f"{est.force:.9g}",
                f"{est.p_hat:.9g}", "|".join(sorted(est.flags)),
            ])
    n_null = sum(1 for e in estimates if e.is_null)
    print(f"estimated {len(estimates)} samples ({n_null} null) -> {args.out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = cfgmod.load_config(_config_path(args))
    script = cfgmod.load_script(args.script)
    records = simulate_trace(script, cfg, seed=args.seed)
    write_trace(args.out, records)
    print(f"simulated {len(records)} samples -> {args.out}")
    return EXIT_OK


def cmd_predict_pressure(args) -> int:
    cfg = cfgmod.load_config(_config_path(args))
    records = ingest_trace(args.trace)
    out = sys.stdout if args.out is None else open(args.out, "w", newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["t_s", "volume_ml", "pressure_pa", "p_hat_pa"])
        for rec in records:
            try:
                p_hat = predict_pressure(rec.v_f, cfg)
            except BmaError:
                p_hat = math.nan
            writer.writerow([f"{rec.t:.9g}", f"{rec.v_f / ML_TO_M3:.9g}",
                             f"{rec.p:.9g}", f"{p_hat:.9g}"])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = cfgmod.load_config(_config_path(args))
    records = ingest_trace(args.trace)
    window = tuple(args.window) if args.window else None
    report = evaluate(records, cfg, contact_window=window)
    print(f"samples:        {report.n_samples} ({report.n_null} null)")
    print(f"RMSE_F:         {report.rmse_f:.6g} N")
    print(f"RMSE_h2:        {report.rmse_h2 / MM_TO_M:.6g} mm")
    if report.rmse_p is not None:
        print(f"RMSE_p:         {report.rmse_p:.6g} Pa (no-contact segments)")
    if report.window_rmse_f is not None:
        print(f"window RMSE_F:  {report.window_rmse_f:.6g} N")
        print(f"window RMSE_h2: {report.window_rmse_h2 / MM_TO_M:.6g} mm")
    return EXIT_OK


def _svg(polyline_mm, sphere_mm, ring_mm, slice_mm, path):
    """Minimal SVG 1.1 overlay: ring line, membrane profile, sphere fit, slice."""
    xs = [p[0] for p in polyline_mm] + [p[0] for p in sphere_mm]
    zs = [p[1] for p in polyline_mm] + [p[1] for p in sphere_mm]
    pad = 2.0
    x0, x1 = min(xs) - pad, max(xs) + pad
    z0, z1 = min(min(zs), 0.0) - pad, max(zs) + pad
    w, h = x1 - x0, z1 - z0
    scale = 20.0

    def pt(x, z):
        # flip z so up is up
        return f"{(x - x0) * scale:.3f},{(z1 - z) * scale:.3f}"

    def path_d(points):
        return "M " + " L ".join(pt(x, z) for x, z in points)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w * scale:.0f}" height="{h * scale:.0f}">',
        f'<path d="{path_d(ring_mm)}" stroke="black" fill="none" stroke-width="2"/>',
        f'<path d="{path_d(sphere_mm)}" stroke="green" fill="none" stroke-width="1.5"/>',
        f'<path d="{path_d(polyline_mm)}" stroke="blue" fill="none" stroke-width="1.5"/>',
    ]
    if slice_mm is not None:
        parts.append(
            f'<path d="{path_d(slice_mm)}" stroke="red" fill="none" stroke-width="1.5"/>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def cmd_export_shape(args) -> int:
    cfg = cfgmod.load_config(_config_path(args))
    v_f = args.volume_ml * ML_TO_M3
    h1 = evaluate_height(cfg.fit, v_f)
    v_bma = actuator_volume(v_f, cfg.ring)
    shape = unindented_shape(v_bma, h1, cfg.ring)

    slice_mm = None
    if args.indent_mm is not None and args.indent_mm > 0:
        h2 = args.indent_mm * MM_TO_M
        h3 = h1 - h2
        d_ell = solve_axes(v_bma, h3, cfg.ring)
        c_c = center_shift(shape.c, d_ell.c)
        k = contact_radius(shape, h2, c_c)
        target = DeformedShape(a_d=d_ell.a, c_d=d_ell.c, h3=h3, c_c=c_c, k=k)
        if k > 0:
            z_mm = h3 / MM_TO_M
            slice_mm = [(-k / MM_TO_M, z_mm), (k / MM_TO_M, z_mm)]
    else:
        target = shape

    pts = profile_polyline(target, args.points)
    pts_mm = [(x / MM_TO_M, z / MM_TO_M) for x, z in pts]

    if args.out.lower().endswith(".csv"):
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x_mm", "z_mm"])
            for x, z in pts_mm:
                writer.writerow([f"{x:.6f}", f"{z:.6f}"])
    else:
        radius, cap_h = sphere_baseline(v_bma, cfg.ring)
        import numpy as np
        zc = cap_h - radius   # sphere center height above the ring plane
        t_max = math.acos(max(-1.0, min(1.0, -zc / radius)))
        t = np.linspace(-t_max, t_max, args.points)
        sphere_mm = [
            (radius * math.sin(ti) / MM_TO_M, (zc + radius * math.cos(ti)) / MM_TO_M)
            for ti in t
        ]
        r_mm = cfg.ring.r / MM_TO_M
        ring_mm = [(-1.5 * r_mm, 0.0), (1.5 * r_mm, 0.0)]
        _svg(pts_mm, sphere_mm, ring_mm, slice_mm, args.out)
    print(f"exported shape -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bma",
        description="Ballooning-membrane actuator modeling and state estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", help="config file (or set BMA_CONFIG)")

    p = sub.add_parser("calibrate", help="fit the volume-to-height polynomial")
    p.add_argument("csv", help="calibration CSV: volume_ml,height_mm,phase")
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    add_config(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("estimate", help="run the state estimator over a trace")
    p.add_argument("trace")
    p.add_argument("--out", required=True)
    add_config(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="synthesize a trace from a script")
    p.add_argument("script")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    add_config(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict-pressure",
                       help="no-contact pressure prediction for a trace")
    p.add_argument("trace")
    p.add_argument("--out", default=None)
    add_config(p)
    p.set_defaults(func=cmd_predict_pressure)

    p = sub.add_parser("eval", help="evaluate the estimator against ground truth")
    p.add_argument("trace")
    p.add_argument("--window", nargs=2, type=float, metavar=("T0", "T1"),
                   help="contact window [s] for the restricted error report")
    add_config(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("export-shape", help="export a reconstructed profile")
    p.add_argument("--volume-ml", type=float, required=True)
    p.add_argument("--indent-mm", type=float, default=None)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--out", required=True)
    add_config(p)
    p.set_defaults(func=cmd_export_shape)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, PermissionError, IsADirectoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (BmaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
