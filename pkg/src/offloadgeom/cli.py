"""Batch command-line front end.

Commands:
    stats     dispersion test and cross-correlations of AP location files
    identify  classify high/low density atoms from AP locations
    eval      closed-form metrics for a scenario file
    simulate  Monte Carlo estimates for a scenario file
    sweep     closed-form metrics along a one-parameter sweep
    compare   closed forms and simulation side by side with agreement columns

AP location files are line-oriented text, one record per line,
``x_meters,y_meters[,operator_id]``, with ``#`` comments.  Scenario files are
flat ``key = value`` text with dotted keys.  All tabular output is CSV with
full-precision floats (shortest round-trip representation).

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 internal invariant violation.  The environment variable
OFFLOAD_GEOM_THREADS caps sweep parallelism (default 1, serial).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import formulas as fm
from . import scenario as sc
from . import simulator as sim
from . import spatialstats as ss

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

_SWEEP_KEYS = ("l", "rho_h", "rho_l", "omega_h_frac", "omega_l_frac",
               "arc_h", "arc_l", "shape_a")

_EVAL_COLUMNS = (
    "mode", "ap_count", "static_bandwidth_kbps", "dynamic_bandwidth_kbps",
    "total_throughput_kbit", "handover_count", "wlan_coverage_ratio",
    "wlan_traffic_ratio", "band_coverage", "q_static", "q_dynamic", "flags")


class DataError(Exception):
    """Malformed or unusable input data."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit with code 1
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_pairs(pairs) -> str:
    return ";".join(f"{_fmt(x)}:{_fmt(v)}" for x, v in pairs)


def _fmt_list(values) -> str:
    return ";".join(_fmt(v) for v in values)


def _write(path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_ap_file(path: str) -> dict[str, list[tuple[float, float]]]:
    """Parse an AP location file into per-operator point lists."""
    operators: dict[str, list[tuple[float, float]]] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from exc
    for lineno, line in enumerate(lines, start=1):
        record = line.split("#", 1)[0].strip()
        if not record:
            continue
        parts = [p.strip() for p in record.split(",")]
        if len(parts) not in (2, 3):
            raise DataError(f"{path}:{lineno}: expected x,y[,operator]")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad coordinates {record!r}") from exc
        op = parts[2] if len(parts) == 3 else "0"
        operators.setdefault(op, []).append((x, y))
    if not operators:
        raise DataError(f"{path}: no records found")
    return operators


def _grid_for(operators: dict[str, list[tuple[float, float]]],
              atom: float) -> tuple[tuple[float, float], int, int]:
    xs = [p[0] for pts in operators.values() for p in pts]
    ys = [p[1] for pts in operators.values() for p in pts]
    x0, y0 = min(xs), min(ys)
    nx = max(1, math.ceil((max(xs) - x0) / atom)) if max(xs) > x0 else 1
    ny = max(1, math.ceil((max(ys) - y0) / atom)) if max(ys) > y0 else 1
    return (x0, y0), nx, ny


# ---------------------------------------------------------------------------
# commands


def cmd_stats(args) -> int:
    operators = read_ap_file(args.input)
    origin, nx, ny = _grid_for(operators, args.atom)
    names = sorted(operators)
    grids = {}
    for name in names:
        pts = np.array(operators[name])
        grids[name] = ss.quadrat_counts(pts, origin, args.atom, nx, ny)
    lines = ["record,operator,operator_b,n_points,n_atoms,mean,variance,"
             "index,chi2_lower,chi2_upper,reject,cross_corr"]
    for name in names:
        counts = grids[name].counts.ravel()
        try:
            test = ss.index_of_dispersion(counts)
        except ValueError as exc:
            raise DataError(f"operator {name}: {exc}") from exc
        lines.append(
            f"dispersion,{name},,{counts.sum()},{counts.size},"
            f"{_fmt(counts.mean())},{_fmt(counts.var(ddof=1))},"
            f"{_fmt(test.index)},{_fmt(test.bounds[0])},{_fmt(test.bounds[1])},"
            f"{int(test.reject)},")
    for i, na in enumerate(names):
        for nb in names[i + 1:]:
            try:
                c = ss.cross_correlation(grids[na].counts.ravel(),
                                         grids[nb].counts.ravel())
            except ValueError as exc:
                raise DataError(f"operators {na},{nb}: {exc}") from exc
            lines.append(f"cross_correlation,{na},{nb},,,,,,,,,{_fmt(c)}")
    _write(args.out, lines)
    return EXIT_OK


def cmd_identify(args) -> int:
    operators = read_ap_file(args.input)
    if args.operator is not None:
        if args.operator not in operators:
            raise DataError(f"operator {args.operator!r} not present")
        operators = {args.operator: operators[args.operator]}
    origin, nx, ny = _grid_for(operators, args.atom)
    pts = np.array([p for lst in operators.values() for p in lst])
    grid = ss.quadrat_counts(pts, origin, args.atom, nx, ny)
    partition = ss.identify_regions(grid, args.n0)
    lines = [
        f"# atom_size_m={_fmt(grid.atom_size)} nx={nx} ny={ny} n0={args.n0}",
        f"# origin={_fmt(origin[0])},{_fmt(origin[1])}",
        f"# lambda0_per_km2={_fmt(partition.lam0)}",
        f"# lambda_high_per_km2={_fmt(partition.lam_high)}",
        f"# lambda_low_per_km2={_fmt(partition.lam_low)}",
        "iy,ix,label",
    ]
    for iy in range(ny):
        for ix in range(nx):
            lines.append(f"{iy},{ix},{partition.label(iy, ix)}")
    _write(args.out, lines)
    return EXIT_OK


def _modes(arg: str) -> list[str]:
    mapping = {"baseline": [fm.BASELINE], "homo": [fm.HOMOGENEOUS],
               "inhomo": [fm.INHOMOGENEOUS],
               "all": [fm.BASELINE, fm.HOMOGENEOUS, fm.INHOMOGENEOUS]}
    return mapping[arg]


def _eval_row(report: fm.MetricsReport) -> str:
    return ",".join([
        report.mode, str(report.ap_count), _fmt(report.static_bandwidth),
        _fmt(report.dynamic_bandwidth), _fmt(report.total_throughput),
        _fmt(report.handover_count), _fmt(report.wlan_coverage_ratio),
        _fmt(report.wlan_traffic_ratio), _fmt_list(report.band_coverage),
        _fmt_pairs(report.static_distribution),
        _fmt_pairs(report.dynamic_distribution),
        "|".join(report.warnings)])


def _evaluate_modes(cfg: sc.ScenarioConfig, modes: list[str]) -> list[fm.MetricsReport]:
    cell = sc.build_cell(cfg)
    summary = sc.nominal_summary(cfg, cell)
    intensity = sc.build_intensity(cfg, cell, with_geometry=False)
    return [fm.evaluate(cell, summary, intensity, mode) for mode in modes]


def cmd_eval(args) -> int:
    cfg = _load_cfg(args)
    lines = [",".join(_EVAL_COLUMNS)]
    for report in _evaluate_modes(cfg, _modes(args.mode)):
        lines.append(_eval_row(report))
    _write(args.out, lines)
    return EXIT_OK


def _sim_row(mode: str, res: sim.SimResult) -> str:
    cells = [mode, str(res.replications), _fmt(res.ap_count)]
    for est in (res.static_bandwidth, res.dynamic_bandwidth,
                res.total_throughput, res.handover_count,
                res.wlan_coverage_ratio, res.wlan_traffic_ratio):
        cells.append(_fmt(est.value))
        cells.append(_fmt(est.stderr))
    cells.append(";".join(f"{_fmt(e.value)}:{_fmt(e.stderr)}"
                          for e in res.band_coverage))
    cells.append(";".join(f"{_fmt(x)}:{_fmt(e.value)}:{_fmt(e.stderr)}"
                          for x, e in res.static_distribution))
    cells.append(";".join(f"{_fmt(x)}:{_fmt(e.value)}:{_fmt(e.stderr)}"
                          for x, e in res.dynamic_distribution))
    return ",".join(cells)


_SIM_COLUMNS = (
    "mode", "replications", "ap_count_mean",
    "static_bandwidth_kbps", "static_bandwidth_se",
    "dynamic_bandwidth_kbps", "dynamic_bandwidth_se",
    "total_throughput_kbit", "total_throughput_se",
    "handover_count", "handover_count_se",
    "wlan_coverage_ratio", "wlan_coverage_ratio_se",
    "wlan_traffic_ratio", "wlan_traffic_ratio_se",
    "band_coverage", "q_static", "q_dynamic")


def cmd_simulate(args) -> int:
    cfg = _load_cfg(args)
    wanted = {"homo": ["homogeneous"], "inhomo": ["inhomogeneous"],
              "all": ["homogeneous", "inhomogeneous"]}[args.mode]
    lines = [",".join(_SIM_COLUMNS)]
    for mode in wanted:
        scn = sc.build_sim_scenario(cfg, homogeneous=(mode == "homogeneous"))
        res = sim.run_replications(scn, sc.sim_config(cfg))
        lines.append(_sim_row(mode, res))
    _write(args.out, lines)
    return EXIT_OK


def _sweep_cfg(cfg: sc.ScenarioConfig, key: str, value: float) -> sc.ScenarioConfig:
    if key == "l":
        return replace(cfg, l=int(value))
    if key == "shape_a":
        if cfg.wlan_shape == "disk":
            raise sc.ScenarioError(
                "shape_a sweep needs wlan.shape = stadium or pair_disk")
        target = math.pi * cfg.wlan_r ** 2
        r = sc.solve_radius_for_area(cfg.wlan_shape, value, target)
        return replace(cfg, wlan_a=float(value), wlan_r=r)
    return replace(cfg, **{key: float(value)})


def _sweep_point(payload) -> list[str]:
    cfg, key, value, modes = payload
    point_cfg = _sweep_cfg(cfg, key, value)
    sc.validate_scenario(point_cfg)
    rows = []
    for report in _evaluate_modes(point_cfg, modes):
        rows.append(f"{key},{_fmt(value)},{_eval_row(report)}")
    return rows


def cmd_sweep(args) -> int:
    cfg = _load_cfg(args)
    if args.param not in _SWEEP_KEYS:
        print(f"unknown sweep key {args.param!r}; choose from {_SWEEP_KEYS}",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        print("sweep values must be numbers", file=sys.stderr)
        return EXIT_USAGE
    if not values:
        print("empty sweep value list", file=sys.stderr)
        return EXIT_USAGE
    modes = _modes(args.mode)
    payloads = [(cfg, args.param, v, modes) for v in values]
    workers = _thread_cap()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_point, payloads))
    else:
        chunks = [_sweep_point(p) for p in payloads]
    lines = ["param,value," + ",".join(_EVAL_COLUMNS)]
    for chunk in chunks:
        lines.extend(chunk)
    _write(args.out, lines)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _load_cfg(args)
    cell = sc.build_cell(cfg)
    # closed forms consume the overlap scalars measured from the same
    # region geometry the simulator samples from
    summary = sc.measured_summary(cfg, cell)
    intensity = sc.build_intensity(cfg, cell, with_geometry=False)
    base = fm.evaluate(cell, summary, intensity, fm.BASELINE)
    homo = fm.evaluate(cell, summary, intensity, fm.HOMOGENEOUS)
    inhomo = fm.evaluate(cell, summary, intensity, fm.INHOMOGENEOUS)
    scn = sc.build_sim_scenario(cfg, homogeneous=False)
    res = sim.run_replications(scn, sc.sim_config(cfg))

    rows = [("static_bandwidth_kbps", base.static_bandwidth,
             homo.static_bandwidth, inhomo.static_bandwidth,
             res.static_bandwidth),
            ("dynamic_bandwidth_kbps", base.dynamic_bandwidth,
             homo.dynamic_bandwidth, inhomo.dynamic_bandwidth,
             res.dynamic_bandwidth),
            ("total_throughput_kbit", base.total_throughput,
             homo.total_throughput, inhomo.total_throughput,
             res.total_throughput),
            ("handover_count", base.handover_count, homo.handover_count,
             inhomo.handover_count, res.handover_count),
            ("wlan_coverage_ratio", base.wlan_coverage_ratio,
             homo.wlan_coverage_ratio, inhomo.wlan_coverage_ratio,
             res.wlan_coverage_ratio),
            ("wlan_traffic_ratio", base.wlan_traffic_ratio,
             homo.wlan_traffic_ratio, inhomo.wlan_traffic_ratio,
             res.wlan_traffic_ratio)]
    lines = ["metric,closed_baseline,closed_homogeneous,closed_inhomogeneous,"
             "simulated,sim_stderr,rel_diff_homogeneous,rel_diff_inhomogeneous,"
             "z_inhomogeneous,flags"]
    flags = "|".join(inhomo.warnings)
    for name, b, h, i, est in rows:
        rel_h = abs(est.value - h) / abs(h) if h else math.nan
        rel_i = abs(est.value - i) / abs(i) if i else math.nan
        z = (est.value - i) / est.stderr if est.stderr > 0 else math.nan
        lines.append(
            f"{name},{_fmt(b)},{_fmt(h)},{_fmt(i)},{_fmt(est.value)},"
            f"{_fmt(est.stderr)},{_fmt(rel_h)},{_fmt(rel_i)},{_fmt(z)},{flags}")
    _write(args.out, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# plumbing


def _thread_cap() -> int:
    raw = os.environ.get("OFFLOAD_GEOM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _load_cfg(args) -> sc.ScenarioConfig:
    try:
        cfg = sc.load_scenario(args.scenario)
    except OSError as exc:
        raise DataError(f"{args.scenario}: {exc.strerror}") from exc
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="offload-geom", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", default="csv", choices=["csv"])

    p = subs.add_parser("stats", help="dispersion and cross-correlation stats")
    p.add_argument("input")
    p.add_argument("--atom", type=float, default=100.0)
    add_out(p)
    p.set_defaults(func=cmd_stats)

    p = subs.add_parser("identify", help="classify high/low density atoms")
    p.add_argument("input")
    p.add_argument("--atom", type=float, default=100.0)
    p.add_argument("--n0", type=int, default=3)
    p.add_argument("--operator", default=None)
    add_out(p)
    p.set_defaults(func=cmd_identify)

    p = subs.add_parser("eval", help="closed-form metrics")
    p.add_argument("scenario")
    p.add_argument("--mode", default="all",
                   choices=["homo", "inhomo", "baseline", "all"])
    p.add_argument("--seed", type=int, default=None)
    add_out(p)
    p.set_defaults(func=cmd_eval)

    p = subs.add_parser("simulate", help="Monte Carlo estimates")
    p.add_argument("scenario")
    p.add_argument("--mode", default="inhomo", choices=["homo", "inhomo", "all"])
    p.add_argument("--seed", type=int, default=None)
    add_out(p)
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("sweep", help="closed-form metrics along a sweep")
    p.add_argument("scenario")
    p.add_argument("--param", required=True)
    p.add_argument("--values", required=True,
                   help="comma-separated sweep values")
    p.add_argument("--mode", default="all",
                   choices=["homo", "inhomo", "baseline", "all"])
    p.add_argument("--seed", type=int, default=None)
    add_out(p)
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("compare", help="closed forms vs simulation")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int, default=None)
    add_out(p)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (sc.ScenarioError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
