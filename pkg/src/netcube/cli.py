"""Command line front end.

Subcommands:
  build     ingest or generate a space, build nets + cubes, verify properties
  measure   build a measure on the cube tree (standard / beta / self-similar)
  verify    run the doubling verifiers, write the report and figures
  spectrum  spectrum + local dimension estimates, CSV output and figures

Exit codes: 0 success, 1 usage or input fault, 2 verification failure.
All randomness flows from --seed; identical configs give byte-identical
JSON/CSV artifacts.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from netcube import figures, io
from netcube.cubes import build_cubes, verify_tree_properties
from netcube.doubling import (verify_cube_comparability, verify_doubling,
                              verify_doubling_exhaustive)
from netcube.generators import GeneratorSpec, generate
from netcube.measures import (build_alpha_homogeneous, build_doubling_measure,
                              build_self_similar, check_measure_invariants,
                              child_counts)
from netcube.metric import validate_metric
from netcube.nets import assign_parents, build_nets
from netcube.spectrum import (check_dimension_chain, local_dimension_estimate,
                              sample_points_by_mass, tau_q_estimate,
                              _dimension_grid)


class UsageError(Exception):
    pass


def _add_input_args(sub):
    sub.add_argument("--points", help="CSV point cloud: id,x1,...,xd")
    sub.add_argument("--matrix", help='JSON distance matrix {"n": N, "d": [[..]]}')
    sub.add_argument("--generate", help="generator spec: file path or inline JSON")
    sub.add_argument("--r", type=float, required=True, help="scale ratio in (0, 1/3)")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--seed", type=int, default=0)


def _add_measure_args(sub):
    sub.add_argument("--p", type=float, help="splitting fraction")
    sub.add_argument("--beta", type=float, help="scaling exponent, sets p = r^beta")
    sub.add_argument("--weights", help="comma-separated self-similar weights")


def _load_space(args):
    chosen = [x for x in (args.points, args.matrix, args.generate) if x]
    if len(chosen) != 1:
        raise UsageError("exactly one of --points / --matrix / --generate required")
    if args.points:
        return io.load_points_csv(args.points)
    if args.matrix:
        return io.load_matrix_json(args.matrix)
    text = args.generate
    if Path(text).exists():
        text = Path(text).read_text()
    return generate(GeneratorSpec.from_json(text))


def _build_pipeline(args):
    space = _load_space(args)
    nets = build_nets(space, args.r)
    parents = assign_parents(space, nets)
    tree = build_cubes(nets, parents)
    return space, nets, tree


def _build_measure(tree, args):
    selections = [args.p is not None, args.beta is not None]
    if args.weights is not None and args.p is None:
        raise UsageError("--weights requires --p")
    if args.weights is not None:
        selections = [True]  # (p, weights) is one selection
        weights = [float(w) for w in args.weights.split(",")]
        return build_self_similar(tree, args.p, weights)
    if sum(selections) != 1:
        raise UsageError("exactly one of --p / --beta / --p with --weights required")
    if args.beta is not None:
        return build_alpha_homogeneous(tree, args.beta)
    return build_doubling_measure(tree, args.p)


def _write_json(path: Path, text: str):
    path.write_text(text + "\n")


def _merge_report(out_dir: Path, key: str, payload):
    path = out_dir / "report.json"
    report = {}
    if path.exists():
        report = json.loads(path.read_text())
    report[key] = payload
    _write_json(path, json.dumps(report, sort_keys=True))


def cmd_build(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    space, nets, tree = _build_pipeline(args)
    _write_json(out / "hierarchy.json", nets.to_json())
    _write_json(out / "tree.json", tree.to_json(members=args.emit_members))
    report = verify_tree_properties(tree, space)
    _merge_report(out, "tree_properties", report.to_dict())
    for name, prop in report.properties.items():
        status = "pass" if prop["pass"] else "FAIL"
        print(f"{name:18s} {status}")
    return 0 if report.passed else 2


def cmd_measure(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    space, nets, tree = _build_pipeline(args)
    measure = _build_measure(tree, args)
    _write_json(out / "measure.json", measure.to_json())
    problems = check_measure_invariants(measure)
    _merge_report(out, "measure_invariants",
                  {"pass": not problems, "problems": problems,
                   "M_max": measure.M_max, "params": measure.params})
    print(f"measure p={measure.p:g} M_max={measure.M_max} "
          f"total={measure.point_mass.sum():.12f}")
    for problem in problems:
        print(f"INVARIANT FAIL: {problem}", file=sys.stderr)
    return 0 if not problems else 2


def cmd_verify(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    space, nets, tree = _build_pipeline(args)
    measure = _build_measure(tree, args)
    cubes_report = verify_cube_comparability(tree, measure, space,
                                             samples=args.samples, seed=args.seed)
    balls_report = verify_doubling(space, measure, samples=args.samples,
                                   seed=args.seed)
    payload = {"cube_comparability": cubes_report.to_dict(),
               "ball_doubling": balls_report.to_dict()}
    failed = (cubes_report.asserted and not cubes_report.pass_cubes) or \
        (balls_report.asserted and not balls_report.pass_balls)
    if args.exhaustive:
        if space.n > 512:
            raise UsageError("--exhaustive supported only for n <= 512")
        ex = verify_doubling_exhaustive(space, measure)
        payload["ball_doubling_exhaustive"] = ex.to_dict()
        failed = failed or (ex.asserted and not ex.pass_balls)
    _write_json(out / "doubling_report.json", json.dumps(payload, sort_keys=True))
    _merge_report(out, "doubling", payload)
    print(cubes_report.summary())
    print(balls_report.summary())
    if not args.no_figures:
        figures.plot_doubling_report(balls_report, out / "doubling.png")
        figures.plot_mass_histogram(measure.point_mass, out / "mass_hist.png")
    return 2 if failed else 0


def cmd_spectrum(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    space, nets, tree = _build_pipeline(args)
    measure = _build_measure(tree, args)
    qs = [float(q) for q in args.q.split(",")] if args.q else [0.0, 0.5, 2.0]
    points = sample_points_by_mass(measure, args.samples, seed=args.seed)
    t0 = space.diameter if space.diameter > 0 else 1.0

    spectrum_rows = []
    estimates = []
    for x in np.unique(points):
        for q in qs:
            try:
                est = tau_q_estimate(tree, measure, space, int(x), q, t0)
            except ValueError:
                continue  # window too small on degenerate spaces
            estimates.append(est)
            for k, ls in zip(est.k_window, est.log_sums):
                spectrum_rows.append([int(x), q, k, ls, est.tau_fit, est.tau_min])
    with open(out / "spectrum.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "q", "k", "log_sum", "tau_fit", "tau_min"])
        writer.writerows(spectrum_rows)

    dim_rows = []
    dims = []
    for x in np.unique(points):
        grid = _dimension_grid(space, tree, t0)
        est = local_dimension_estimate(space, measure, int(x), grid)
        dims.append(est)
        for lt, lm in zip(np.log(est.t_grid), est.log_ball_masses):
            dim_rows.append([int(x), lt, lm, est.upper_dim_est, est.lower_dim_est])
    with open(out / "dimension.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "log_t", "log_mass", "upper_dim_est", "lower_dim_est"])
        writer.writerows(dim_rows)

    chain = check_dimension_chain(tree, measure, space, np.unique(points)[:16])
    _merge_report(out, "spectrum", {
        "q_values": qs,
        "mean_upper_dim": float(np.mean([d.upper_dim_est for d in dims])),
        "mean_lower_dim": float(np.mean([d.lower_dim_est for d in dims])),
        "dimension_chain": chain.to_dict(),
    })
    if not args.no_figures:
        figures.plot_spectrum_fit(estimates[:24], math.log(tree.r),
                                  out / "spectrum.png")
        figures.plot_dimension_fit(dims[:24], out / "dimension.png")
    print(f"spectrum: {len(estimates)} estimates, "
          f"mean upper dim {np.mean([d.upper_dim_est for d in dims]):.4f}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcube",
        description="Nested nets, generalized dyadic cubes and doubling measures "
                    "on finite metric spaces")
    subs = parser.add_subparsers(dest="command", required=True)

    p_build = subs.add_parser("build", help="build nets + cube tree, verify properties")
    _add_input_args(p_build)
    p_build.add_argument("--emit-members", action="store_true",
                         help="include per-cube member lists in tree.json")

    p_measure = subs.add_parser("measure", help="build a measure on the cube tree")
    _add_input_args(p_measure)
    _add_measure_args(p_measure)

    p_verify = subs.add_parser("verify", help="run the doubling verifiers")
    _add_input_args(p_verify)
    _add_measure_args(p_verify)
    p_verify.add_argument("--samples", type=int, default=1000)
    p_verify.add_argument("--exhaustive", action="store_true",
                          help="exact scan over all (y, d(y, z)) pairs, n <= 512")
    p_verify.add_argument("--no-figures", action="store_true")

    p_spec = subs.add_parser("spectrum", help="spectrum and dimension estimation")
    _add_input_args(p_spec)
    _add_measure_args(p_spec)
    p_spec.add_argument("--q", help="comma-separated q values")
    p_spec.add_argument("--samples", type=int, default=20,
                        help="number of mass-weighted sample points")
    p_spec.add_argument("--no-figures", action="store_true")
    return parser


COMMANDS = {"build": cmd_build, "measure": cmd_measure,
            "verify": cmd_verify, "spectrum": cmd_spectrum}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
