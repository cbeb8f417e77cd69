"""Command-line front end.

Subcommands: classify, qt-min, thermal-scan, boundary-mesh, volume,
line-family. The default tolerance is 1e-9, overridable with ``--tol`` or
the ``QG_TOL`` environment variable.
"""

import argparse
import json
import logging
import math
import os
import sys
import time

import numpy as np

from . import boundary
from .classicality import (
    InconsistencyError,
    Verdict,
    classify,
    is_classical,
    min_quantumness_direction,
    thermal_lambda_min_z,
    thermal_transition,
)
from .io import StateFormatError, fmt, matrix_to_json, mesh_to_csv, mesh_to_json, parse_state, rows_to_csv
from .oracles import oracle_audit
from .states import BlochPair, bloch_from_rho, rho_from_bloch, thermal_state
from .validation import DEFAULT_TOL, StateValidationError

log = logging.getLogger("spin1geom")

EXIT_CLASSICAL = 0
EXIT_QUANTUM = 1
EXIT_NONPHYSICAL = 2
EXIT_INPUT_ERROR = 3
EXIT_INTERNAL = 4

SET_C_WORDS = {Verdict.INSIDE: "classical", Verdict.BOUNDARY: "boundary", Verdict.OUTSIDE: "quantum"}


def default_tol():
    env = os.environ.get("QG_TOL")
    return float(env) if env else DEFAULT_TOL


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _mu(text):
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad mu {text!r}") from exc
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("mu needs three comma-separated values")
    return np.array(parts)


def _resolution(text):
    try:
        a, b = (int(x) for x in text.lower().split("x"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"resolution must look like 64x64, got {text!r}") from exc
    if a < 2 or b < 2:
        raise argparse.ArgumentTypeError("resolution must be at least 2x2")
    return a, b


def _emit(text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_state(args):
    """Returns ``(rho, bp)``; raises on IO, format or validation problems."""
    with open(args.input) as fh:
        parsed = parse_state(fh.read())
    if isinstance(parsed, tuple):
        bp = BlochPair(*parsed)
        return rho_from_bloch(bp), bp
    bp = bloch_from_rho(parsed, args.tol, renormalize=args.renormalize)
    return rho_from_bloch(bp), bp


def cmd_classify(args):
    try:
        rho, bp = _load_state(args)
    except (OSError, StateFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except StateValidationError as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    try:
        report = classify(bp, args.tol)
    except InconsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    out = report.to_dict()
    out["u"] = [float(x) for x in bp.u]
    out["W"] = [[float(x) for x in row] for row in bp.W]
    out["matrix"] = matrix_to_json(rho)
    out["violations"] = report.violations
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    if report.physical is Verdict.OUTSIDE:
        return EXIT_NONPHYSICAL
    if report.classical is Verdict.OUTSIDE:
        return EXIT_QUANTUM
    return EXIT_CLASSICAL


def cmd_qt_min(args):
    try:
        _, bp = _load_state(args)
    except (OSError, StateFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except StateValidationError as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    q, t = min_quantumness_direction(bp)
    _emit(json.dumps({"qMin": q, "worstDirection": [float(x) for x in t]}) + "\n", args.output)
    return 0


def cmd_thermal_scan(args):
    if not args.beta_min < args.beta_max or args.steps < 2:
        print("error: need beta-min < beta-max and steps >= 2", file=sys.stderr)
        return EXIT_INPUT_ERROR
    rows = []
    for beta in np.linspace(args.beta_min, args.beta_max, args.steps):
        lam = thermal_lambda_min_z(beta)
        verdict = is_classical(thermal_state(beta), args.tol).verdict
        rows.append([float(beta), lam, SET_C_WORDS[verdict]])
    comments = []
    lams = np.array([r[1] for r in rows])
    if lams.min() <= 0 <= lams.max():
        beta_star = thermal_transition(args.beta_min, args.beta_max)
        comments.append(f"transition_beta={fmt(beta_star)} abs_error_vs_ln2={fmt(abs(beta_star - math.log(2)))}")
    else:
        comments.append("transition_beta=none")
    _emit(rows_to_csv(["beta", "lambdaMinZ", "verdict"], rows, comments), args.output)
    return 0


def cmd_boundary_mesh(args):
    n_theta, n_phi = args.resolution
    families = ["N", "C"] if args.family == "both" else [args.family]
    try:
        specs = [boundary.ellipsoid_N(args.mu) if f == "N" else boundary.ellipsoid_C(args.mu) for f in families]
    except boundary.ChartDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    meshes = [(boundary.mesh_ellipsoid(s, n_theta, n_phi), s) for s in specs]
    if args.format == "json":
        text = json.dumps([mesh_to_json(s, pts) for pts, s in meshes]) + "\n"
    else:
        text = mesh_to_csv([(pts, s.family.value) for pts, s in meshes])
    _emit(text, args.output)
    return 0


def cmd_volume(args):
    start = time.perf_counter()
    audit = oracle_audit(args.samples, args.seed, args.tol, n_jobs=args.jobs)
    summary = {
        "samples": audit["samples"],
        "seed": args.seed,
        "tol": args.tol,
        "classicalFraction": audit["fraction"],
        "stderr": audit["stderr"],
        "pptSeparable": audit["ppt_separable"],
        "agreementViolations": audit["disagreements"],
        "toleranceBand": audit["band"],
        "minQ": audit["min_q"],
    }
    elapsed = time.perf_counter() - start
    if args.timing:
        summary["wallTimeSeconds"] = elapsed
    log.info("volume: %d samples in %.2f s", audit["samples"], elapsed)
    _emit(json.dumps(summary, indent=2) + "\n", args.output)
    return 0 if audit["disagreements"] == 0 else 1


def cmd_line_family(args):
    if args.steps < 2:
        print("error: steps must be >= 2", file=sys.stderr)
        return EXIT_INPUT_ERROR
    rows = []
    for v in np.linspace(-1.0, 1.0, args.steps):
        res = is_classical(boundary.coherent_mixture_line(v), args.tol)
        rows.append([float(v), SET_C_WORDS[res.verdict], res.min_eig])
    _emit(rows_to_csv(["v", "verdict", "lambdaMinZ"], rows), args.output)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="spin1geom", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", help="write here instead of stdout")
        p.add_argument("--tol", type=_positive_float, default=default_tol())

    p = sub.add_parser("classify", help="full classification report for a state file")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--renormalize", action="store_true", help="rescale the matrix to unit trace")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("qt-min", help="smallest quantumness witness and its direction")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--renormalize", action="store_true")
    common(p)
    p.set_defaults(func=cmd_qt_min)

    p = sub.add_parser("thermal-scan", help="classicality of the Jz^2 Gibbs state versus beta")
    p.add_argument("--beta-min", type=float, default=0.0)
    p.add_argument("--beta-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_thermal_scan)

    p = sub.add_parser("boundary-mesh", help="export boundary ellipsoids at fixed mu")
    p.add_argument("--mu", type=_mu, required=True, help="x,y,z")
    p.add_argument("--resolution", type=_resolution, default=(64, 64), help="NxM")
    p.add_argument("--family", choices=["N", "C", "both"], default="both")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    common(p)
    p.set_defaults(func=cmd_boundary_mesh)

    p = sub.add_parser("volume", help="Monte-Carlo classical fraction with the PPT cross-check")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall time in the summary")
    common(p)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("line-family", help="verdicts along the mixture of the +x and -x coherent states")
    p.add_argument("--steps", type=int, default=201)
    common(p)
    p.set_defaults(func=cmd_line_family)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; keep 2 for non-physical states.
        return EXIT_INPUT_ERROR if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
