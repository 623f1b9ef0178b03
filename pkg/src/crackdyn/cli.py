"""``crackdyn`` command line interface.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure,
4 verification failure. Log verbosity comes from ``CRACKDYN_LOG``
(error, warn, info, debug).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import fem_oracle
from .config import ConfigError, build_load, build_simulation, load_config
from .crack_physics import (flexibility_double_sided, flexibility_single_sided,
                            natural_frequencies)
from .dynamics import simulate
from .errors import NumericalError
from .modal_solver import evaluate, find_eigenvalues, modal_basis

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VERIFY = 0, 2, 3, 4

log = logging.getLogger("crackdyn")

_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "warning": logging.WARNING,
           "info": logging.INFO, "debug": logging.DEBUG}


def fmt(x) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(x))


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def cmd_flexibility(args):
    kind = args.kind.replace("_sided", "")
    func = flexibility_double_sided if kind == "double" else flexibility_single_sided
    try:
        theta = func(args.height, args.ratio)
    except ValueError as exc:
        raise ConfigError(f"--ratio/--height: {exc}") from None
    print(f"{theta:.12g}")
    return EXIT_OK


def cmd_nondim(args):
    problem = load_config(args.config)
    m = problem.model
    out = {
        "nondim": {
            "crack_positions": list(m.crack_positions),
            "flexibilities": list(m.flexibilities),
            "beta": m.beta,
            "c_d": m.c_d,
            "mu": m.mu,
        },
        "summary": None,
    }
    if problem.summary is not None:
        s = problem.summary
        out["summary"] = {
            "omega0": s.omega0,
            "gyration_radius": s.gyration_radius,
            "beta": s.beta,
            "energy_factor": s.energy_factor,
        }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _shape_grid(model, points):
    """Grid on [0, pi] with each crack abscissa listed twice (left, right)."""
    xs = np.linspace(0.0, math.pi, points)
    rows = [(float(x), "right") for x in xs if not any(abs(x - c) < 1e-12 for c in model.crack_positions)]
    for c in model.crack_positions:
        rows += [(c, "left"), (c, "right")]
    rows.sort(key=lambda r: (r[0], r[1] == "right"))
    return rows


def cmd_modal(args):
    problem = load_config(args.config)
    n = args.modes or problem.n_modes
    if args.shapes:
        basis = modal_basis(problem.model, n, **problem.scan)
        lams = list(basis.lambdas)
    else:
        lams = find_eigenvalues(problem.model, n, **problem.scan)
    omegas = natural_frequencies(lams, problem.physical) if problem.physical else None
    with _output(args.out) as fh:
        w = _writer(fh)
        w.writerow(["k", "lambda", "lambda4", "omega_physical"])
        for k, lam in enumerate(lams):
            w.writerow([k + 1, fmt(lam), fmt(lam**4), fmt(omegas[k]) if omegas else ""])
    if args.shapes:
        with _output(args.shapes) as fh:
            w = _writer(fh)
            header = ["x"]
            for k in range(1, n + 1):
                header += [f"phi_{k}", f"dphi_{k}", f"ddphi_{k}"]
            w.writerow(header)
            for x, side in _shape_grid(problem.model, args.grid):
                row = [fmt(x)]
                for phi in basis.pairs:
                    row += [fmt(evaluate(phi, x, order, side)) for order in (0, 1, 2)]
                w.writerow(row)
    return EXIT_OK


def cmd_simulate(args):
    problem = load_config(args.config)
    if problem.simulation is None:
        raise ConfigError("config.simulation: required for the simulate command")
    basis = modal_basis(problem.model, problem.n_modes, **problem.scan)
    load = build_load(problem.simulation)
    config = build_simulation(problem.simulation, basis)
    traj = simulate(basis, problem.model, load, config)
    n = basis.n
    with _output(args.out) as fh:
        w = _writer(fh)
        w.writerow(["t"] + [f"c_{k}" for k in range(1, n + 1)] + [f"v_{k}" for k in range(1, n + 1)]
                   + ["T_k", "U_b", "U_a", "E", "balance_residual"])
        total = traj.total
        for i, t in enumerate(traj.times):
            w.writerow([fmt(t)] + [fmt(a) for a in traj.c[i]] + [fmt(a) for a in traj.v[i]]
                       + [fmt(traj.kinetic[i]), fmt(traj.bending[i]), fmt(traj.axial[i]),
                          fmt(total[i]), fmt(traj.balance[i])])
    return EXIT_OK


def cmd_verify(args):
    problem = load_config(args.config)
    n = args.modes
    tm = np.array(find_eigenvalues(problem.model, n, **problem.scan))
    try:
        per_mesh, extrap = fem_oracle.extrapolated_lambdas(problem.model, n, args.elements)
    except ValueError as exc:
        raise ConfigError(f"--elements/--modes: {exc}") from None
    rel = np.abs(extrap - tm) / tm
    # an extrapolated value is only trusted when the correction it applies is small
    correction = np.abs(extrap - per_mesh[-1]) / extrap
    base = fem_oracle.build_mesh(problem.model, args.elements).n_elements
    w = _writer(sys.stdout)
    w.writerow(["k", "lambda_tm"] + [f"lambda_fem_{base * f}" for f in (1, 2, 4)]
               + ["lambda_fem_extrapolated", "rel_diff", "richardson_correction"])
    for k in range(n):
        w.writerow([k + 1, fmt(tm[k])] + [fmt(v[k]) for v in per_mesh]
                   + [fmt(extrap[k]), fmt(rel[k]), fmt(correction[k])])
    agree = bool(np.all(rel <= args.tol))
    converged = bool(np.all(correction <= args.tol))
    ok = agree and converged
    print(f"{'PASS' if ok else 'FAIL'}: max relative difference {rel.max():.3e}, "
          f"max Richardson correction {correction.max():.3e} (tol {args.tol:g})"
          + ("" if converged else "; FEM meshes not converged"), file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser():
    parser = argparse.ArgumentParser(prog="crackdyn",
                                     description="Cracked beam and shallow arch dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flexibility", help="crack flexibility from depth ratio")
    p.add_argument("--kind", required=True,
                   choices=["double", "single", "double_sided", "single_sided"])
    p.add_argument("--ratio", type=float, required=True, help="crack depth ratio a/H")
    p.add_argument("--height", type=float, default=1.0,
                   help="half-height (double) or full height (single)")
    p.set_defaults(func=cmd_flexibility)

    p = sub.add_parser("nondim", help="print the non-dimensional model as JSON")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_nondim)

    p = sub.add_parser("modal", help="eigenvalues (and optionally mode shapes) as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--modes", type=int)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--shapes", help="also write mode shapes to this CSV path")
    p.add_argument("--grid", type=int, default=201, help="shape grid points")
    p.set_defaults(func=cmd_modal)

    p = sub.add_parser("simulate", help="time integration to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="compare eigenvalues with the FEM oracle")
    p.add_argument("--config", required=True)
    p.add_argument("--elements", type=int, default=100)
    p.add_argument("--modes", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_verify)
    return parser


def _configure_logging():
    level = _LEVELS.get(os.environ.get("CRACKDYN_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.captureWarnings(True)


def main(argv=None):
    _configure_logging()
    args = build_parser().parse_args(argv)
    if getattr(args, "modes", None) is not None and args.modes < 1:
        print("crackdyn: error: --modes must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"crackdyn: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"crackdyn: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
