"""Command-line interface.

Subcommands: ``solve`` (one system from files), ``sweep`` (randomized
recovery experiment grid), ``image`` (binary-image reconstruction from
subsampled 2-D DFT measurements), ``verify`` (oracle/solver/theory
cross-checks).  Exit codes: 0 success, 1 input error, 2 solver failure,
3 consistency violation.
"""

import argparse
import sys

import numpy as np

from .alphabet import build_objective, parse_alphabet, round_to_alphabet
from .experiments import (ImageConfig, SweepConfig, run_image, run_sweep,
                          run_verify, verify_report, PRESET_SYMBOLS)
from .fileio import read_matrix, read_vector, write_vector
from .lp_form import build_soav_lp
from .measurement import realify
from .solvers import OPTIMAL, SolverOptions, admm_solve, simplex_solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVER = 2
EXIT_INCONSISTENT = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="soav",
        description="Discrete-valued signal reconstruction by weighted "
                    "sum-of-absolute-values minimization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="reconstruct one signal from files")
    p.add_argument("--matrix", required=True,
                   help="CSV measurement matrix (complex entries as a+bi)")
    p.add_argument("--measurements", required=True,
                   help="measurement vector, one entry per line")
    p.add_argument("--alphabet", required=True,
                   help="symbol:prob pairs, e.g. -1:0.25,0:0.5,1:0.25")
    p.add_argument("--solver", choices=("lp", "admm"), default="lp")
    p.add_argument("--out", default="solution",
                   help="output prefix; writes <out>_z.csv and <out>_rounded.csv")

    p = sub.add_parser("sweep", help="randomized recovery sweep over p")
    p.add_argument("--alphabet-preset", choices=sorted(PRESET_SYMBOLS))
    p.add_argument("--alphabet", help="literal alphabet (fixed distribution)")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--p-grid", default="0:0.05:1", help="start:step:end")
    p.add_argument("--solver", choices=("lp", "admm"), default="admm")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock runtime_ms (breaks byte-level "
                        "reproducibility of the CSV)")

    p = sub.add_parser("image", help="binary image from subsampled 2-D DFT")
    p.add_argument("--input", required=True, help="ASCII 0/1 grid file")
    p.add_argument("--noise-sigma", type=float, default=0.1)
    p.add_argument("--keep", type=int, default=0,
                   help="measurements kept (default: half the pixels)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", choices=("lp", "admm"), default="admm")
    p.add_argument("--out", default="image",
                   help="output prefix for PGM and rounded-grid files")
    p.add_argument("--threads", type=int, default=1, help=argparse.SUPPRESS)

    p = sub.add_parser("verify", help="oracle/solver consistency checks")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--alphabet", default="0:0.5,1:0.5")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=20,
                   help="random kernel directions per instance")
    p.add_argument("--out", help="JSON-lines report path (default stdout)")
    return parser


def cmd_solve(args):
    phi = read_matrix(args.matrix)
    y = read_vector(args.measurements)
    if phi.shape[0] != y.size:
        raise ValueError(
            f"matrix has {phi.shape[0]} rows, measurements {y.size}")
    if np.iscomplexobj(phi) or np.iscomplexobj(y):
        phi_r, y_r = realify(phi.astype(np.complex128),
                             y.astype(np.complex128))
    else:
        phi_r, y_r = phi.astype(np.float64), y.astype(np.float64)
    alphabet = parse_alphabet(args.alphabet)
    objective = build_objective(alphabet)
    opts = SolverOptions()
    if args.solver == "lp":
        result = simplex_solve(build_soav_lp(objective, phi_r, y_r), opts)
    else:
        result = admm_solve(objective, phi_r, y_r, opts)
    write_vector(f"{args.out}_z.csv", result.z)
    write_vector(f"{args.out}_rounded.csv",
                 round_to_alphabet(alphabet, result.z))
    print(f"status={result.status} objective={result.objective:.12g} "
          f"residual={result.feasibility_residual:.3e} "
          f"iterations={result.iterations}")
    return EXIT_OK if result.status == OPTIMAL else EXIT_SOLVER


def cmd_sweep(args):
    if args.alphabet_preset and args.alphabet:
        raise ValueError("give either --alphabet-preset or --alphabet")
    alphabet = args.alphabet_preset or args.alphabet
    if not alphabet:
        raise ValueError("an alphabet (preset or literal) is required")
    config = SweepConfig(alphabet=alphabet, n=args.n, m=args.m,
                         trials=args.trials, p_grid=args.p_grid,
                         solver=args.solver, seed=args.seed, out=args.out,
                         threads=args.threads, timing=args.timing)
    records = run_sweep(config)
    print(f"wrote {len(records)} records to {config.out}")
    return EXIT_OK


def cmd_image(args):
    config = ImageConfig(input=args.input, noise_sigma=args.noise_sigma,
                         keep=args.keep, seed=args.seed, solver=args.solver,
                         out=args.out)
    result = run_image(config)
    failed = False
    for method in ("soav", "bp"):
        print(f"{method}: pixel_errors={result.pixel_errors[method]} "
              f"nsr={result.nsr[method]:.6g} status={result.status[method]}")
        failed |= result.status[method] not in (OPTIMAL, "iteration_limit")
    return EXIT_SOLVER if failed else EXIT_OK


def cmd_verify(args):
    alphabet = parse_alphabet(args.alphabet)
    records, violations = run_verify(args.n, args.m, alphabet, args.trials,
                                     args.seed, samples=args.samples)
    report = verify_report(records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    if violations:
        print(f"{violations} consistency violation(s)", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


_HANDLERS = {"solve": cmd_solve, "sweep": cmd_sweep,
             "image": cmd_image, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
