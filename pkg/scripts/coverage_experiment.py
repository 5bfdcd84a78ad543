#!/usr/bin/env python3
"""Convergence sweep of the dd solver over random admissible instances.

Draws seeded random PSD operators with identity B-marginal (or random
block-symmetric real instances with --real), solves each one, and reports the
convergence rate, residual spread, wall-time percentiles and how many starts
the multistart loop actually consumed.  A JSON artifact with the per-instance
records can be written with --output.
"""

import argparse
import sys
import time

import numpy as np

from ddlocc import jsonio
from ddlocc.solver import SolverOptions, solve_dd, solve_dd_real
from ddlocc.spaces import random_element, random_psd_identity_marginal, space_m2


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=500)
    ap.add_argument("--starts", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--real", action="store_true",
                    help="sweep the SO(3) x SO(3) solver on block-symmetric instances")
    ap.add_argument("--dim-b", type=int, default=3,
                    help="Bob dimension for the complex sweep (ignored with --real)")
    ap.add_argument("--output", help="write per-instance records as JSON")
    args = ap.parse_args(argv)

    m2_basis = space_m2() if args.real else None
    records = []
    for i in range(args.instances):
        rng = np.random.default_rng([args.seed, i])
        if args.real:
            M = random_element(m2_basis, rng)
        else:
            M = random_psd_identity_marginal(rng, dim_b=args.dim_b)
        opts = SolverOptions(maxStarts=args.starts, tolResidual=args.tol,
                             seed=i, realMode=args.real)
        t0 = time.perf_counter()
        cert = (solve_dd_real if args.real else solve_dd)(M, opts)
        records.append({
            "instance": i,
            "residual": cert.residual,
            "converged": cert.converged,
            "startsUsed": cert.startsUsed,
            "seconds": time.perf_counter() - t0,
        })

    conv = [r for r in records if r["converged"]]
    times = np.array([r["seconds"] for r in records])
    starts = np.array([r["startsUsed"] for r in records])
    print(f"instances:        {args.instances} "
          f"({'real' if args.real else f'complex, dimB={args.dim_b}'})")
    print(f"converged:        {len(conv)}/{args.instances} "
          f"({100.0 * len(conv) / args.instances:.1f}%)")
    if conv:
        resid = np.array([r["residual"] for r in conv])
        print(f"residuals:        median {np.median(resid):.2e}, "
              f"worst {resid.max():.2e}")
    print(f"wall time:        median {1e3 * np.median(times):.0f} ms, "
          f"p90 {1e3 * np.percentile(times, 90):.0f} ms, "
          f"max {1e3 * times.max():.0f} ms")
    print(f"starts used:      1 start sufficed for {np.mean(starts == 1) * 100:.1f}%, "
          f"max {starts.max()}")
    failures = [r["instance"] for r in records if not r["converged"]]
    if failures:
        print(f"unconverged:      {failures}")

    if args.output:
        doc = {"config": {"instances": args.instances, "starts": args.starts,
                          "seed": args.seed, "tol": args.tol, "real": args.real},
               "records": records}
        with open(args.output, "w") as fh:
            fh.write(jsonio.dumps(doc))
        print(f"wrote {args.output}")
    return 0 if len(conv) == args.instances else 1


if __name__ == "__main__":
    sys.exit(main())
