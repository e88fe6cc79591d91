#!/usr/bin/env python3
"""Run every positive stability scenario and report its convergence.

Usage:
    python scripts/run_stability_suite.py [--out OUTDIR]

Each scenario runs its shrinking perturbation families from the default
start; the summary line shows the final norm / distance-to-target and
the terminal residual.
"""

import argparse
from pathlib import Path

from altproj.constructions import stable_scenario
from altproj.engine import trace_to_csv

RUNS = [
    ("tangent_disc", {"delta_law": "inv_n"}, {"max_iter": 100_000, "record_stride": 1000}),
    ("overlapping_balls", {}, {"max_iter": 5000, "record_stride": 50}),
    ("transversal_planes", {"delta_law": "inv_n_sq"}, {"max_iter": 3000, "record_stride": 50}),
    ("orthant_bounds", {}, {"max_iter": 2000, "record_stride": 50}),
    ("orthant_halfspace", {}, {"max_iter": 2000, "record_stride": 50}),
    ("orthant_polar", {}, {"max_iter": 2000, "record_stride": 50}),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out/stability")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for kind, scen_kwargs, run_kwargs in RUNS:
        scen = stable_scenario(kind, **scen_kwargs)
        trace = scen.run(**run_kwargs)
        trace_to_csv(trace, out / f"{kind}.csv")
        last = trace.final
        extra = (f"dist_to_target={last.dist_target:.3e}"
                 if last.dist_target is not None else f"||a||={last.norm_a:.6f}")
        print(f"{kind:20s} steps={last.n:6d} {extra} residual={last.res_a:.3e}")
    print(f"\ntraces written to {out}/")


if __name__ == "__main__":
    main()
