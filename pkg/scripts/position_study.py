"""Monte Carlo position errors on the 5-element baseline over dry ground.

Two runs: the reflector alone at one error bound, then the three directors
over a ladder of bounds.  Prints beam error and directivity binned by mean
position error.
"""
import argparse

import numpy as np

from parray import scenarios as sc
from parray.uncertainty import PerturbationSpec, binned_means, evaluate, run_monte_carlo

DIRECTOR_BOUNDS_M = (0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.49)
BIN_EDGES_M = (0, 0.25, 0.5, 0.75, 1.0, 1.25, 2.5)


def print_bins(rows, d0):
    print(f"{'bin (m)':>12} {'n':>5} {'D (dBi)':>9} {'drop':>6} {'beam err':>9}")
    for r in rows:
        if not r["n"]:
            continue
        print(f"{r['bin_lo']:5.2f}-{r['bin_hi']:<5.2f} {r['n']:5d} {r['mean_directivity_db']:9.2f} "
              f"{d0 - r['mean_directivity_db']:6.2f} {r['mean_beam_error_deg']:9.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--reflector-bound-m", type=float, default=0.6)
    ap.add_argument("--grid-deg", type=float, default=1.0)
    ap.add_argument("--threads", type=int, default=0)
    args = ap.parse_args()
    grid = args.grid_deg

    base = sc.baseline_yagi(sc.DRY_GROUND)
    d0, beam, _ = evaluate(base, (90, 0), grid, grid)
    beam = (beam.theta, beam.phi)
    print(f"unperturbed: D = {d0:.2f} dBi, beam (theta, phi) = ({beam[0]:.1f}, {beam[1]:.1f}) deg")

    spec = PerturbationSpec(args.reflector_bound_m, 0.0, (0,), args.trials, seed=1)
    refl = run_monte_carlo(base, spec, beam, grid, grid, workers=args.threads)
    print(f"\nreflector, +/-{args.reflector_bound_m} m per axis")
    print_bins(binned_means(refl, BIN_EDGES_M), d0)

    records = []
    for k, bound in enumerate(DIRECTOR_BOUNDS_M):
        spec = PerturbationSpec(bound, 0.0, (2, 3, 4), args.trials, seed=100 + k)
        records += run_monte_carlo(base, spec, beam, grid, grid, workers=args.threads)
    print("\ndirectors, pooled over bounds " + ", ".join(f"{b:g}" for b in DIRECTOR_BOUNDS_M) + " m")
    print_bins(binned_means(records, BIN_EDGES_M), d0)
    ok = [r for r in records if r.ok]
    for label, sel in (("<= 0.5 m", [r for r in ok if r.mean_position_error <= 0.5]),
                       ("> 0.5 m", [r for r in ok if r.mean_position_error > 0.5])):
        print(f"mean drop {label}: {d0 - np.mean([r.directivity_db for r in sel]):.2f} dB")


if __name__ == "__main__":
    main()
