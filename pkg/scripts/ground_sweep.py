"""Directivity and beam direction of the baseline across ground parameters."""
import argparse

from parray import scenarios as sc
from parray.uncertainty import GroundSweepSpec, sweep_ground_params

EPSILON_R = (1.5, 2.5, 3.5, 4.5, 6.0, 8.0)
SIGMA = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid-deg", type=float, default=1.0)
    ap.add_argument("--threads", type=int, default=0)
    args = ap.parse_args()

    spec = GroundSweepSpec(EPSILON_R, SIGMA, sc.baseline_yagi(sc.DRY_GROUND))
    rows = sweep_ground_params(spec, (90, 0), args.grid_deg, args.grid_deg, workers=args.threads)
    table = {(r.epsilon_r, r.sigma): r for r in rows}
    print("directivity (dBi); rows epsilon_r, columns sigma (S/m)")
    print(f"{'':>6}" + "".join(f"{s:>9g}" for s in SIGMA))
    for e in EPSILON_R:
        print(f"{e:>6g}" + "".join(f"{table[e, s].directivity_db:9.2f}" for s in SIGMA))
    print("\nbeam elevation theta (deg)")
    for e in EPSILON_R:
        print(f"{e:>6g}" + "".join(f"{table[e, s].beam_theta_deg:9.1f}" for s in SIGMA))


if __name__ == "__main__":
    main()
