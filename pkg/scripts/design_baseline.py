"""Pick the 5-element baseline lengths by maximising free-space directivity.

Spacings stay at the fixed reflector/director values; the search is over the
reflector height and one height shared by all directors (monopole heights in
wavelengths).  Prints the optimum and its pattern metrics.
"""
import argparse

import numpy as np
from scipy.optimize import minimize

from parray import far_field, pattern_metrics, solve_currents
from parray import scenarios as sc
from parray.errors import ParrayError


def negative_directivity(x, grid):
    refl, director = x
    try:
        g = sc.parasitic_yagi(3, reflector_height_wl=refl, director_height_wl=director)
        return -pattern_metrics(far_field(g, solve_currents(g), grid, grid)).directivity_db
    except ParrayError:
        return np.inf


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-deg", type=float, default=2.0)
    ap.add_argument("--start", type=float, nargs=2, default=(0.25, 0.22),
                    metavar=("REFLECTOR", "DIRECTOR"))
    args = ap.parse_args()

    res = minimize(negative_directivity, args.start, args=(args.grid_deg,),
                   method="Nelder-Mead", options={"xatol": 5e-4, "fatol": 1e-3})
    refl, director = res.x
    print(f"reflector height {refl:.4f} wl, director height {director:.4f} wl "
          f"({res.nfev} evaluations)")
    g = sc.parasitic_yagi(3, reflector_height_wl=round(refl, 4), director_height_wl=round(director, 4))
    m = pattern_metrics(far_field(g, solve_currents(g)))
    print(f"D = {m.directivity_db:.2f} dBi, beam az {m.beam_azimuth_deg:.2f} deg, "
          f"SLL {m.side_lobe_level_db:.1f} dB")


if __name__ == "__main__":
    main()
