"""GA redesign of the 3-element array over concrete.

Searches parasitic spacings and lengths, then compares the result with the
starting design and the lone driven element in the same scene.
"""
import argparse

from parray import scenarios as sc
from parray.ga_optimizer import DesignScene, GAConfig, ObjectiveSpec, compare_designs, evolve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--population", type=int, default=40)
    ap.add_argument("--generations", type=int, default=60)
    ap.add_argument("--desired-gain-db", type=float, default=16.0)
    ap.add_argument("--threads", type=int, default=0)
    args = ap.parse_args()

    scene = DesignScene(sc.three_element(sc.CONCRETE))
    config = GAConfig(population=args.population, generations=args.generations,
                      seed=args.seed, workers=args.threads)
    result = evolve(config, ObjectiveSpec(desired_gain_db=args.desired_gain_db), scene)
    for g in result.trace[:: max(1, len(result.trace) // 10)]:
        print(f"gen {g.generation:3d}  best {g.best_fitness:8.3f}  mean {g.mean_fitness:8.3f}")

    lam = scene.template.wavelength
    best = result.best.in_wavelengths(lam)
    start = scene.template_design()
    print(f"\n{result.evaluations} evaluations, best fitness {result.best_fitness:.3f}")
    print("spacings (wl):", [round(s, 3) for s in best.spacings])
    print("lengths (wl): ", [round(v, 3) for v in best.lengths])
    report = compare_designs(result.best, start, scene)
    for name, key in (("optimized", "a"), ("starting", "b"), ("lone driven", "lone_driven")):
        r = report[key]
        print(f"{name:>12}: D {r.directivity_db:6.2f} dBi, beam ({r.beam_elevation_deg:.1f}, "
              f"{r.beam_azimuth_deg:.1f}) deg, gain vs lone {r.relative_gain_db:+.2f} dB")


if __name__ == "__main__":
    main()
