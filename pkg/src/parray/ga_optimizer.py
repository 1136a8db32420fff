"""Genetic-algorithm redesign of parasitic element spacings and lengths.

Design goals are expressed as three tolerance constraints (peak directivity,
beam azimuth, beam polar angle).  They are scalarised into a sum of hinge
penalties, so a fitness of zero means every constraint is met.
"""
from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .array_solver import ArrayGeometry, far_field, solve_currents
from .errors import ConfigError, ParrayError
from .metrics import beam_direction, directivity, relative_gain, side_lobe_level

log = logging.getLogger(__name__)

# element length band: monopole heights 0.21..0.26 wavelengths, widened by 20 %
# and doubled to the equivalent-dipole length
LENGTH_BAND_WL = (2 * 0.21 * 0.8, 2 * 0.26 * 1.2)
SPACING_BAND_WL = (-0.5, 0.75)
MIN_SEPARATION_DIAMETERS = 4.0
THIN_WIRE_MARGIN = 1.0 + 1e-9


@dataclass(frozen=True)
class DesignVector:
    """Axial offsets from the driven element and lengths of the parasitics (m)."""
    spacings: tuple[float, ...]
    lengths: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "spacings", tuple(float(v) for v in self.spacings))
        object.__setattr__(self, "lengths", tuple(float(v) for v in self.lengths))
        if len(self.spacings) != len(self.lengths):
            raise ValueError("spacings and lengths must have one entry per parasitic")

    def in_wavelengths(self, wavelength: float) -> "DesignVector":
        return DesignVector(tuple(s / wavelength for s in self.spacings),
                            tuple(v / wavelength for v in self.lengths))


@dataclass(frozen=True)
class ObjectiveSpec:
    desired_gain_db: float
    gain_tolerance: float = 0.5
    azimuth_target: float = 0.0
    azimuth_tolerance: float = 2.0
    elevation_target: float = 90.0       # polar angle; 90 deg is the horizon
    elevation_tolerance: float = 2.0
    azimuth_weight: float = 0.5          # dB per degree
    elevation_weight: float = 0.5

    def __post_init__(self):
        for name in ("gain_tolerance", "azimuth_tolerance", "elevation_tolerance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.azimuth_weight < 0 or self.elevation_weight < 0:
            raise ValueError("penalty weights must be non-negative")


@dataclass(frozen=True)
class GAConfig:
    population: int = 40
    generations: int = 60
    crossover_rate: float = 0.9
    mutation_rate: float = 0.15
    mutation_scale: float = 0.1
    elitism: int = 2
    seed: int = 0
    tournament_size: int = 2
    grid_points: int | None = None   # snap every gene to this many levels
    workers: int = 1

    def __post_init__(self):
        for name in ("crossover_rate", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.population < 2 or self.generations < 1:
            raise ValueError("population must be >= 2 and generations >= 1")
        if not 0 <= self.elitism < self.population:
            raise ValueError("elitism must satisfy 0 <= elitism < population")
        if self.mutation_scale < 0 or self.tournament_size < 1:
            raise ValueError("mutation_scale must be >= 0 and tournament_size >= 1")
        if self.grid_points is not None and self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")


@dataclass(frozen=True)
class DesignScene:
    """Everything held fixed during a search.

    ``template`` supplies the driven element, ground, wire radius and the
    number of parasitics.  A parasitic placed behind the driven element in
    the template is searched behind it (and likewise in front), so reflector
    and director roles are kept.  With ``optimize_lengths`` false, the
    template lengths are used and only spacings evolve.
    """
    template: ArrayGeometry
    theta_res: float = 1.0
    phi_res: float = 1.0
    optimize_lengths: bool = True
    spacing_bounds: tuple[tuple[float, float], ...] | None = None   # m, per parasitic
    length_bounds: tuple[float, float] | None = None                  # m

    def __post_init__(self):
        lam = self.template.wavelength
        if self.spacing_bounds is None:
            bounds = []
            for s in self.template_design().spacings:
                if s < 0:
                    bounds.append((SPACING_BAND_WL[0] * lam, -self.min_separation))
                else:
                    bounds.append((self.min_separation, SPACING_BAND_WL[1] * lam))
            object.__setattr__(self, "spacing_bounds", tuple(bounds))
        if self.length_bounds is None:
            lo = max(LENGTH_BAND_WL[0] * lam, 20.0 * self.radius * THIN_WIRE_MARGIN)
            object.__setattr__(self, "length_bounds", (lo, LENGTH_BAND_WL[1] * lam))
        if len(self.spacing_bounds) != len(self.parasitic_indices):
            raise ValueError("one spacing bound per parasitic element is required")

    @property
    def parasitic_indices(self) -> list[int]:
        d = self.template.driven_index
        return [i for i in range(len(self.template.elements)) if i != d]

    @property
    def radius(self) -> float:
        return max(e.radius for e in self.template.elements)

    @property
    def min_separation(self) -> float:
        return MIN_SEPARATION_DIAMETERS * 2.0 * self.radius

    def template_design(self) -> DesignVector:
        els = self.template.elements
        x0 = els[self.template.driven_index].position[0]
        idx = self.parasitic_indices
        return DesignVector([els[i].position[0] - x0 for i in idx], [els[i].length for i in idx])

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = [b[0] for b in self.spacing_bounds]
        hi = [b[1] for b in self.spacing_bounds]
        if self.optimize_lengths:
            n = len(self.spacing_bounds)
            lo += [self.length_bounds[0]] * n
            hi += [self.length_bounds[1]] * n
        return np.array(lo), np.array(hi)

    def encode(self, design: DesignVector) -> np.ndarray:
        genes = list(design.spacings)
        if self.optimize_lengths:
            genes += list(design.lengths)
        return np.array(genes, dtype=float)

    def decode(self, genes) -> DesignVector:
        n = len(self.spacing_bounds)
        lengths = genes[n:] if self.optimize_lengths else self.template_design().lengths
        return DesignVector(tuple(genes[:n]), tuple(lengths))

    def is_admissible(self, design: DesignVector) -> bool:
        """Within bounds and no two elements closer than the minimum separation."""
        tol = 1e-12 * self.template.wavelength
        for s, (lo, hi) in zip(design.spacings, self.spacing_bounds):
            if not lo - tol <= s <= hi + tol:
                return False
        if self.optimize_lengths:
            lo, hi = self.length_bounds
            if any(not lo - tol <= v <= hi + tol for v in design.lengths):
                return False
        xs = sorted([0.0, *design.spacings])
        return all(b - a >= self.min_separation - tol for a, b in zip(xs, xs[1:]))

    def geometry(self, design: DesignVector) -> ArrayGeometry:
        els = list(self.template.elements)
        x0 = els[self.template.driven_index].position[0]
        for i, s, v in zip(self.parasitic_indices, design.spacings, design.lengths):
            _, y, z = els[i].position
            els[i] = els[i].with_changes(position=(x0 + s, y, z), length=v)
        return self.template.replace(elements=tuple(els))


@dataclass(frozen=True)
class DesignEvaluation:
    directivity_db: float
    beam_theta_deg: float
    beam_phi_deg: float
    fitness: float


def evaluate_design(design: DesignVector, spec: ObjectiveSpec, scene: DesignScene) -> DesignEvaluation:
    geom = scene.geometry(design)
    pat = far_field(geom, solve_currents(geom), scene.theta_res, scene.phi_res)
    d = directivity(pat)
    beam = beam_direction(pat)
    az_err = abs((beam.phi - spec.azimuth_target + 180.0) % 360.0 - 180.0)
    el_err = abs(beam.theta - spec.elevation_target)
    f = (max(0.0, abs(d - spec.desired_gain_db) - spec.gain_tolerance)
         + spec.azimuth_weight * max(0.0, az_err - spec.azimuth_tolerance)
         + spec.elevation_weight * max(0.0, el_err - spec.elevation_tolerance))
    return DesignEvaluation(d, beam.theta, beam.phi, f)


def fitness(design: DesignVector, spec: ObjectiveSpec, scene: DesignScene) -> float:
    """Weighted hinge penalty (>= 0); ``inf`` if the design cannot be solved."""
    try:
        return evaluate_design(design, spec, scene).fitness
    except ParrayError as exc:
        log.info("design %s culled: %s", design, exc)
        return math.inf


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float


@dataclass(frozen=True)
class EvolutionResult:
    best: DesignVector
    best_fitness: float
    trace: tuple[GenerationStats, ...]
    evaluations: int = field(default=0, compare=False)


class _Evaluator:
    """Memoised fitness; genomes are keyed by their exact float values."""

    def __init__(self, spec, scene, workers):
        self.spec, self.scene, self.workers = spec, scene, workers
        self.cache: dict[tuple, float] = {}

    def _one(self, key):
        design = self.scene.decode(key)
        if not self.scene.is_admissible(design):
            return math.inf
        return fitness(design, self.spec, self.scene)

    def __call__(self, genomes) -> np.ndarray:
        keys = [tuple(float(g) for g in x) for x in genomes]
        todo = list(dict.fromkeys(k for k in keys if k not in self.cache))
        if self.workers == 1 or len(todo) < 2:
            values = [self._one(k) for k in todo]
        else:
            with ThreadPoolExecutor(max_workers=self.workers or None) as pool:
                values = list(pool.map(self._one, todo))
        self.cache.update(zip(todo, values))
        return np.array([self.cache[k] for k in keys])


def _snap(x, lo, hi, points):
    if points is None:
        return np.clip(x, lo, hi)
    step = (hi - lo) / (points - 1)
    return lo + np.clip(np.round((x - lo) / step), 0, points - 1) * step


def mutate(rng, genes, lo, hi, config: GAConfig) -> np.ndarray:
    """Gaussian step on each gene with probability ``mutation_rate``, kept in bounds."""
    mask = rng.random(len(genes)) < config.mutation_rate
    step = rng.normal(0.0, 1.0, len(genes)) * config.mutation_scale * (hi - lo)
    if config.grid_points is not None:
        # on a grid, a mutated gene moves by at least one level
        level = (hi - lo) / (config.grid_points - 1)
        step = np.sign(step) * np.maximum(np.abs(step), level)
    return _snap(genes + mask * step, lo, hi, config.grid_points)


def _unseen(rng, child, lo, hi, config, admissible, seen, tries=50):
    """On a finite grid, steer a repeated genome to one not evaluated yet."""
    if tuple(float(g) for g in child) not in seen:
        return child
    forced = replace(config, mutation_rate=1.0)
    for _ in range(tries):
        trial = mutate(rng, child, lo, hi, forced)
        if admissible(trial) and tuple(float(g) for g in trial) not in seen:
            return trial
    return child


def _tournament(rng, fit, size):
    picks = rng.integers(0, len(fit), size)
    return int(picks[np.argmin(fit[picks])])


def evolve(config: GAConfig, spec: ObjectiveSpec, scene: DesignScene,
           initial: list[DesignVector] | None = None) -> EvolutionResult:
    """Minimise ``fitness`` over the scene's search box.

    ``initial`` designs (if any) are placed first in generation 0; the rest of
    the population is drawn uniformly.  Stops early once a zero-fitness
    design appears.
    """
    rng = np.random.default_rng(config.seed)
    lo, hi = scene.bounds()
    snap = lambda x: _snap(x, lo, hi, config.grid_points)  # noqa: E731
    admissible = lambda x: scene.is_admissible(scene.decode(x))  # noqa: E731

    pop = [snap(scene.encode(d)) for d in (initial or [])][:config.population]
    while len(pop) < config.population:
        for _ in range(100):
            x = snap(rng.uniform(lo, hi))
            if admissible(x):
                break
        pop.append(x)
    pop = np.array(pop)

    evaluate = _Evaluator(spec, scene, config.workers)
    fit = evaluate(pop)
    if not np.isfinite(fit).any():
        raise ConfigError("every design in the initial population is infeasible")

    trace = []
    for gen in range(config.generations):
        finite = fit[np.isfinite(fit)]
        mean = float(finite.mean()) if finite.size else math.nan
        trace.append(GenerationStats(gen, float(fit.min()), mean))
        if fit.min() == 0.0 or gen == config.generations - 1:
            break
        order = np.argsort(fit, kind="stable")
        children = [pop[i].copy() for i in order[:config.elitism]]
        while len(children) < config.population:
            a = pop[_tournament(rng, fit, config.tournament_size)]
            b = pop[_tournament(rng, fit, config.tournament_size)]
            if rng.random() < config.crossover_rate:
                child = np.where(rng.random(len(a)) < 0.5, a, b)
            else:
                child = a.copy()
            for _ in range(20):
                trial = mutate(rng, child, lo, hi, config)
                if admissible(trial):
                    child = trial
                    break
            else:
                child = a.copy() if not admissible(child) else child
            if config.grid_points is not None:
                seen = evaluate.cache.keys() | {tuple(c) for c in children}
                child = _unseen(rng, child, lo, hi, config, admissible, seen)
            children.append(child)
        pop = np.array(children)
        fit = evaluate(pop)

    best = int(np.argmin(fit))
    return EvolutionResult(scene.decode(pop[best]), float(fit[best]), tuple(trace),
                           evaluations=len(evaluate.cache))


def grid_search(spec: ObjectiveSpec, scene: DesignScene, points: int) -> tuple[DesignVector, float]:
    """Exhaustive minimum over the same quantised grid ``evolve`` uses."""
    lo, hi = scene.bounds()
    axes = [lo[i] + np.arange(points) * (hi[i] - lo[i]) / (points - 1) for i in range(len(lo))]
    best, best_f = None, math.inf
    for genes in itertools.product(*axes):
        design = scene.decode(np.array(genes))
        if not scene.is_admissible(design):
            continue
        f = fitness(design, spec, scene)
        if f < best_f:
            best, best_f = design, f
    if best is None:
        raise ConfigError("no admissible grid point")
    return best, best_f


@dataclass(frozen=True)
class DesignReport:
    directivity_db: float
    beam_azimuth_deg: float
    beam_elevation_deg: float
    side_lobe_level_db: float | None
    relative_gain_db: float

    def as_dict(self):
        return dict(self.__dict__)


def _report(geom: ArrayGeometry, ref_pattern, theta_res, phi_res) -> DesignReport:
    pat = far_field(geom, solve_currents(geom), theta_res, phi_res)
    beam = beam_direction(pat)
    return DesignReport(directivity(pat), beam.phi, beam.theta, side_lobe_level(pat, beam),
                        relative_gain(pat, ref_pattern, beam))


def compare_designs(a: DesignVector, b: DesignVector, scene: DesignScene) -> dict[str, DesignReport]:
    """Metrics of ``a``, ``b`` and the lone driven element in the same scene.

    Relative gain is measured at each design's own beam direction against the
    lone driven element at equal input power.
    """
    t = scene.template
    lone = t.replace(elements=(t.elements[t.driven_index],))
    ref = far_field(lone, solve_currents(lone), scene.theta_res, scene.phi_res)
    return {
        "a": _report(scene.geometry(a), ref, scene.theta_res, scene.phi_res),
        "b": _report(scene.geometry(b), ref, scene.theta_res, scene.phi_res),
        "lone_driven": _report(lone, ref, scene.theta_res, scene.phi_res),
    }
