import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parray import scenarios as sc
from parray.errors import ConfigError
from parray.ga_optimizer import (DesignScene, DesignVector, GAConfig, ObjectiveSpec,
                                 compare_designs, evaluate_design, evolve, fitness,
                                 grid_search, mutate)

LAM = sc.WAVELENGTH_M
GRID = 5.0


@pytest.fixture(scope="module")
def free_scene():
    return DesignScene(sc.three_element(), GRID, GRID)


@pytest.fixture(scope="module")
def concrete_scene():
    return DesignScene(sc.three_element(sc.CONCRETE), GRID, GRID)


def test_all_constraints_met_gives_zero(free_scene):
    d = free_scene.template_design()
    ev = evaluate_design(d, ObjectiveSpec(0.0), free_scene)
    assert fitness(d, ObjectiveSpec(ev.directivity_db), free_scene) == 0.0


def test_gain_hinge_arithmetic(free_scene):
    d = free_scene.template_design()
    ev = evaluate_design(d, ObjectiveSpec(0.0), free_scene)
    assert abs(ev.beam_phi_deg) < 2 and abs(ev.beam_theta_deg - 90) < 2
    spec = ObjectiveSpec(ev.directivity_db + 0.5 + 1.0, gain_tolerance=0.5)
    assert fitness(d, spec, free_scene) == pytest.approx(1.0, abs=1e-12)


def test_beam_hinge_weighting(free_scene):
    d = free_scene.template_design()
    ev = evaluate_design(d, ObjectiveSpec(0.0), free_scene)
    # demand a beam 32 deg off in azimuth: 30 deg beyond tolerance at 0.5 per deg
    spec = ObjectiveSpec(ev.directivity_db, azimuth_target=32.0)
    assert fitness(d, spec, free_scene) == pytest.approx(15.0, abs=0.05)


def test_conventional_design_over_concrete_is_penalised(concrete_scene):
    free_d = evaluate_design(concrete_scene.template_design(), ObjectiveSpec(0.0),
                             DesignScene(sc.three_element(), GRID, GRID)).directivity_db
    assert fitness(concrete_scene.template_design(), ObjectiveSpec(free_d), concrete_scene) > 0


def test_unsolvable_design_is_culled(free_scene):
    d = DesignVector((-0.25 * LAM, 0.31 * LAM), (0.9 * LAM, 0.42 * LAM))
    assert fitness(d, ObjectiveSpec(8.0), free_scene) == math.inf


def test_default_bounds(concrete_scene):
    s = concrete_scene
    assert s.min_separation == pytest.approx(0.16 * LAM)
    assert s.spacing_bounds[0] == pytest.approx((-0.5 * LAM, -0.16 * LAM))
    assert s.spacing_bounds[1] == pytest.approx((0.16 * LAM, 0.75 * LAM))
    lo, hi = s.length_bounds
    assert lo > 0.4 * LAM and lo == pytest.approx(0.4 * LAM) and hi == pytest.approx(0.624 * LAM)
    assert s.is_admissible(s.template_design())
    assert not s.is_admissible(DesignVector((-0.1 * LAM, 0.31 * LAM), (0.5 * LAM, 0.42 * LAM)))


def test_encode_decode_roundtrip(concrete_scene):
    d = concrete_scene.template_design()
    assert concrete_scene.decode(concrete_scene.encode(d)) == d


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.sampled_from([None, 5, 21]))
def test_mutation_respects_bounds(seed, points):
    rng = np.random.default_rng(seed)
    lo = np.array([-3.7, 1.2, 3.0, 3.0])
    hi = np.array([-1.2, 5.6, 4.7, 4.7])
    cfg = GAConfig(mutation_rate=1.0, mutation_scale=2.0, grid_points=points)
    x = rng.uniform(lo, hi, size=(5000, 4))
    for row in x[:20]:
        m = mutate(rng, row, lo, hi, cfg)
        assert np.all(m >= lo) and np.all(m <= hi)


def test_mutation_bounds_bulk():
    # 1e5 mutations, every gene stays inside the box
    rng = np.random.default_rng(0)
    lo, hi = np.array([-3.7, 1.2]), np.array([-1.2, 5.6])
    cfg = GAConfig(mutation_rate=0.5, mutation_scale=0.5)
    x = np.array([-2.0, 3.0])
    for _ in range(100_000):
        x = mutate(rng, x, lo, hi, cfg)
        assert lo[0] <= x[0] <= hi[0] and lo[1] <= x[1] <= hi[1]


def test_config_validation():
    with pytest.raises(ValueError):
        GAConfig(crossover_rate=1.5)
    with pytest.raises(ValueError):
        GAConfig(population=4, elitism=4)
    with pytest.raises(ValueError):
        ObjectiveSpec(10.0, gain_tolerance=0.0)


def test_seeded_zero_fitness_design_returned(free_scene):
    d = free_scene.template_design()
    target = evaluate_design(d, ObjectiveSpec(0.0), free_scene).directivity_db
    r = evolve(GAConfig(population=6, generations=5, seed=1), ObjectiveSpec(target), free_scene,
               initial=[d])
    assert r.best == d and r.best_fitness == 0.0 and len(r.trace) == 1


def test_trace_non_increasing_and_deterministic(concrete_scene):
    cfg = GAConfig(population=10, generations=6, seed=4)
    a = evolve(cfg, ObjectiveSpec(16.0), concrete_scene)
    b = evolve(cfg, ObjectiveSpec(16.0), concrete_scene)
    assert a == b
    best = [g.best_fitness for g in a.trace]
    assert all(y <= x for x, y in zip(best, best[1:]))
    assert concrete_scene.is_admissible(a.best)


def test_parallel_evaluation_matches_serial(concrete_scene):
    cfg = GAConfig(population=8, generations=3, seed=9)
    serial = evolve(cfg, ObjectiveSpec(16.0), concrete_scene)
    threaded = evolve(GAConfig(population=8, generations=3, seed=9, workers=4),
                      ObjectiveSpec(16.0), concrete_scene)
    assert serial == threaded


def test_infeasible_initial_population(free_scene):
    bad = DesignScene(sc.three_element(), GRID, GRID,
                      length_bounds=(0.8 * LAM, 0.9 * LAM))
    with pytest.raises(ConfigError):
        evolve(GAConfig(population=4, generations=2), ObjectiveSpec(8.0), bad)


def test_ga_matches_small_grid_search():
    scene = DesignScene(sc.three_element(sc.CONCRETE), GRID, GRID, optimize_lengths=False)
    spec = ObjectiveSpec(16.0)
    _, f_grid = grid_search(spec, scene, 6)
    r = evolve(GAConfig(population=12, generations=10, seed=2, grid_points=6), spec, scene)
    assert r.best_fitness <= f_grid + 1e-9


def test_compare_designs(concrete_scene):
    d = concrete_scene.template_design()
    rep = compare_designs(d, d, concrete_scene)
    assert rep["a"] == rep["b"]
    assert rep["lone_driven"].relative_gain_db == 0.0
    assert rep["a"].relative_gain_db > 0
