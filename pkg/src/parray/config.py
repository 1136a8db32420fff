"""Strict scenario configuration (YAML or JSON).

Every numeric key names its unit (``_m``, ``_wl``, ``_hz``, ``_deg``).
Lengths may be given in metres or wavelengths, but exactly one of the two.
Unknown keys are rejected, and every error names the offending field.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .array_solver import ArrayGeometry, GroundModel
from .em_core import C0, Role, WireElement
from .errors import ConfigError, ParrayError
from .ga_optimizer import DesignScene, GAConfig, ObjectiveSpec
from .uncertainty import PerturbationSpec

SCHEMA_VERSION = 1


class _Block:
    """Cursor over one mapping that records which keys were consumed."""

    def __init__(self, data, path):
        if not isinstance(data, dict):
            raise ConfigError(f"{path or 'config'}: expected a mapping")
        self.data, self.path, self.seen = data, path, set()

    def _p(self, key):
        return f"{self.path}.{key}" if self.path else key

    def has(self, key):
        return key in self.data

    def raw(self, key, default=...):
        self.seen.add(key)
        if key not in self.data:
            if default is ...:
                raise ConfigError(f"{self._p(key)}: required field missing")
            return default
        return self.data[key]

    def number(self, key, default=..., *, positive=False, nonneg=False):
        v = self.raw(key, default)
        if v is None and default is None:
            return None
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"{self._p(key)}: expected a finite number, got {v!r}")
        if positive and not v > 0:
            raise ConfigError(f"{self._p(key)}: must be positive, got {v}")
        if nonneg and v < 0:
            raise ConfigError(f"{self._p(key)}: must be non-negative, got {v}")
        return float(v)

    def integer(self, key, default=..., *, minimum=None):
        v = self.raw(key, default)
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"{self._p(key)}: expected an integer, got {v!r}")
        if minimum is not None and v < minimum:
            raise ConfigError(f"{self._p(key)}: must be >= {minimum}, got {v}")
        return v

    def boolean(self, key, default=...):
        v = self.raw(key, default)
        if not isinstance(v, bool):
            raise ConfigError(f"{self._p(key)}: expected true or false, got {v!r}")
        return v

    def numbers(self, key, default=..., *, length=None):
        v = self.raw(key, default)
        if not isinstance(v, list) or (length is not None and len(v) != length):
            want = f"a list of {length} numbers" if length else "a list of numbers"
            raise ConfigError(f"{self._p(key)}: expected {want}, got {v!r}")
        for i, x in enumerate(v):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise ConfigError(f"{self._p(key)}[{i}]: expected a finite number, got {x!r}")
        return tuple(float(x) for x in v)

    def block(self, key, default=...):
        v = self.raw(key, default)
        if v is None:
            return None
        return _Block(v, self._p(key))

    def scaled(self, stem, wavelength, default=..., **checks):
        """``stem_m`` or ``stem_wl`` (converted to metres); never both."""
        km, kw = f"{stem}_m", f"{stem}_wl"
        if self.has(km) and self.has(kw):
            raise ConfigError(f"{self._p(stem)}: give either {km} or {kw}, not both")
        if self.has(kw):
            return self.number(kw, **checks) * wavelength
        if self.has(km) or default is ...:
            return self.number(km, **checks)
        return default

    def scaled_vector(self, stem, wavelength, default=...):
        km, kw = f"{stem}_m", f"{stem}_wl"
        if self.has(km) and self.has(kw):
            raise ConfigError(f"{self._p(stem)}: give either {km} or {kw}, not both")
        if self.has(kw):
            return tuple(v * wavelength for v in self.numbers(kw, length=3))
        if self.has(km) or default is ...:
            return self.numbers(km, length=3)
        return default

    def done(self):
        extra = sorted(set(self.data) - self.seen)
        if extra:
            raise ConfigError(f"{self._p(extra[0])}: unknown key")


@dataclass(frozen=True)
class MonteCarloBlock:
    spec: PerturbationSpec
    intended_beam: tuple[float, float] | None
    position_bin_edges_m: tuple[float, ...]
    spread_bin_edges_deg: tuple[float, ...]


@dataclass(frozen=True)
class OptimizeBlock:
    ga: GAConfig
    objective: ObjectiveSpec
    scene: DesignScene


@dataclass(frozen=True)
class ScenarioConfig:
    geometry: ArrayGeometry
    grid_deg: float = 1.0
    montecarlo: MonteCarloBlock | None = None
    groundsweep: tuple[tuple[float, ...], tuple[float, ...], tuple[float, float]] | None = None
    optimize: OptimizeBlock | None = None
    source: dict = field(default_factory=dict, repr=False, compare=False)


def _ground(b: _Block | None) -> GroundModel:
    if b is None:
        return GroundModel.free_space()
    kind = b.raw("kind", "free_space")
    if kind == "free_space":
        g = GroundModel.free_space()
    elif kind == "homogeneous":
        g = GroundModel.homogeneous(b.number("epsilon_r"), b.number("sigma_s_per_m", 0.0, nonneg=True))
        if g.epsilon_r < 1:
            raise ConfigError(f"{b._p('epsilon_r')}: must be >= 1")
    else:
        raise ConfigError(f"{b._p('kind')}: expected 'free_space' or 'homogeneous', got {kind!r}")
    b.done()
    return g


def _element(b: _Block, lam: float) -> WireElement:
    role = b.raw("role", "parasitic")
    try:
        role = Role(role) if not isinstance(role, Role) else role
    except ValueError:
        raise ConfigError(f"{b._p('role')}: expected 'driven' or 'parasitic', got {role!r}") from None
    pos = b.scaled_vector("position", lam)
    length = b.scaled("length", lam, positive=True)
    radius = b.scaled("radius", lam, positive=True)
    tilt = b.numbers("tilt_deg", [0.0, 0.0], length=2)
    b.done()
    try:
        return WireElement(pos, length, radius, tuple(tilt), role)
    except (ParrayError, ValueError) as exc:
        raise ConfigError(f"{b.path}: {exc}") from None


def _geometry(root: _Block) -> ArrayGeometry:
    freq = root.number("frequency_hz", positive=True)
    lam = C0 / freq
    ground = _ground(root.block("ground", None))
    height = root.scaled("feed_height", lam, 0.0, nonneg=True)
    els = root.raw("elements")
    if not isinstance(els, list) or not els:
        raise ConfigError("elements: expected a non-empty list")
    elements = tuple(_element(_Block(e, f"elements[{i}]"), lam) for i, e in enumerate(els))
    try:
        return ArrayGeometry(elements, lam, freq, ground, height)
    except (ParrayError, ValueError) as exc:
        raise ConfigError(f"elements: {exc}") from None


def _montecarlo(b: _Block, geom: ArrayGeometry) -> MonteCarloBlock:
    n = len(geom.elements)
    targets = b.raw("target_elements")
    if not isinstance(targets, list) or not all(isinstance(i, int) and not isinstance(i, bool)
                                                for i in targets):
        raise ConfigError(f"{b._p('target_elements')}: expected a list of element indices")
    bad = [i for i in targets if not 0 <= i < n]
    if bad:
        raise ConfigError(f"{b._p('target_elements')}: indices {bad} out of range for {n} elements")
    spec = PerturbationSpec(
        position_error_max=b.number("position_error_max_m", 0.0, nonneg=True),
        orientation_error_max=b.number("orientation_error_max_deg", 0.0, nonneg=True),
        target_elements=tuple(targets),
        trials=b.integer("trials", minimum=1),
        seed=b.integer("seed", 0, minimum=0),
        allow_out_of_range=b.boolean("allow_out_of_range", False),
    )
    try:
        spec.validate(geom)
    except ValueError as exc:
        raise ConfigError(f"{b.path}: {exc}") from None
    beam = b.numbers("intended_beam_deg", None, length=2) if b.has("intended_beam_deg") else None
    pos_edges = b.numbers("position_bin_edges_m", [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.2])
    spread_edges = b.numbers("spread_bin_edges_deg", [0.0, 2.0, 4.0, 6.0, 8.0, 10.0])
    b.done()
    return MonteCarloBlock(spec, beam, pos_edges, spread_edges)


def _groundsweep(b: _Block):
    eps = b.numbers("epsilon_r")
    sig = b.numbers("sigma_s_per_m")
    beam = b.numbers("intended_beam_deg", [90.0, 0.0], length=2)
    b.done()
    if not eps or not sig:
        raise ConfigError(f"{b.path}: epsilon_r and sigma_s_per_m must be non-empty")
    if any(v < 1 for v in eps):
        raise ConfigError(f"{b._p('epsilon_r')}: values must be >= 1")
    if any(v < 0 for v in sig):
        raise ConfigError(f"{b._p('sigma_s_per_m')}: values must be >= 0")
    return eps, sig, beam


def _optimize(b: _Block, geom: ArrayGeometry, grid_deg: float) -> OptimizeBlock:
    g = b.block("ga", {})
    try:
        ga = GAConfig(
            population=g.integer("population", 40, minimum=2),
            generations=g.integer("generations", 60, minimum=1),
            crossover_rate=g.number("crossover_rate", 0.9),
            mutation_rate=g.number("mutation_rate", 0.15),
            mutation_scale=g.number("mutation_scale", 0.1, nonneg=True),
            elitism=g.integer("elitism", 2, minimum=0),
            seed=g.integer("seed", 0, minimum=0),
            grid_points=g.integer("grid_points", None, minimum=2) if g.has("grid_points") else None,
        )
    except ValueError as exc:
        raise ConfigError(f"{g.path}: {exc}") from None
    g.done()
    o = b.block("objective")
    try:
        objective = ObjectiveSpec(
            desired_gain_db=o.number("desired_gain_db"),
            gain_tolerance=o.number("gain_tolerance_db", 0.5),
            azimuth_target=o.number("azimuth_target_deg", 0.0),
            azimuth_tolerance=o.number("azimuth_tolerance_deg", 2.0),
            elevation_target=o.number("elevation_target_deg", 90.0),
            elevation_tolerance=o.number("elevation_tolerance_deg", 2.0),
            azimuth_weight=o.number("azimuth_weight", 0.5),
            elevation_weight=o.number("elevation_weight", 0.5),
        )
    except ValueError as exc:
        raise ConfigError(f"{o.path}: {exc}") from None
    o.done()
    optimize_lengths = b.boolean("optimize_lengths", True)
    b.done()
    try:
        scene = DesignScene(geom, grid_deg, grid_deg, optimize_lengths)
    except (ParrayError, ValueError) as exc:
        raise ConfigError(f"{b.path}: {exc}") from None
    if not scene.is_admissible(scene.template_design()):
        raise ConfigError(f"{b.path}: the starting geometry lies outside the search bounds")
    return OptimizeBlock(ga, objective, scene)


def parse_config(data) -> ScenarioConfig:
    root = _Block(data, "")
    version = root.integer("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: unsupported version {version}")
    geom = _geometry(root)
    grid = root.number("grid_deg", 1.0, positive=True)
    mc = root.block("montecarlo", None)
    gs = root.block("groundsweep", None)
    op = root.block("optimize", None)
    root.done()
    return ScenarioConfig(
        geometry=geom,
        grid_deg=grid,
        montecarlo=_montecarlo(mc, geom) if mc else None,
        groundsweep=_groundsweep(gs) if gs else None,
        optimize=_optimize(op, geom, grid) if op else None,
        source=data,
    )


def load_config(path) -> ScenarioConfig:
    """Read and validate a YAML/JSON scenario file.

    ``OSError`` propagates for unreadable files; anything malformed raises
    ``ConfigError``.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text) if str(path).endswith(".json") else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"{path}: cannot parse: {exc}") from None
    return parse_config(data)


def geometry_to_config(geom: ArrayGeometry, grid_deg: float = 1.0) -> dict:
    """Inverse of the geometry part of ``parse_config`` (metre units)."""
    ground = {"kind": "free_space"} if geom.ground.is_free_space else {
        "kind": "homogeneous", "epsilon_r": geom.ground.epsilon_r,
        "sigma_s_per_m": geom.ground.sigma}
    return {
        "schema_version": SCHEMA_VERSION,
        "frequency_hz": geom.frequency,
        "ground": ground,
        "feed_height_m": geom.element_height_above_ground,
        "grid_deg": grid_deg,
        "elements": [{
            "role": e.role.value,
            "position_m": list(e.position),
            "length_m": e.length,
            "radius_m": e.radius,
            "tilt_deg": list(e.tilt),
        } for e in geom.elements],
    }
