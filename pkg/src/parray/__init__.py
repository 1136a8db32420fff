"""Thin-wire simulation and design of ground-based parasitic antenna arrays."""
from .array_solver import (ArrayGeometry, CurrentSolution, GroundModel, RadiationPattern,
                           assemble_impedance_matrix, far_field, solve_currents,
                           two_element_gain_closed_form)
from .em_core import ComplexImpedance, Role, WireElement, mutual_impedance, self_impedance
from .errors import (AccuracyError, ConfigError, ContractError, DomainError, GeometryError,
                     ModelValidityError, NumericalError, ParrayError)
from .metrics import (beam_direction, beamwidth_az, directivity, pattern_metrics,
                      relative_gain, side_lobe_level)

__version__ = "0.1.0"

__all__ = [
    'ArrayGeometry', 'CurrentSolution', 'GroundModel', 'RadiationPattern',
    'assemble_impedance_matrix', 'far_field', 'solve_currents',
    'two_element_gain_closed_form', 'ComplexImpedance', 'Role', 'WireElement',
    'mutual_impedance', 'self_impedance', 'AccuracyError', 'ConfigError',
    'ContractError', 'DomainError', 'GeometryError', 'ModelValidityError',
    'NumericalError', 'ParrayError', 'beam_direction', 'beamwidth_az', 'directivity',
    'pattern_metrics', 'relative_gain', 'side_lobe_level',
]
