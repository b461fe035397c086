"""Optical Bloch equations for N-level systems.

Configs are plain dicts in the same JSON schema the command-line tool reads.
"""

import json

from . import _core
from ._core import (
    CodegenError,
    ConfigError,
    SolverError,
    UnboundHandleError,
    ValidationError,
    equation_count,
    mhz_to_rad,
    rad_to_mhz,
    two_level_steady_state,
)

PRESETS = ("two_level", "lambda", "twelve_sigma_plus", "twelve_pi")


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def preset(name):
    return json.loads(_core.preset_config(name))


def validate(config):
    return _core.validate(_text(config))


def equations(config, format="plain"):
    return _core.equations(_text(config), format)


def evolve(config):
    """Returns (times in s, states); columns follow the real state layout."""
    return _core.evolve(_text(config))


def sweep(config, workers=0):
    """Returns (detunings in MHz, final states)."""
    return _core.sweep(_text(config), workers)


def codegen(config, mode="temporal"):
    return _core.codegen(_text(config), mode)


def request(payload):
    return json.loads(_core.handle_request(json.dumps(payload)))


def pair_slot(n_levels, i, j):
    """Index of Re sigma_ij (i < j) in a state row; Im follows it."""
    a = i - 1
    return n_levels + 2 * (a * n_levels - a * (a + 1) // 2 + (j - i - 1))


__all__ = [
    "PRESETS", "CodegenError", "ConfigError", "SolverError", "UnboundHandleError", "ValidationError",
    "codegen", "equation_count", "equations", "evolve", "mhz_to_rad", "pair_slot", "preset",
    "rad_to_mhz", "request", "sweep", "two_level_steady_state", "validate",
]
