"""Gauge choice for truncated multimode cavity QED models.

Energies returned as ``excitations`` are in units of the bare atomic
transition Delta; absolute energies use hbar = m = q = 1.

>>> import optgauge
>>> round(optgauge.atom_levels()["anharmonicity"], 2)
26.85
"""

import json
import os

from . import _core
from ._core import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    Error,
    NormError,
    atom_levels,
    bogoliubov,
    entanglement_entropy,
    exact_excitations,
    figure_names,
    ground_state_fidelity,
    lowest_eigenvalues,
    resolve_system,
    schmidt_weights,
    spectral_deviation,
    truncated_excitations,
)

__version__ = _core.__version__

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DimensionError",
    "Error",
    "NormError",
    "atom_levels",
    "bogoliubov",
    "canonical_config",
    "config_hash",
    "entanglement_entropy",
    "exact",
    "exact_excitations",
    "figure_names",
    "ground_state_fidelity",
    "lowest_eigenvalues",
    "reproduce",
    "resolve_system",
    "schmidt_weights",
    "spectral_deviation",
    "sweep",
    "truncated_excitations",
]


def _config_text(config):
    """Accepts a dict, a JSON string or a path to a JSON file."""
    if isinstance(config, dict):
        return json.dumps(config)
    if isinstance(config, os.PathLike) or (
        isinstance(config, str) and not config.lstrip().startswith("{")
    ):
        with open(config, encoding="utf-8") as f:
            return f.read()
    return config


def canonical_config(config):
    """Validated config with all defaults filled in."""
    return json.loads(_core.canonical_config(_config_text(config)))


def config_hash(config):
    return _core.config_hash(_config_text(config))


def exact(config, gauge=None, cache=True, cache_dir=""):
    """Converged exact spectrum at ``gauge`` (default: the config's gauge)."""
    return _core.exact(_config_text(config), gauge, cache, cache_dir)


def sweep(config, jobs=1, cache=True, cache_dir=""):
    """Runs the configured gauge sweep; arrays are flat over the grid points."""
    return _core.sweep(_config_text(config), jobs, cache, cache_dir)


def reproduce(figure, out_dir, jobs=1, tol=None, cache=True, cache_dir=""):
    """Writes the data files for one figure preset; returns their paths."""
    return [str(p) for p in _core.reproduce(figure, out_dir, jobs, tol, cache, cache_dir)]
