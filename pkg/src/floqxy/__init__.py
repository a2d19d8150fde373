"""Stroboscopic free-fermion simulator and FSS toolkit for the driven XY/Ising chain."""

from .model import ModelParams, ModeState, dispersion, ground_energy, ground_state, mode_grid

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "ModeState",
    "mode_grid",
    "dispersion",
    "ground_state",
    "ground_energy",
    "__version__",
]
