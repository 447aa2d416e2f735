"""Sector-exact simulation and analysis of Floquet XXZ rings of fSim gates."""

from .engine import (
    CircuitSpec,
    FsimParams,
    NoiseModel,
    SectorState,
    apply_fsim,
    apply_noise,
    floquet_cycle,
    fsim_matrix,
    sample_bitstrings,
    with_flux,
)
from .kernels import ACTIVE_KERNEL
from .sectors import SectorBasis, classify, center_of_mass, enumerate_basis
from .theory import DispersionParams, dispersion_params, quasi_energy, rapidity

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_KERNEL",
    "CircuitSpec",
    "DispersionParams",
    "FsimParams",
    "NoiseModel",
    "SectorBasis",
    "SectorState",
    "apply_fsim",
    "apply_noise",
    "center_of_mass",
    "classify",
    "dispersion_params",
    "enumerate_basis",
    "floquet_cycle",
    "fsim_matrix",
    "quasi_energy",
    "rapidity",
    "sample_bitstrings",
    "with_flux",
    "__version__",
]
