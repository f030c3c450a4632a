"""Emptiness formation probability of the XY chain with a local impurity,
in the nonequilibrium steady state reached from two thermal reservoirs.

The package computes the reduced correlation matrix ``Theta_n`` of the
steady state, its determinant ``P(n)``, the Toeplitz plus Hankel structure
of ``Theta_n``, the Szego decay rates, and a finite-volume dynamics oracle
that reproduces ``P(n)`` by exact time evolution.
"""

from .correlation import (AssemblyError, ReducedCorrelation, assemble_theta,
                          assemble_theta_structured, efp, efp_sequence)
from .model import ChainParams, ScalarSymbol, ness_density, toeplitz_symbol
from .oracle import FiniteVolumeSpec, LightConeError, efp_time_average
from .pfaffian import LogScaled, logdet
from .quadrature import QuadratureError, QuadSpec
from .spectral import BoundState, bound_state
from .szego import DecayRates, asymptotic_profile, decay_rates, geometric_mean

__version__ = "0.1.0"

__all__ = [
    "AssemblyError", "BoundState", "ChainParams", "DecayRates", "FiniteVolumeSpec",
    "LightConeError", "LogScaled", "QuadSpec", "QuadratureError", "ReducedCorrelation",
    "ScalarSymbol", "assemble_theta", "assemble_theta_structured", "asymptotic_profile",
    "bound_state", "decay_rates", "efp", "efp_sequence", "efp_time_average",
    "geometric_mean", "logdet", "ness_density", "toeplitz_symbol",
]
