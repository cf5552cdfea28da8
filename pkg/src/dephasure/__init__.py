"""Pulse-controlled concurrence dynamics for a Bell pair in a dephasing boson bath."""

from dephasure.dephasing import (ConcurrenceSeries, ModelParams, alpha_derived,
                                 alpha_verbatim, concurrence_common,
                                 concurrence_individual, gamma_common,
                                 gamma_free_closed_form, gamma_individual, simulate)
from dephasure.entanglement import concurrence, spin_flip
from dephasure.schedule import PulseSchedule, pulses_applied, uniform
from dephasure.spectral import (DiscreteSpectrum, GaussianSpectrum, density,
                                discretize, overlap)

__version__ = "0.1.0"
