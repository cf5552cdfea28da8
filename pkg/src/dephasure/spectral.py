"""
Bath coupling functions and their discrete-mode approximations.

Everything here works in scaled units: frequencies in units of the peak
frequency ``omega_p`` and times in units of ``1/omega_p``. The Gaussian
coupling function is

.. math::

    h(\\omega) = \\frac{s}{\\sqrt{\\pi}\\,\\gamma_p}
                 \\exp\\left(-\\frac{(\\omega - \\omega_p)^2}{\\gamma_p^2}\\right)

so that its integral over the real line is ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import erf

__all__ = [
    "GaussianSpectrum",
    "DiscreteSpectrum",
    "density",
    "discretize",
    "overlap",
    "truncated_integral",
]


@dataclass(frozen=True)
class GaussianSpectrum:
    """Gaussian coupling function with total weight ``s``.

    Parameters
    ----------
    s : float
        Total weight, the mean number of bosons a spin interacts with.
    omega_p : float
        Peak frequency.
    gamma_p : float
        Width (the Gaussian falls by ``1/e`` at ``omega_p +- gamma_p``).
    """

    s: float = 5.0
    omega_p: float = 1.0
    gamma_p: float = 0.1

    def __post_init__(self):
        for name in ("s", "omega_p", "gamma_p"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True, eq=False)
class DiscreteSpectrum:
    """Finite set of bath modes ``(omega_k, |h_k|^2)``.

    ``clipped_weight`` records spectral mass discarded below ``omega = 0``
    when the parent grid was clipped; it is reported, never redistributed.
    """

    omega: np.ndarray
    weight: np.ndarray
    clipped_weight: float = 0.0
    source: GaussianSpectrum | None = field(default=None, compare=False)

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float).reshape(-1)
        weight = np.array(self.weight, dtype=float).reshape(-1)
        if omega.shape != weight.shape:
            raise ValueError("omega and weight must have the same length")
        if omega.size == 0:
            raise ValueError("a discrete spectrum needs at least one mode")
        if np.any(omega <= 0):
            raise ValueError("mode frequencies must be positive")
        if np.any(np.diff(omega) <= 0):
            raise ValueError("mode frequencies must be strictly increasing")
        if np.any(weight < 0):
            raise ValueError("mode weights must be non-negative")
        omega.setflags(write=False)
        weight.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "weight", weight)

    def __len__(self):
        return self.omega.size

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weight))

    def scaled(self, total: float) -> "DiscreteSpectrum":
        """Same mode frequencies, weights rescaled to sum to ``total``."""
        factor = total / self.total_weight
        return DiscreteSpectrum(self.omega, self.weight * factor,
                                self.clipped_weight * factor, self.source)


def density(spec: GaussianSpectrum, omega):
    """Coupling function value(s) at angular frequency ``omega``."""
    omega = np.asarray(omega, dtype=float)
    x = (omega - spec.omega_p) / spec.gamma_p
    return spec.s / (np.sqrt(np.pi) * spec.gamma_p) * np.exp(-x * x)


def truncated_integral(spec: GaussianSpectrum, lo: float, hi: float) -> float:
    """Closed-form integral of the coupling function over ``[lo, hi]``."""
    a = (lo - spec.omega_p) / spec.gamma_p
    b = (hi - spec.omega_p) / spec.gamma_p
    return 0.5 * spec.s * float(erf(b) - erf(a))


@lru_cache(maxsize=64)
def discretize(spec: GaussianSpectrum, n_modes: int = 2001,
               cutoff_widths: float = 6.0) -> DiscreteSpectrum:
    """Midpoint-rule discretization of the coupling function.

    The support ``[omega_p - c*gamma_p, omega_p + c*gamma_p]`` is cut into
    ``n_modes`` equal cells; each mode sits at a cell midpoint and carries
    ``density(midpoint) * cell_width``. Grids reaching below zero are
    clipped at ``omega = 0`` and the discarded mass is stored in
    ``clipped_weight``.
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    if not cutoff_widths > 0:
        raise ValueError(f"cutoff_widths must be positive, got {cutoff_widths!r}")
    n_modes = int(n_modes)
    lo = spec.omega_p - cutoff_widths * spec.gamma_p
    hi = spec.omega_p + cutoff_widths * spec.gamma_p
    clipped = 0.0
    if lo <= 0.0:
        clipped = truncated_integral(spec, -np.inf, 0.0)
        lo = 0.0
    if hi <= lo:
        raise ValueError("frequency grid is empty after clipping at omega = 0")
    edges = np.linspace(lo, hi, n_modes + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    width = (hi - lo) / n_modes
    return DiscreteSpectrum(mid, density(spec, mid) * width, clipped, spec)


def overlap(spec: GaussianSpectrum, t):
    """Fourier transform ``int h(w) exp(i w t) dw`` in closed form."""
    t = np.asarray(t, dtype=float)
    return (spec.s * np.exp(1j * spec.omega_p * t)
            * np.exp(-0.25 * (spec.gamma_p * t) ** 2))
