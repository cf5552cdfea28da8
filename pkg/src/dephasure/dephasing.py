"""
Pulse-modulated dephasing of a Bell pair and the resulting concurrence.

A mode of frequency ``w`` with weight ``|h_k|^2`` contributes
``|h_k|^2 |a(w, t)|^2`` to the decoherence exponent, where ``a`` is the
per-unit-coupling amplitude accumulated by the toggled coupling: each
pi pulse flips the sign of both ``S_z`` operators. For pulse instants
``t_1 < ... < t_N <= t`` and ``t_0 = 0``,

.. math::

    a(w, t) = \\sum_{j=0}^{N-1} (-1)^j (e^{i w t_{j+1}} - e^{i w t_j})
              + (-1)^N (e^{i w t} - e^{i w t_N}).

The common bath exponent is ``2 * sum_k |h_k|^2 |a|^2``; for two individual
baths each spin contributes half of its own mode sum. Concurrence is
``prefactor * exp(-Gamma)``.

The closed-form ``"verbatim"`` bracket (uniform trains only) is available
for comparison; it differs from the form above between pulses and jumps at
the second and later pulse instants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from dephasure.schedule import PulseSchedule
from dephasure.spectral import (DiscreteSpectrum, GaussianSpectrum, density,
                                discretize)

__all__ = [
    "ModelParams",
    "ConcurrenceSeries",
    "alpha_derived",
    "alpha_verbatim",
    "mode_sum",
    "gamma_common",
    "gamma_individual",
    "gamma",
    "concurrence_common",
    "concurrence_individual",
    "simulate",
    "gamma_free_closed_form",
    "PREFACTORS",
    "UNDERFLOW",
]

PREFACTORS = {"paper": 0.5, "physical": 1.0}
FORMS = ("derived", "verbatim")
BATH_KINDS = ("common", "individual")
# concurrence values below this are reported as exactly 0
UNDERFLOW = 1e-300


@dataclass(frozen=True)
class ModelParams:
    """Bath configuration and output conventions.

    ``spectra`` holds one entry for a common bath and two for individual
    baths. Entries may be :class:`GaussianSpectrum` (discretized with
    ``n_modes`` and ``cutoff_widths``) or an explicit
    :class:`DiscreteSpectrum`. ``omega_0`` is carried for bookkeeping; the
    qubit splitting commutes with the dephasing coupling and never enters
    the concurrence.
    """

    spectra: tuple = (GaussianSpectrum(),)
    bath_kind: str = "common"
    omega_0: float = 1.0
    prefactor_mode: str = "paper"
    form: str = "derived"
    n_modes: int = 2001
    cutoff_widths: float = 6.0

    def __post_init__(self):
        spectra = self.spectra
        if isinstance(spectra, (GaussianSpectrum, DiscreteSpectrum)):
            spectra = (spectra,)
        spectra = tuple(spectra)
        object.__setattr__(self, "spectra", spectra)
        if self.bath_kind not in BATH_KINDS:
            raise ValueError(f"bath_kind must be one of {BATH_KINDS}, got {self.bath_kind!r}")
        expected = 1 if self.bath_kind == "common" else 2
        if len(spectra) != expected:
            raise ValueError(f"{self.bath_kind} bath needs exactly {expected} spectra, "
                             f"got {len(spectra)}")
        if self.prefactor_mode not in PREFACTORS:
            raise ValueError(f"prefactor_mode must be one of {tuple(PREFACTORS)}")
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}, got {self.form!r}")

    @classmethod
    def common(cls, spectrum=None, **kwargs) -> "ModelParams":
        return cls((spectrum or GaussianSpectrum(),), "common", **kwargs)

    @classmethod
    def individual(cls, spectrum=None, second=None, **kwargs) -> "ModelParams":
        first = spectrum or GaussianSpectrum()
        return cls((first, second or first), "individual", **kwargs)

    @property
    def prefactor(self) -> float:
        return PREFACTORS[self.prefactor_mode]

    def modes(self) -> tuple[DiscreteSpectrum, ...]:
        out = []
        for spec in self.spectra:
            if isinstance(spec, DiscreteSpectrum):
                out.append(spec)
            else:
                out.append(discretize(spec, self.n_modes, self.cutoff_widths))
        return tuple(out)


@dataclass(frozen=True, eq=False)
class ConcurrenceSeries:
    """Sampled concurrence ``prefactor * exp(-gamma)`` on a time grid."""

    t_grid: np.ndarray
    gamma: np.ndarray
    concurrence: np.ndarray
    prefactor: float

    @classmethod
    def from_gamma(cls, t_grid, gamma, prefactor: float) -> "ConcurrenceSeries":
        t_grid = np.asarray(t_grid, dtype=float)
        gamma = np.asarray(gamma, dtype=float)
        conc = prefactor * np.exp(-gamma)
        conc[conc < UNDERFLOW] = 0.0
        return cls(t_grid, gamma, conc, prefactor)

    def __len__(self):
        return self.t_grid.size

    def at(self, t: float) -> float:
        """Concurrence at the grid point nearest ``t``."""
        return float(self.concurrence[np.argmin(np.abs(self.t_grid - t))])


def _segment(omega, a, b):
    # e^{iwb} - e^{iwa} without cancellation for short segments
    return 2j * np.sin(0.5 * omega * (b - a)) * np.exp(0.5j * omega * (a + b))


def alpha_derived(omega, t: float, sched: PulseSchedule):
    """Toggled-coupling amplitude ``a(omega, t)`` (vectorised over ``omega``)."""
    omega = np.asarray(omega, dtype=float)
    if t < 0:
        raise ValueError("t must be non-negative")
    edges = np.concatenate([[0.0], sched.until(t), [t]])
    out = np.zeros(np.broadcast(omega).shape, dtype=complex)
    for j in range(edges.size - 1):
        term = _segment(omega, edges[j], edges[j + 1])
        out = out + term if j % 2 == 0 else out - term
    return out


def alpha_verbatim(omega, t: float, tau_s: float, n_pulses: int):
    """Literal closed-form bracket for a uniform train of ``n_pulses``.

    ``exp(-iw u) [(1 - exp(iw u)) + sum_m (-1)^m exp(-i m w tau) (1 - exp(-iw tau))]``
    with ``u = t - n_pulses * tau_s``.
    """
    omega = np.asarray(omega, dtype=float)
    u = t - n_pulses * tau_s
    if u < -1e-12 * max(1.0, abs(t)):
        raise ValueError("alpha_verbatim needs t >= n_pulses * tau_s")
    u = max(u, 0.0)
    m = np.arange(1, n_pulses + 1)
    signs = np.where(m % 2 == 0, 1.0, -1.0)
    phases = np.exp(-1j * np.multiply.outer(omega, m) * tau_s)
    train = phases @ signs if n_pulses else np.zeros_like(omega, dtype=complex)
    bracket = (-_segment(omega, 0.0, u)
               + train * -_segment(omega, 0.0, -tau_s))
    return np.exp(-1j * omega * u) * bracket


def _sorted_times(t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise ValueError("times must be non-negative")
    return t, np.argsort(t, kind="stable")


def _sum_derived(modes: DiscreteSpectrum, sched, t):
    t, order = _sorted_times(t)
    omega, weight = modes.omega, modes.weight
    out = np.empty(t.size)
    closed = np.zeros(omega.size, dtype=complex)  # completed segments
    n_done = 0
    last = 0.0
    for i in order:
        ti = t[i]
        n = sched.pulses_applied(ti)
        while n_done < n:
            edge = sched.times[n_done]
            seg = _segment(omega, last, edge)
            closed = closed + seg if n_done % 2 == 0 else closed - seg
            last = edge
            n_done += 1
        tail = _segment(omega, last, ti)
        a = closed + tail if n_done % 2 == 0 else closed - tail
        out[i] = np.dot(weight, a.real ** 2 + a.imag ** 2)
    return out


def _sum_verbatim(modes: DiscreteSpectrum, sched, t):
    if not sched.is_uniform and len(sched):
        raise ValueError("the verbatim amplitude is defined for uniform trains only")
    tau = sched.uniform_interval or 0.0
    t, order = _sorted_times(t)
    omega, weight = modes.omega, modes.weight
    out = np.empty(t.size)
    train = np.zeros(omega.size, dtype=complex)
    flip = -_segment(omega, 0.0, -tau)  # 1 - e^{-iw tau}
    n_done = 0
    for i in order:
        n = sched.pulses_applied(t[i])
        while n_done < n:
            n_done += 1
            sign = 1.0 if n_done % 2 == 0 else -1.0
            train = train + sign * np.exp(-1j * omega * n_done * tau)
        u = max(t[i] - n_done * tau, 0.0)
        a = -_segment(omega, 0.0, u) + train * flip
        # the leading e^{-iwu} phase drops out of |a|^2
        out[i] = np.dot(weight, a.real ** 2 + a.imag ** 2)
    return out


def _sum_quad(spec: GaussianSpectrum, sched, t, cutoff_widths, form):
    t, _ = _sorted_times(t)
    lo = max(spec.omega_p - cutoff_widths * spec.gamma_p, 0.0)
    hi = spec.omega_p + cutoff_widths * spec.gamma_p
    out = np.empty(t.size)
    for i, ti in enumerate(t):
        if form == "derived":
            amp = lambda w: alpha_derived(w, ti, sched)
        else:
            n = sched.pulses_applied(ti)
            amp = lambda w: alpha_verbatim(w, ti, sched.uniform_interval or 0.0, n)
        f = lambda w: float(density(spec, w) * abs(amp(w)) ** 2)
        val, _ = integrate.quad(f, lo, hi, limit=2000, epsabs=0.0, epsrel=1e-12,
                                points=[spec.omega_p])
        out[i] = val
    return out


def mode_sum(spectrum, sched: PulseSchedule, t, form: str = "derived",
             method: str = "discrete", n_modes: int = 2001,
             cutoff_widths: float = 6.0):
    """``sum_k |h_k|^2 |a(omega_k, t)|^2`` for each time in ``t``.

    Parameters
    ----------
    spectrum : GaussianSpectrum or DiscreteSpectrum
    sched : PulseSchedule
    t : float or array
        Non-negative scaled times, any order.
    form : {"derived", "verbatim"}
    method : {"discrete", "quad"}
        ``"quad"`` integrates the continuous Gaussian adaptively; it is
        slow and meant as a cross-check.
    """
    scalar = np.ndim(t) == 0
    if method == "quad":
        if not isinstance(spectrum, GaussianSpectrum):
            raise ValueError("adaptive quadrature needs a GaussianSpectrum")
        if form == "verbatim" and not sched.is_uniform and len(sched):
            raise ValueError("the verbatim amplitude is defined for uniform trains only")
        out = _sum_quad(spectrum, sched, t, cutoff_widths, form)
    elif method == "discrete":
        if isinstance(spectrum, GaussianSpectrum):
            spectrum = discretize(spectrum, n_modes, cutoff_widths)
        if form == "derived":
            out = _sum_derived(spectrum, sched, t)
        elif form == "verbatim":
            out = _sum_verbatim(spectrum, sched, t)
        else:
            raise ValueError(f"unknown amplitude form {form!r}")
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out[0]) if scalar else out


def _sums(params: ModelParams, sched, t, method):
    specs = params.spectra if method == "quad" else params.modes()
    return [mode_sum(spec, sched, t, params.form, method,
                     params.n_modes, params.cutoff_widths) for spec in specs]


def gamma_common(params: ModelParams, sched: PulseSchedule, t,
                 method: str = "discrete"):
    """Common-bath exponent ``2 * sum_k |h_k|^2 |a_k(t)|^2``."""
    if params.bath_kind != "common":
        raise ValueError("gamma_common needs a common-bath ModelParams")
    (total,) = _sums(params, sched, t, method)
    return 2.0 * total


def gamma_individual(params: ModelParams, sched: PulseSchedule, t,
                     method: str = "discrete"):
    """Individual-bath exponent: half of each spin's own mode sum."""
    if params.bath_kind != "individual":
        raise ValueError("gamma_individual needs an individual-bath ModelParams")
    first, second = _sums(params, sched, t, method)
    return 0.5 * first + 0.5 * second


def gamma(params: ModelParams, sched: PulseSchedule, t, method: str = "discrete"):
    if params.bath_kind == "common":
        return gamma_common(params, sched, t, method)
    return gamma_individual(params, sched, t, method)


def concurrence_common(params: ModelParams, sched: PulseSchedule,
                       t_grid) -> ConcurrenceSeries:
    g = np.atleast_1d(gamma_common(params, sched, np.asarray(t_grid, dtype=float)))
    return ConcurrenceSeries.from_gamma(t_grid, g, params.prefactor)


def concurrence_individual(params: ModelParams, sched: PulseSchedule,
                           t_grid) -> ConcurrenceSeries:
    g = np.atleast_1d(gamma_individual(params, sched, np.asarray(t_grid, dtype=float)))
    return ConcurrenceSeries.from_gamma(t_grid, g, params.prefactor)


def simulate(params: ModelParams, sched: PulseSchedule, t_grid) -> ConcurrenceSeries:
    if params.bath_kind == "common":
        return concurrence_common(params, sched, t_grid)
    return concurrence_individual(params, sched, t_grid)


def gamma_free_closed_form(spec: GaussianSpectrum, t):
    """Pulse-free common-bath exponent ``4 s (1 - cos(w_p t) exp(-g_p^2 t^2 / 4))``."""
    t = np.asarray(t, dtype=float)
    x = 0.25 * (spec.gamma_p * t) ** 2
    # 1 - cos*e^{-x} = 2 sin^2(wt/2) - cos * expm1(-x), stable near t = 0
    val = 4.0 * spec.s * (2.0 * np.sin(0.5 * spec.omega_p * t) ** 2
                          - np.cos(spec.omega_p * t) * np.expm1(-x))
    return float(val) if val.ndim == 0 else val
