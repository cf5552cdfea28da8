"""
Run configuration: ``key=value`` lines with ``#`` comment lines.

Real-valued keys accept plain floats and multiples/fractions of pi written
as ``pi``, ``2pi``, ``2*pi``, ``pi/5`` or ``3pi/2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields, replace

import numpy as np

from dephasure.dephasing import ModelParams
from dephasure.schedule import PulseSchedule, uniform
from dephasure.spectral import GaussianSpectrum

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "parse_real",
           "parse_real_list"]


class ConfigError(ValueError):
    pass


_PI = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+))?\s*\*?\s*pi(?:\s*/\s*(\d+\.?\d*|\.\d+))?$")


def parse_real(text: str) -> float:
    text = text.strip()
    sign = 1.0
    if text[:1] in "+-" and text[1:2] == "p":
        sign, text = (-1.0 if text[0] == "-" else 1.0), text[1:]
    match = _PI.match(text)
    if match:
        num, den = match.groups()
        value = sign * math.pi
        if num is not None:
            value = float(num) * value
        if den is not None:
            value = value / float(den)
        return value
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"not a real number: {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"not a finite number: {text!r}")
    return value


def parse_real_list(text: str) -> tuple[float, ...]:
    items = [item for item in text.split(",") if item.strip()]
    if not items:
        raise ConfigError("empty list")
    return tuple(parse_real(item) for item in items)


@dataclass(frozen=True)
class RunConfig:
    gamma_p_tilde: float = 0.1
    s: float = 5.0
    bath: str = "common"
    tau_s_tilde: float | None = None
    pulse_times: tuple[float, ...] | None = None
    t_max_tilde: float = 40.0
    n_samples: int = 2001
    n_modes: int = 2001
    cutoff_widths: float = 6.0
    form: str = "derived"
    prefactor: str = "paper"
    output_path: str | None = None
    # exact-oracle settings
    oracle_modes: int | None = None
    oracle_n_max: int = 12
    oracle_weight: float = 0.5
    oracle_t_max_tilde: float = 4 * math.pi
    oracle_samples: int = 201

    def __post_init__(self):
        if self.tau_s_tilde is not None and self.pulse_times is not None:
            raise ConfigError("tau_s_tilde and pulse_times are mutually exclusive")
        if self.tau_s_tilde is not None and not self.tau_s_tilde > 0:
            raise ConfigError("tau_s_tilde must be positive")
        if self.n_samples < 2:
            raise ConfigError("n_samples must be at least 2")
        if not self.t_max_tilde > 0:
            raise ConfigError("t_max_tilde must be positive")
        if self.n_modes < 1:
            raise ConfigError("n_modes must be at least 1")
        if not self.cutoff_widths > 0:
            raise ConfigError("cutoff_widths must be positive")
        if not (self.gamma_p_tilde > 0 and self.s > 0):
            raise ConfigError("gamma_p_tilde and s must be positive")
        if self.bath not in ("common", "individual"):
            raise ConfigError(f"bath must be common or individual, got {self.bath!r}")
        if self.form not in ("derived", "verbatim"):
            raise ConfigError(f"form must be derived or verbatim, got {self.form!r}")
        if self.prefactor not in ("paper", "physical"):
            raise ConfigError(f"prefactor must be paper or physical, got {self.prefactor!r}")
        if self.oracle_n_max < 1 or self.oracle_samples < 2:
            raise ConfigError("oracle_n_max must be >= 1 and oracle_samples >= 2")
        if self.oracle_modes is not None and self.oracle_modes < 1:
            raise ConfigError("oracle_modes must be >= 1")
        if not (self.oracle_weight > 0 and self.oracle_t_max_tilde > 0):
            raise ConfigError("oracle_weight and oracle_t_max_tilde must be positive")
        if self.pulse_times is not None:
            try:
                PulseSchedule(self.pulse_times)
            except ValueError as exc:
                raise ConfigError(f"pulse_times: {exc}") from None

    def spectrum(self) -> GaussianSpectrum:
        return GaussianSpectrum(self.s, 1.0, self.gamma_p_tilde)

    def model(self) -> ModelParams:
        spec = self.spectrum()
        spectra = (spec,) if self.bath == "common" else (spec, spec)
        return ModelParams(spectra, self.bath, prefactor_mode=self.prefactor,
                           form=self.form, n_modes=self.n_modes,
                           cutoff_widths=self.cutoff_widths)

    def schedule(self, horizon: float | None = None) -> PulseSchedule:
        horizon = self.t_max_tilde if horizon is None else horizon
        if self.tau_s_tilde is not None:
            return uniform(self.tau_s_tilde, horizon)
        if self.pulse_times is not None:
            return PulseSchedule(self.pulse_times)
        return PulseSchedule()

    def t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max_tilde, self.n_samples)

    def oracle_t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.oracle_t_max_tilde, self.oracle_samples)

    def updated(self, **changes) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


_CONVERTERS = {
    "gamma_p_tilde": parse_real,
    "s": parse_real,
    "bath": str,
    "tau_s_tilde": parse_real,
    "pulse_times": parse_real_list,
    "t_max_tilde": parse_real,
    "n_samples": int,
    "n_modes": int,
    "cutoff_widths": parse_real,
    "form": str,
    "prefactor": str,
    "output_path": str,
    "oracle_modes": int,
    "oracle_n_max": int,
    "oracle_weight": parse_real,
    "oracle_t_max_tilde": parse_real,
    "oracle_samples": int,
}
assert set(_CONVERTERS) == {f.name for f in fields(RunConfig)}


def parse_config(text: str) -> RunConfig:
    """Parse ``key=value`` lines; unknown keys and bad values raise ConfigError."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONVERTERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _CONVERTERS[key](value)
        except (ConfigError, ValueError) as exc:
            raise ConfigError(f"line {lineno}: {key}: {exc}") from None
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
