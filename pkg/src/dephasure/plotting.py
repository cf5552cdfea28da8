"""Static figures written next to the CSV outputs."""

from __future__ import annotations

import os
import tempfile

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "legend.fontsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "lines.linewidth": 1.0,
    "savefig.dpi": 150,
}

PANEL_TITLES = {
    "a": "common, no pulses",
    "b": r"common, $\tilde\tau_s=\pi/5$",
    "c": r"common, $\tilde\tau_s=2\pi$",
    "d": "individual, no pulses",
    "e": r"individual, $\tilde\tau_s=\pi/5$",
    "f": r"individual, $\tilde\tau_s=2\pi$",
}


def _save(fig, path):
    # temp-and-rename, same as the CSV writer
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".png")
    os.close(fd)
    try:
        fig.savefig(tmp, format="png", bbox_inches="tight")
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.unlink(tmp)


def plot_series(path, series, title=None):
    """Concurrence against scaled time for one run."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.0, 2.6))
        ax.plot(series.t_grid, series.concurrence, color="k")
        ax.set_xlabel(r"$\tilde t$")
        ax.set_ylabel(r"$C(\tilde t)$")
        ax.set_xlim(series.t_grid[0], series.t_grid[-1])
        ax.set_ylim(0, max(series.prefactor, series.concurrence.max()) * 1.05)
        if title:
            ax.set_title(title)
        _save(fig, path)


def plot_panels(path, panels):
    """Six-panel grid; ``panels`` maps letters a-f to ConcurrenceSeries."""
    with plt.rc_context(RC):
        fig, axes = plt.subplots(2, 3, figsize=(9.0, 4.8), sharex=True, sharey=True)
        for ax, letter in zip(axes.flat, "abcdef"):
            series = panels[letter]
            ax.plot(series.t_grid, series.concurrence, color="k")
            ax.set_title(f"({letter}) {PANEL_TITLES[letter]}")
            ax.set_xlim(series.t_grid[0], series.t_grid[-1])
            ax.set_ylim(0, series.prefactor * 1.05)
        for ax in axes[1]:
            ax.set_xlabel(r"$\tilde t$")
        for ax in axes[:, 0]:
            ax.set_ylabel(r"$C(\tilde t)$")
        fig.tight_layout()
        _save(fig, path)


def plot_adjudication(path, report):
    """Oracle exponent against both analytic branches."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.5, 2.8))
        ax.plot(report.t_grid, report.gamma_derived, color="k", label="derived")
        ax.plot(report.t_grid, report.gamma_verbatim, color="tab:red", ls="--",
                label="verbatim")
        ax.plot(report.t_grid[::5], report.gamma_oracle[::5], "o", ms=2.5,
                color="tab:blue", label=f"oracle ($n_{{max}}$={report.n_max})")
        ax.set_xlabel(r"$\tilde t$")
        ax.set_ylabel(r"$\Gamma(\tilde t)$")
        ax.legend(frameon=False)
        _save(fig, path)
