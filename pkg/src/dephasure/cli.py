"""
Command-line front end.

Exit codes: 0 success, 1 runtime or adjudication failure, 2 configuration
error (including oracle dimension overflow).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from dephasure import oracle
from dephasure.config import ConfigError, RunConfig, load_config, parse_real_list
from dephasure.dephasing import ConcurrenceSeries, gamma, simulate
from dephasure.output import write_csv
from dephasure.spectral import discretize

EXIT_OK, EXIT_FAILURE, EXIT_CONFIG = 0, 1, 2

FIGURE2_PANELS = {
    "a": ("common", None),
    "b": ("common", math.pi / 5),
    "c": ("common", 2 * math.pi),
    "d": ("individual", None),
    "e": ("individual", math.pi / 5),
    "f": ("individual", 2 * math.pi),
}


def max_workers() -> int:
    env = os.environ.get("DEPHASURE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _pmap(func, items):
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(func, items))


# --- runs ---------------------------------------------------------------------

def compute_series(cfg: RunConfig) -> ConcurrenceSeries:
    return simulate(cfg.model(), cfg.schedule(), cfg.t_grid())


def write_series(path, series: ConcurrenceSeries) -> str:
    rows = zip(series.t_grid, series.gamma, series.concurrence)
    return write_csv(path, ("t_tilde", "gamma", "concurrence"), rows)


def run_simulate(cfg: RunConfig, out, plot: bool = False) -> ConcurrenceSeries:
    series = compute_series(cfg)
    write_series(out, series)
    if plot:
        from dephasure.plotting import plot_series
        plot_series(os.path.splitext(out)[0] + ".png", series)
    return series


def with_interval(cfg: RunConfig, tau, bath: str | None = None) -> RunConfig:
    """Copy of ``cfg`` with a uniform train (or none when ``tau`` is None)."""
    return replace(cfg, bath=bath or cfg.bath, tau_s_tilde=tau, pulse_times=None)


def figure2_configs(cfg: RunConfig) -> dict:
    return {letter: with_interval(cfg, tau, bath)
            for letter, (bath, tau) in FIGURE2_PANELS.items()}


def run_figure2(cfg: RunConfig, out_dir, plot: bool = False) -> dict:
    """Six panels: a-c common bath, d-f individual; no pulses, pi/5, 2pi."""
    os.makedirs(out_dir, exist_ok=True)
    configs = figure2_configs(cfg)
    letters = list(configs)
    series = dict(zip(letters, _pmap(lambda k: compute_series(configs[k]), letters)))
    for letter in letters:
        write_series(os.path.join(out_dir, f"fig2{letter}.csv"), series[letter])
    if plot:
        from dephasure.plotting import plot_panels
        plot_panels(os.path.join(out_dir, "fig2.png"), series)
    return series


def sweep_rows(cfg: RunConfig, taus):
    if not taus:
        raise ConfigError("sweep needs at least one tau value")
    model = cfg.model()

    def one(tau):
        sched = with_interval(cfg, tau).schedule()
        g = float(gamma(model, sched, np.array([cfg.t_max_tilde]))[0])
        conc = ConcurrenceSeries.from_gamma([cfg.t_max_tilde], [g], model.prefactor)
        return tau, g, float(conc.concurrence[0])

    return _pmap(one, taus)


def run_sweep(cfg: RunConfig, taus, out) -> list:
    rows = sweep_rows(cfg, taus)
    write_csv(out, ("tau_s_tilde", "gamma", "concurrence"), rows)
    return rows


def oracle_config(cfg: RunConfig, n_max: int | None = None) -> oracle.FockConfig:
    fock = oracle.default_config(cfg.spectrum(), cfg.bath, cfg.oracle_modes,
                                 cfg.oracle_weight, n_max or cfg.oracle_n_max)
    fock.check_dimension()
    return fock


def run_oracle_check(cfg: RunConfig, out, n_max: int | None = None,
                     plot: bool = False) -> oracle.AdjudicationReport:
    fock = oracle_config(cfg, n_max)
    sched = cfg.schedule(horizon=cfg.oracle_t_max_tilde)
    try:
        report = oracle.converge(fock, sched, cfg.oracle_t_grid())
    except oracle.DimensionError as exc:
        raise oracle.OracleError(f"n_max sweep left the dimension limit: {exc}") from None
    header = ("t_tilde", "gamma_oracle", "gamma_derived", "gamma_verbatim",
              "dev_derived", "dev_verbatim")
    write_csv(out, header, report.rows())
    if plot:
        from dephasure.plotting import plot_adjudication
        plot_adjudication(os.path.splitext(out)[0] + ".png", report)
    return report


def run_spectrum(cfg: RunConfig, out):
    modes = discretize(cfg.spectrum(), cfg.n_modes, cfg.cutoff_widths)
    write_csv(out, ("omega", "weight"), zip(modes.omega, modes.weight))
    return modes


# --- argument handling --------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--out", help="output path (a directory for figure2)")
    common.add_argument("--form", choices=("derived", "verbatim"))
    common.add_argument("--prefactor", choices=("paper", "physical"))

    parser = argparse.ArgumentParser(
        prog="dephasure",
        description="Concurrence of a pulse-controlled dephasing Bell pair.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("simulate", parents=[common], help="one concurrence time series")
    p.add_argument("--plot", action="store_true", help="also write a PNG next to the CSV")
    p = sub.add_parser("figure2", parents=[common], help="six preset panels a-f")
    p.add_argument("--plot", action="store_true", help="also write fig2.png")
    p = sub.add_parser("sweep", parents=[common], help="concurrence at t_max per tau_s")
    p.add_argument("--tau", required=True,
                   help="comma-separated pulse intervals, e.g. pi/5,pi,2pi")
    p = sub.add_parser("oracle-check", parents=[common],
                       help="adjudicate analytic forms against the exact oracle")
    p.add_argument("--n-max", type=int, help="initial Fock cutoff per mode")
    p.add_argument("--plot", action="store_true")
    sub.add_parser("spectrum", parents=[common], help="dump the discretized spectrum")
    return parser


DEFAULT_OUT = {
    "simulate": "concurrence.csv",
    "figure2": "fig2",
    "sweep": "sweep.csv",
    "oracle-check": "oracle_check.csv",
    "spectrum": "spectrum.csv",
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = cfg.updated(form=args.form, prefactor=args.prefactor)
        out = args.out or cfg.output_path or DEFAULT_OUT[args.command]
        if args.command == "simulate":
            run_simulate(cfg, out, args.plot)
        elif args.command == "figure2":
            run_figure2(cfg, out, args.plot)
        elif args.command == "sweep":
            run_sweep(cfg, parse_real_list(args.tau), out)
        elif args.command == "spectrum":
            run_spectrum(cfg, out)
        elif args.command == "oracle-check":
            if args.n_max is not None and args.n_max < 1:
                raise ConfigError("--n-max must be >= 1")
            report = run_oracle_check(cfg, out, args.n_max, getattr(args, "plot", False))
            print(report.summary())
            if report.matching is None:
                print("no analytic branch matches the oracle", file=sys.stderr)
                return EXIT_FAILURE
    except (ConfigError, oracle.DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except oracle.OracleError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
