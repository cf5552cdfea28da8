"""
Exact propagation of the spin-boson pair in a truncated Fock space.

The joint space is ``(two qubits) x (mode 1) x ... x (mode M)`` with each
mode cut at ``n_max`` quanta. The Hamiltonian (qubit splitting dropped, it
commutes with everything else and only adds local phases) is

    H = sum_k w_k b_k^+ b_k + sum_n S_nz sum_{k in bath(n)} sqrt(|h_k|^2) w_k (b_k + b_k^+)

where ``bath(n)`` is the shared mode set for a common bath and spin ``n``'s
own modes for individual baths. Pi pulses are applied as ``X x X`` on the
qubits. Every qubit operator in ``H`` is diagonal, so ``H`` is block
diagonal over the four qubit basis states; each block is diagonalised
once and the state is evolved exactly between pulses and sample times.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from dephasure import entanglement
from dephasure.dephasing import ModelParams, mode_sum
from dephasure.schedule import PulseSchedule
from dephasure.spectral import DiscreteSpectrum, GaussianSpectrum, discretize

__all__ = [
    "DimensionError",
    "OracleError",
    "FockConfig",
    "default_config",
    "build_hamiltonian",
    "Propagator",
    "initial_state",
    "iter_propagate",
    "propagate",
    "reduce",
    "reduced_factor",
    "AdjudicationReport",
    "adjudicate",
    "converge",
    "oracle_gamma",
    "ORACLE_TOL",
]

MAX_DIMENSION = 2 ** 20
MAX_BLOCK_DIMENSION = 6000
NORM_TOL = 1e-8
ORACLE_TOL = 1e-6

# qubit basis (|11>, |10>, |01>, |00>); S_z = +1/2 on |1>
SZ1 = np.array([0.5, 0.5, -0.5, -0.5])
SZ2 = np.array([0.5, -0.5, 0.5, -0.5])


class DimensionError(ValueError):
    pass


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FockConfig:
    """Truncated bath for the exact oracle.

    ``baths`` holds one :class:`DiscreteSpectrum` for a common bath or two
    for individual baths (one per spin).
    """

    baths: tuple
    n_max: int = 12
    bath_kind: str = "common"
    max_dimension: int = MAX_DIMENSION
    max_block_dimension: int = MAX_BLOCK_DIMENSION

    def __post_init__(self):
        baths = self.baths
        if isinstance(baths, DiscreteSpectrum):
            baths = (baths,) if self.bath_kind == "common" else (baths, baths)
        baths = tuple(baths)
        object.__setattr__(self, "baths", baths)
        expected = {"common": 1, "individual": 2}.get(self.bath_kind)
        if expected is None:
            raise ValueError(f"unknown bath_kind {self.bath_kind!r}")
        if len(baths) != expected:
            raise ValueError(f"{self.bath_kind} bath needs {expected} mode lists")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def n_modes(self) -> int:
        return sum(len(b) for b in self.baths)

    @property
    def block_dimension(self) -> int:
        return (self.n_max + 1) ** self.n_modes

    @property
    def dimension(self) -> int:
        return 4 * self.block_dimension

    def check_dimension(self):
        if self.dimension > self.max_dimension:
            raise DimensionError(
                f"Hilbert dimension 4*({self.n_max}+1)^{self.n_modes} = {self.dimension} "
                f"exceeds the ceiling {self.max_dimension}")
        if self.block_dimension > self.max_block_dimension:
            raise DimensionError(
                f"qubit-sector block dimension {self.block_dimension} exceeds the dense "
                f"eigendecomposition limit {self.max_block_dimension}")

    def with_n_max(self, n_max: int) -> "FockConfig":
        return FockConfig(self.baths, n_max, self.bath_kind,
                          self.max_dimension, self.max_block_dimension)

    def model_params(self, form: str = "derived") -> ModelParams:
        return ModelParams(self.baths, self.bath_kind, form=form,
                           prefactor_mode="physical")


def default_config(spec: GaussianSpectrum, bath_kind: str = "common",
                   modes_per_bath: int | None = None, total_weight: float = 0.5,
                   n_max: int = 12) -> FockConfig:
    """Small oracle bath derived from a Gaussian spectrum.

    Modes sit one width apart and centred on the peak (two modes land at
    ``omega_p +- gamma_p/2``), keep the Gaussian's relative weights, and
    are rescaled so each bath carries ``total_weight``.
    """
    if modes_per_bath is None:
        modes_per_bath = 2 if bath_kind == "common" else 1
    modes = discretize(spec, modes_per_bath, 0.5 * modes_per_bath).scaled(total_weight)
    baths = (modes,) if bath_kind == "common" else (modes, modes)
    return FockConfig(baths, n_max, bath_kind)


def _mode_operators(n_max, n_modes):
    dim = n_max + 1
    lower = sp.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, format="csr")
    number = sp.diags(np.arange(dim, dtype=float), 0, format="csr")
    ident = sp.identity(dim, format="csr")

    def embed(op, k):
        out = sp.identity(1, format="csr")
        for j in range(n_modes):
            out = sp.kron(out, op if j == k else ident, format="csr")
        return out

    return [embed(number, k) for k in range(n_modes)], \
        [embed(lower + lower.T, k) for k in range(n_modes)]


def _coupling_terms(cfg: FockConfig):
    """Bath Hamiltonian plus ``(qubit diagonal, bath operator)`` coupling pairs."""
    numbers, positions = _mode_operators(cfg.n_max, cfg.n_modes)
    omega = np.concatenate([b.omega for b in cfg.baths])
    weight = np.concatenate([b.weight for b in cfg.baths])
    h_bath = sum(w * n for w, n in zip(omega, numbers))
    coupled = [np.sqrt(wt) * w * x for w, wt, x in zip(omega, weight, positions)]
    if cfg.bath_kind == "common":
        return h_bath, [(SZ1 + SZ2, sum(coupled))]
    split = len(cfg.baths[0])
    return h_bath, [(SZ1, sum(coupled[:split])), (SZ2, sum(coupled[split:]))]


def build_hamiltonian(cfg: FockConfig) -> sp.csr_matrix:
    """Joint Hamiltonian as a sparse real symmetric matrix (qubits outermost)."""
    cfg.check_dimension()
    h_bath, terms = _coupling_terms(cfg)
    h = sp.kron(sp.identity(4), h_bath, format="csr")
    for diag, op in terms:
        h = h + sp.kron(sp.diags(diag), op, format="csr")
    return h.tocsr()


class Propagator:
    """Exact ``exp(-i H dt)`` on joint states via per-sector eigendecomposition."""

    def __init__(self, cfg: FockConfig):
        self.cfg = cfg
        self.hamiltonian = build_hamiltonian(cfg)
        self.block_dim = cfg.block_dimension
        coo = self.hamiltonian.tocoo()
        mixed = (coo.row // self.block_dim) != (coo.col // self.block_dim)
        if np.any(coo.data[mixed] != 0):
            raise OracleError("Hamiltonian couples qubit sectors; not pure dephasing")
        _, terms = _coupling_terms(cfg)
        # sectors with identical coupling coefficients share one block
        self._keys = [tuple(float(d[q]) for d, _ in terms) for q in range(4)]
        self._eig = {}

    def _eigensystem(self, q):
        key = self._keys[q]
        if key not in self._eig:
            lo, hi = q * self.block_dim, (q + 1) * self.block_dim
            block = self.hamiltonian[lo:hi, lo:hi].toarray()
            self._eig[key] = np.linalg.eigh(block)
        return self._eig[key]

    def evolve(self, psi: np.ndarray, dt: float) -> np.ndarray:
        """Evolve a ``(4, block_dim)`` state by ``dt``."""
        if dt == 0:
            return psi
        out = np.zeros_like(psi)
        for q in range(4):
            if not np.any(psi[q]):
                continue
            energies, vecs = self._eigensystem(q)
            # real eigenvectors: keep the matvecs real
            coef = np.exp(-1j * energies * dt) * (vecs.T @ psi[q].real
                                                  + 1j * (vecs.T @ psi[q].imag))
            out[q] = vecs @ coef.real + 1j * (vecs @ coef.imag)
        return out


def initial_state(cfg: FockConfig) -> np.ndarray:
    """Normalised Bell pair ``(|11> + |00>)/sqrt(2)`` times the bath vacuum."""
    psi = np.zeros((4, cfg.block_dimension), dtype=complex)
    psi[0, 0] = psi[3, 0] = 1 / np.sqrt(2)
    return psi.reshape(-1)


def _flip_both(psi):
    # X x X maps |11> <-> |00> and |10> <-> |01>: reverses qubit order
    return psi[::-1].copy()


def iter_propagate(cfg: FockConfig, sched: PulseSchedule, t_grid,
                   propagator: Propagator | None = None):
    """Yield the joint state (flat vector, qubits outermost) at each grid time."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or t_grid[0] != 0.0 or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be sorted and start at 0")
    prop = propagator or Propagator(cfg)
    psi = initial_state(cfg).reshape(4, -1)
    now, k = 0.0, 0
    for t in t_grid:
        while k < len(sched.times) and sched.times[k] <= t:
            psi = _flip_both(prop.evolve(psi, sched.times[k] - now))
            now = sched.times[k]
            k += 1
        psi = prop.evolve(psi, t - now)
        now = t
        drift = abs(np.linalg.norm(psi) - 1.0)
        if drift > NORM_TOL:
            raise OracleError(f"norm drifted by {drift:.3g} at t = {t!r}")
        yield psi.reshape(-1).copy()


def propagate(cfg: FockConfig, sched: PulseSchedule, t_grid,
              propagator: Propagator | None = None) -> list:
    return list(iter_propagate(cfg, sched, t_grid, propagator))


def reduced_factor(state) -> np.ndarray:
    """``(4, block_dim)`` factor ``Phi`` of the reduced state, ``rho = Phi Phi^+``."""
    return np.asarray(state).reshape(4, -1)


def reduce(state) -> np.ndarray:
    """Two-qubit reduced density matrix (partial trace over every mode)."""
    phi = np.asarray(state).reshape(4, -1)
    rho = phi @ phi.conj().T
    return 0.5 * (rho + rho.conj().T)


@dataclass(eq=False)
class AdjudicationReport:
    """Oracle exponent next to both analytic exponents on one time grid."""

    t_grid: np.ndarray
    gamma_oracle: np.ndarray
    gamma_derived: np.ndarray
    gamma_verbatim: np.ndarray
    n_max: int
    tol: float = ORACLE_TOL
    convergence: list = field(default_factory=list)

    @property
    def dev_derived(self) -> np.ndarray:
        return np.abs(self.gamma_oracle - self.gamma_derived)

    @property
    def dev_verbatim(self) -> np.ndarray:
        return np.abs(self.gamma_oracle - self.gamma_verbatim)

    @property
    def max_dev_derived(self) -> float:
        return float(np.max(self.dev_derived))

    @property
    def max_dev_verbatim(self) -> float:
        # NaN when the verbatim form does not apply (non-uniform schedule)
        return float(np.max(self.dev_verbatim))

    @property
    def matching(self) -> str | None:
        """Branch the oracle supports; ``derived`` wins a tie."""
        if self.max_dev_derived <= self.tol:
            return "derived"
        if self.max_dev_verbatim <= self.tol:
            return "verbatim"
        return None

    @property
    def max_dev_matching(self) -> float:
        if self.matching == "verbatim":
            return self.max_dev_verbatim
        return self.max_dev_derived

    def rows(self):
        return zip(self.t_grid, self.gamma_oracle, self.gamma_derived,
                   self.gamma_verbatim, self.dev_derived, self.dev_verbatim)

    def summary(self) -> str:
        branch = self.matching or "none"
        return (f"oracle n_max={self.n_max}: max|dev_derived|={self.max_dev_derived:.3e} "
                f"max|dev_verbatim|={self.max_dev_verbatim:.3e} tol={self.tol:g} "
                f"matching={branch}")


def oracle_gamma(cfg: FockConfig, sched: PulseSchedule, t_grid,
                 propagator: Propagator | None = None) -> np.ndarray:
    """``-ln(C(t)/C(0))`` with C the Wootters concurrence of the reduced state.

    The concurrence is evaluated from the purification factor of the
    reduced state, which avoids square roots of its null eigenvalues.
    """
    conc = np.array([entanglement.concurrence_from_factor(reduced_factor(psi))
                     for psi in iter_propagate(cfg, sched, t_grid, propagator)])
    with np.errstate(divide="ignore"):
        return -np.log(conc / conc[0])


def _analytic(cfg, sched, t_grid, form):
    if form == "verbatim" and not sched.is_uniform and len(sched):
        return np.full(len(t_grid), np.nan)
    sums = [mode_sum(b, sched, t_grid, form) for b in cfg.baths]
    if cfg.bath_kind == "common":
        return 2.0 * sums[0]
    return 0.5 * sums[0] + 0.5 * sums[1]


def _report(cfg, sched, t_grid, g_oracle, tol):
    return AdjudicationReport(
        t_grid,
        g_oracle,
        _analytic(cfg, sched, t_grid, "derived"),
        _analytic(cfg, sched, t_grid, "verbatim"),
        cfg.n_max,
        tol,
    )


def adjudicate(cfg: FockConfig, sched: PulseSchedule, t_grid,
               propagator: Propagator | None = None,
               tol: float = ORACLE_TOL) -> AdjudicationReport:
    t_grid = np.asarray(t_grid, dtype=float)
    return _report(cfg, sched, t_grid, oracle_gamma(cfg, sched, t_grid, propagator), tol)


def _max_change(a, b):
    finite = np.isfinite(a) & np.isfinite(b)
    if np.any(np.isfinite(a) != np.isfinite(b)):
        return np.inf
    return float(np.max(np.abs(a[finite] - b[finite]), initial=0.0))


def converge(cfg: FockConfig, sched: PulseSchedule, t_grid, tol: float = 1e-8,
             max_doublings: int = 4, report_tol: float = ORACLE_TOL,
             cache: dict | None = None):
    """Double ``n_max`` until the oracle exponent moves by less than ``tol``.

    Returns the adjudication report at the first ``n_max`` whose doubling
    changes ``gamma_oracle`` by less than ``tol`` everywhere on ``t_grid``,
    with the sweep history ``[(n_max, 2*n_max, max change), ...]`` attached.
    Raises OracleError when ``max_doublings`` is exhausted, and
    DimensionError as soon as a doubled configuration is too large.
    Pass the same ``cache`` dict to several calls on one bath to reuse
    eigendecompositions (keyed by ``n_max``).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    cache = {} if cache is None else cache

    def run(c):
        if c.n_max not in cache:
            cache[c.n_max] = Propagator(c)
        return oracle_gamma(c, sched, t_grid, cache[c.n_max])

    history = []
    cfg.check_dimension()
    g = run(cfg)
    for _ in range(max_doublings):
        bigger = cfg.with_n_max(2 * cfg.n_max)
        bigger.check_dimension()
        g_big = run(bigger)
        change = _max_change(g, g_big)
        history.append((cfg.n_max, bigger.n_max, change))
        if change < tol:
            report = _report(cfg, sched, t_grid, g, report_tol)
            report.convergence = history
            return report
        cfg, g = bigger, g_big
    raise OracleError(f"n_max did not converge to {tol:g} after {max_doublings} doublings: "
                      f"{history}")
