"""
Wootters concurrence for two-qubit density matrices.

Basis order throughout the package is ``(|11>, |10>, |01>, |00>)``, so the
Bell pair ``(|11> + |00>)/sqrt(2)`` has its coherence in the corners.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "InvalidDensityMatrix",
    "SIGMA_YY",
    "validate",
    "spin_flip",
    "concurrence",
    "wootters_roots",
    "concurrence_from_factor",
    "bell_state",
    "werner_state",
    "x_state",
    "product_state",
    "load_density_matrix",
    "save_density_matrix",
    "format_density_matrix",
    "parse_density_matrix",
]

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-8

_SY = np.array([[0, -1j], [1j, 0]])
SIGMA_YY = np.kron(_SY, _SY)


class InvalidDensityMatrix(ValueError):
    pass


def validate(rho) -> np.ndarray:
    """Return ``rho`` as a 4x4 complex array or raise InvalidDensityMatrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidDensityMatrix(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidDensityMatrix("matrix has non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise InvalidDensityMatrix(f"matrix is not Hermitian (max deviation {herm:.3g})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidDensityMatrix(f"trace is {tr!r}, expected 1")
    low = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if low < -PSD_TOL:
        raise InvalidDensityMatrix(f"matrix has negative eigenvalue {low:.3g}")
    return rho


def spin_flip(rho) -> np.ndarray:
    """``(sigma_y x sigma_y) rho* (sigma_y x sigma_y)``."""
    rho = validate(rho)
    return SIGMA_YY @ rho.conj() @ SIGMA_YY


def _psd_sqrt(rho):
    vals, vecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    # rank-revealing cut: roundoff-level eigenvalues are exact zeros
    vals[vals <= 16 * np.finfo(float).eps * max(vals[-1], 0.0)] = 0.0
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def wootters_roots(rho) -> np.ndarray:
    """Eigenvalues of ``R = sqrt(sqrt(rho) rho~ sqrt(rho))``, descending.

    They are taken as the singular values of ``sqrt(rho) sqrt(rho~)``, whose
    Gram matrix is the Hermitian product ``sqrt(rho) rho~ sqrt(rho)``. This
    avoids square roots of the product's roundoff-level eigenvalues, which
    would otherwise put errors of order 1e-8 on rank-deficient states.
    """
    rho = validate(rho)
    root = _psd_sqrt(rho)
    # sqrt(rho~) = S sqrt(rho)* S with S = sigma_y x sigma_y
    return np.linalg.svd(root @ SIGMA_YY @ root.conj() @ SIGMA_YY, compute_uv=False)


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, 2 lambda_max - Tr R)``."""
    lam = wootters_roots(rho)
    return float(max(0.0, 2.0 * lam[0] - lam.sum()))


def concurrence_from_factor(factor) -> float:
    """Concurrence of ``rho = W W^+`` from a factor ``W`` (shape ``(4, r)``).

    The roots are the singular values of ``W^+ (sigma_y x sigma_y) W*``, so
    no square root of ``rho`` is taken and rank-deficient states keep full
    absolute precision.
    """
    w = np.asarray(factor, dtype=complex)
    if w.ndim != 2 or w.shape[0] != 4:
        raise InvalidDensityMatrix(f"expected a (4, r) factor, got shape {w.shape}")
    if w.shape[1] > 4:
        # thin QR keeps the 4x4 triangular factor: W W^+ = R^+ R
        w = np.linalg.qr(w.conj().T, mode="r").conj().T
    lam = np.linalg.svd(w.conj().T @ SIGMA_YY @ w.conj(), compute_uv=False)
    return float(max(0.0, 2.0 * lam[0] - lam.sum()))


def bell_state() -> np.ndarray:
    """Projector on ``(|11> + |00>)/sqrt(2)``."""
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.outer(psi, psi.conj())


def werner_state(p: float) -> np.ndarray:
    return p * bell_state() + (1 - p) * np.eye(4) / 4


def x_state(coherence: complex) -> np.ndarray:
    """Dephased Bell pair: populations 1/2 on ``|11>``, ``|00>`` and corner ``c``."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = 0.5
    rho[0, 3] = coherence
    rho[3, 0] = np.conj(coherence)
    return rho


def product_state(index: int = 3) -> np.ndarray:
    """Computational basis projector; index 3 is ``|00>``."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[index, index] = 1.0
    return rho


# --- plain-text exchange format ----------------------------------------------
# four lines, four whitespace-separated "re,im" entries each, row-major

def format_density_matrix(rho) -> str:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidDensityMatrix(f"expected a 4x4 matrix, got shape {rho.shape}")
    lines = [" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row) for row in rho]
    return "\n".join(lines) + "\n"


def parse_density_matrix(text: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = []
        for token in line.split():
            try:
                re_part, im_part = token.split(",")
                row.append(complex(float(re_part), float(im_part)))
            except ValueError:
                raise InvalidDensityMatrix(
                    f"line {lineno}: cannot parse entry {token!r}") from None
        if len(row) != 4:
            raise InvalidDensityMatrix(f"line {lineno}: expected 4 entries, got {len(row)}")
        rows.append(row)
    if len(rows) != 4:
        raise InvalidDensityMatrix(f"expected 4 rows, got {len(rows)}")
    return validate(np.array(rows))


def load_density_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_density_matrix(fh.read())


def save_density_matrix(path, rho) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_density_matrix(validate(rho)))
