"""Input validation helpers shared by the estimators and functional API."""

from __future__ import annotations

from numbers import Real
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ContractViolation, DimensionError, ParameterError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


def check_square(M, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ContractViolation(f"{name} has non-finite entries")
    return M


def check_hermitian(M, tol: float = 1e-10, name: str = "matrix") -> np.ndarray:
    M = check_square(M, name)
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    dev = float(np.abs(M - M.conj().T).max(initial=0.0))
    if dev > tol * scale:
        raise ContractViolation(f"{name} is not Hermitian (max |M - M^H| = {dev:.3e})")
    return M


def check_density_matrix(
    rho,
    dim: int | None = None,
    *,
    herm_tol: float = HERMITIAN_TOL,
    trace_tol: float = TRACE_TOL,
    psd_tol: float = PSD_TOL,
) -> np.ndarray:
    """Validate a density matrix and return it as a complex ndarray.

    Parameters
    ----------
    rho : array-like of shape (d, d)
    dim : int, optional
        Required dimension ``d``.
    herm_tol, trace_tol, psd_tol : float
        Tolerances on ``max|rho - rho^H|``, ``|tr rho - 1|`` and the most
        negative eigenvalue.

    Raises
    ------
    DimensionError
        Wrong shape.
    ContractViolation
        Not Hermitian, not unit trace, or not positive semidefinite.
    """
    rho = check_square(rho, "density matrix")
    if dim is not None and rho.shape[0] != dim:
        raise DimensionError(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    dev = float(np.abs(rho - rho.conj().T).max(initial=0.0))
    if dev > herm_tol:
        raise ContractViolation(f"density matrix is not Hermitian (deviation {dev:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ContractViolation(f"density matrix trace is {tr!r}, expected 1")
    lam_min = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lam_min < -psd_tol:
        raise ContractViolation(f"density matrix has negative eigenvalue {lam_min:.3e}")
    return rho


def check_density_matrices(X, dim: int | None = None) -> tuple[np.ndarray, bool]:
    """Accept one density matrix or a stack of them.

    Returns the stack of shape ``(n, d, d)`` and whether the input was a
    single matrix, so callers can undo the batching.
    """
    X = np.asarray(X, dtype=complex)
    single = X.ndim == 2
    if single:
        X = X[None]
    if X.ndim != 3:
        raise DimensionError(f"expected (d, d) or (n, d, d) input, got shape {X.shape}")
    for rho in X:
        check_density_matrix(rho, dim)
    return X, single


def check_subsystem_shape(dims: Sequence[int], total: int | None = None) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid subsystem dimensions {dims}")
    if total is not None and int(np.prod(dims)) != total:
        raise DimensionError(f"subsystem dimensions {dims} do not multiply to {total}")
    return dims


def check_in_range(
    value,
    name: str,
    low: float | None = None,
    high: float | None = None,
    *,
    low_inclusive: bool = True,
    high_inclusive: bool = True,
) -> float:
    if not isinstance(value, Real) or not np.isfinite(value):
        raise ParameterError(f"{name} must be a finite real number, got {value!r}")
    value = float(value)
    if low is not None and (value < low or (value == low and not low_inclusive)):
        raise ParameterError(f"{name}={value} below allowed range")
    if high is not None and (value > high or (value == high and not high_inclusive)):
        raise ParameterError(f"{name}={value} above allowed range")
    return value


def check_count(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise ParameterError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_probabilities(probs: Iterable[float], tol: float = 1e-10) -> np.ndarray:
    p = np.asarray(list(probs), dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p < 0) or abs(p.sum() - 1.0) > tol:
        raise ParameterError(f"probabilities must be non-negative and sum to 1, got {p}")
    return p
