"""Dense complex linear algebra on tensor-product spaces.

Tensor factors follow the big-endian convention: for dims ``(d0, d1, ...)``
the first factor varies slowest, matching ``numpy.kron``.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .exceptions import ContractViolation
from .validation import check_density_matrix, check_hermitian, check_square, check_subsystem_shape

#: eigenvalues below this contribute nothing to an entropy
ENTROPY_CUTOFF = 1e-12


def kron(*mats) -> np.ndarray:
    """Tensor product of one or more matrices, first factor slowest."""
    if not mats:
        raise ValueError("kron needs at least one matrix")
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in mats))


def _as_index_set(idx, n: int) -> list[int]:
    if isinstance(idx, (int, np.integer)):
        idx = [idx]
    out = sorted({int(i) for i in idx})
    if any(i < 0 or i >= n for i in out):
        raise ValueError(f"subsystem index out of range in {idx} for {n} factors")
    return out


def partial_trace(M, dims: Sequence[int], keep: int | Iterable[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    The kept factors appear in ascending index order in the result.

    Examples
    --------
    >>> import numpy as np
    >>> phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    >>> partial_trace(np.outer(phi, phi), (2, 2), keep=0).real
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    M = check_square(M)
    dims = check_subsystem_shape(dims, M.shape[0])
    n = len(dims)
    keep = _as_index_set(keep, n)
    drop = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep], dtype=np.int64))
    dd = int(np.prod([dims[i] for i in drop], dtype=np.int64))
    T = M.reshape(dims + dims)
    perm = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    T = T.transpose(perm).reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", T)


def partial_transpose(M, dims: Sequence[int], which: int | Iterable[int]) -> np.ndarray:
    """Transpose the listed tensor factors of ``M`` in the computational basis."""
    M = check_square(M)
    dims = check_subsystem_shape(dims, M.shape[0])
    n = len(dims)
    axes = list(range(2 * n))
    for i in _as_index_set(which, n):
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return M.reshape(dims + dims).transpose(axes).reshape(M.shape)


def eig_hermitian(M, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Raises
    ------
    ContractViolation
        If ``M`` deviates from Hermitian by more than ``tol`` (relative to
        its largest entry).
    """
    M = check_hermitian(M, tol)
    w, U = np.linalg.eigh(0.5 * (M + M.conj().T))
    return w[::-1].copy(), U[:, ::-1].copy()


def matrix_exp(M) -> np.ndarray:
    """Matrix exponential (scaling and squaring with a Pade approximant)."""
    M = check_square(M)
    return scipy.linalg.expm(M)


def entropy_bits(eigenvalues) -> float:
    """``-sum(l * log2(l))`` over eigenvalues above :data:`ENTROPY_CUTOFF`.

    The spectrum does not need unit sum; this is what makes blockwise
    entropies of a direct sum add up to the entropy of the whole.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    lam = lam[lam > ENTROPY_CUTOFF]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho, validate: bool = True) -> float:
    """Von Neumann entropy in bits.

    Parameters
    ----------
    rho : array-like of shape (d, d)
        Density matrix.
    validate : bool, default=True
        Check Hermiticity, unit trace and positivity first.
    """
    if validate:
        rho = check_density_matrix(rho)
    else:
        rho = np.asarray(rho, dtype=complex)
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    h = entropy_bits(lam)
    if validate and h > np.log2(rho.shape[0]) + 1e-9:
        raise ContractViolation("entropy exceeds log2(dim); input is not a state")
    return max(h, 0.0)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    k = d if rank is None else rank
    G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real
