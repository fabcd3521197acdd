"""Channel representations: the channel protocol, Stinespring isometries and Choi matrices."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .exceptions import DimensionError
from .linalg import entropy_bits, partial_trace, von_neumann_entropy
from .validation import check_density_matrices, check_subsystem_shape


class ChannelMixin:
    """Shared behaviour of everything that acts as a quantum channel.

    Subclasses provide ``input_dim``, ``apply`` and ``complement_apply``;
    both maps must be linear on arbitrary operators, not just states, so
    that Choi matrices can be built from them.
    """

    input_dim: int

    def apply(self, X) -> np.ndarray:
        raise NotImplementedError

    def complement_apply(self, X) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, rho) -> np.ndarray:
        return self.apply(rho)

    def transform(self, X):
        """Apply the channel to one density matrix or a stack ``(n, d, d)``."""
        X, single = check_density_matrices(X, self.input_dim)
        out = np.stack([self.apply(rho) for rho in X])
        return out[0] if single else out

    def output_entropy(self, rho) -> float:
        return von_neumann_entropy(self.apply(rho), validate=False)

    def complement_entropy(self, rho) -> float:
        return von_neumann_entropy(self.complement_apply(rho), validate=False)

    def coherent_information(self, rho) -> float:
        return self.output_entropy(rho) - self.complement_entropy(rho)

    def coherent_information_batch(self, rhos) -> np.ndarray:
        return np.array([self.coherent_information(rho) for rho in rhos])


class FunctionChannel(ChannelMixin):
    """A channel given by a pair of linear maps (output, complementary output)."""

    def __init__(self, forward: Callable, complement: Callable | None, input_dim: int, name: str = ""):
        self.forward = forward
        self.complement = complement
        self.input_dim = input_dim
        self.name = name

    def apply(self, X):
        return self.forward(np.asarray(X, dtype=complex))

    def complement_apply(self, X):
        if self.complement is None:
            raise NotImplementedError(f"channel {self.name!r} has no complementary map")
        return self.complement(np.asarray(X, dtype=complex))

    def swapped(self) -> "FunctionChannel":
        """The channel whose output is this channel's environment."""
        return FunctionChannel(self.complement, self.forward, self.input_dim, f"complement of {self.name}")

    def __repr__(self):
        return f"FunctionChannel({self.name!r}, input_dim={self.input_dim})"


@dataclass(frozen=True, eq=False)
class StinespringIsometry(ChannelMixin):
    """Isometry ``V`` whose output space factors into channel output B and environment E.

    Parameters
    ----------
    V : ndarray of shape (prod(output_dims), input_dim)
    input_dim : int
    output_dims : tuple of int
        Dimensions of the output tensor factors, first factor slowest.
    b_factors : tuple of int
        Indices of the factors that form the channel output; all others are
        the environment.
    column_residuals : ndarray, optional
        Raw norm deficit ``1 - ||V e_i||^2`` of each column before
        renormalization (truncation bookkeeping).
    """

    V: np.ndarray
    input_dim: int
    output_dims: tuple
    b_factors: tuple
    column_residuals: np.ndarray | None = field(default=None)

    def __post_init__(self):
        V = np.asarray(self.V, dtype=complex)
        dims = check_subsystem_shape(self.output_dims)
        if V.shape != (int(np.prod(dims)), self.input_dim):
            raise DimensionError(f"V has shape {V.shape}, expected ({int(np.prod(dims))}, {self.input_dim})")
        b = tuple(sorted(set(int(i) for i in self.b_factors)))
        if any(i < 0 or i >= len(dims) for i in b):
            raise DimensionError(f"b_factors {self.b_factors} out of range for {len(dims)} factors")
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "output_dims", dims)
        object.__setattr__(self, "b_factors", b)

    @property
    def e_factors(self) -> tuple:
        return tuple(i for i in range(len(self.output_dims)) if i not in self.b_factors)

    @property
    def b_dim(self) -> int:
        return int(np.prod([self.output_dims[i] for i in self.b_factors], dtype=np.int64))

    @property
    def e_dim(self) -> int:
        return int(np.prod([self.output_dims[i] for i in self.e_factors], dtype=np.int64))

    def column_tensor(self) -> np.ndarray:
        """``V`` reshaped to ``(b_dim, e_dim, input_dim)`` with B factors first."""
        n = len(self.output_dims)
        T = self.V.reshape(self.output_dims + (self.input_dim,))
        T = T.transpose(list(self.b_factors) + list(self.e_factors) + [n])
        return T.reshape(self.b_dim, self.e_dim, self.input_dim)

    def apply(self, X) -> np.ndarray:
        W = self.column_tensor()
        return np.einsum("bei,ij,cej->bc", W, np.asarray(X, dtype=complex), W.conj(), optimize=True)

    def complement_apply(self, X) -> np.ndarray:
        W = self.column_tensor()
        return np.einsum("bei,ij,bfj->ef", W, np.asarray(X, dtype=complex), W.conj(), optimize=True)

    def joint_output(self, X) -> np.ndarray:
        """``V X V^dagger`` on the full output space."""
        return self.V @ np.asarray(X, dtype=complex) @ self.V.conj().T

    def complementary(self) -> "StinespringIsometry":
        """Same isometry with the roles of output and environment exchanged."""
        return replace(self, b_factors=self.e_factors)

    def isometry_residual(self) -> float:
        """``max |V^dagger V - I|``."""
        return float(np.abs(self.V.conj().T @ self.V - np.eye(self.input_dim)).max())


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Choi state ``(id (x) N)(|Phi><Phi|)`` normalised to unit trace.

    The input factor comes first: ``matrix`` acts on input (x) output.
    """

    matrix: np.ndarray
    input_dim: int
    output_dim: int

    @property
    def dims(self) -> tuple:
        return (self.input_dim, self.output_dim)

    def min_eigenvalue(self) -> float:
        M = self.matrix
        return float(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0])

    def trace_preservation_residual(self) -> float:
        """``max |d_in * tr_out J - I|``; zero for a trace-preserving map."""
        red = partial_trace(self.matrix, self.dims, keep=0) * self.input_dim
        return float(np.abs(red - np.eye(self.input_dim)).max())


def choi_of(channel, input_dim: int | None = None) -> ChoiMatrix:
    """Choi matrix of a linear map given as a channel object or a callable."""
    apply = channel.apply if hasattr(channel, "apply") else channel
    d = channel.input_dim if input_dim is None else input_dim
    cols = []
    for i in range(d):
        row = []
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            row.append(np.asarray(apply(E), dtype=complex))
        cols.append(row)
    d_out = cols[0][0].shape[0]
    J = np.block(cols) / d
    return ChoiMatrix(J, d, d_out)


def isometry_from_choi(choi: ChoiMatrix, tol: float = 1e-12) -> StinespringIsometry:
    """Stinespring isometry ``sum_k K_k (x) |k>_E`` from the Kraus form of a Choi matrix."""
    d, d_out = choi.input_dim, choi.output_dim
    lam, vecs = np.linalg.eigh(choi.matrix * d)
    keep = lam > tol
    lam, vecs = lam[keep][::-1], vecs[:, keep][:, ::-1]
    r = lam.size
    # Kraus K_k[b, i] = sqrt(lam_k) * v_k[i * d_out + b]
    K = np.sqrt(lam)[:, None, None] * vecs.T.reshape(r, d, d_out).transpose(0, 2, 1)
    V = K.transpose(1, 0, 2).reshape(d_out * r, d)
    return StinespringIsometry(V, d, (d_out, r), (0,))


def stinespring_of(channel: ChannelMixin | Callable, input_dim: int | None = None) -> StinespringIsometry:
    """Stinespring dilation of an arbitrary CPTP map via its Choi matrix."""
    return isometry_from_choi(choi_of(channel, input_dim))


def block_entropy(blocks: Sequence[np.ndarray]) -> float:
    """Entropy of a direct sum of (unnormalised) Hermitian blocks."""
    return sum(entropy_bits(np.linalg.eigvalsh(B)) for B in blocks)
