"""Qubit channels of the horizon problem and their block (direct-sum) structure.

Dual-rail convention: logical ``|0> = |01>`` (photon in rail 2) and logical
``|1> = |10>``.  A state ``a|0> + b|1>`` has Bloch coefficients
``n = (conj(a) b + a conj(b), i(a conj(b) - conj(a) b), |a|^2 - |b|^2)``.
Output block ``l`` is spanned by ``|m, l-m>`` (rail-1 occupation ``m``
ascending), which puts ``J_z = +l/2`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np
import scipy.linalg
from scipy.linalg.lapack import dsterf

from .exceptions import DimensionError, ParameterError, StructureViolation
from .fock import absorb_isometry_closed_form, unruh_isometry
from .linalg import ENTROPY_CUTOFF, partial_trace
from .representations import (
    ChannelMixin,
    ChoiMatrix,
    FunctionChannel,
    StinespringIsometry,
    choi_of,
    stinespring_of,
)
from .validation import check_count, check_density_matrix, check_in_range, check_probabilities

#: logical basis -> (rail-1 input, rail-2 input)
DUAL_RAIL = ((0, 1), (1, 0))


class SpinGenerators(NamedTuple):
    Jx: np.ndarray
    Jy: np.ndarray
    Jz: np.ndarray


@lru_cache(maxsize=64)
def _su2(d: int) -> tuple:
    j = (d - 1) / 2
    m = j - np.arange(d)
    # <m+1| J_+ |m> = sqrt(j(j+1) - m(m+1)), basis ordered m = j, j-1, ..., -j
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(complex)
    jm = jp.conj().T
    gens = ((jp + jm) / 2, (jp - jm) / 2j, np.diag(m).astype(complex))
    for g in gens:
        g.setflags(write=False)
    return gens


def su2_generators(d: int) -> SpinGenerators:
    """Spin-``(d-1)/2`` representation of su(2): ``J_z = diag(j, j-1, ..., -j)``."""
    d = check_count(d, "d", 1)
    return SpinGenerators(*(g.copy() for g in _su2(d)))


def bloch_coefficients(rho) -> np.ndarray:
    """``n_i = 2 tr(rho J_i)`` for a qubit operator (linear, so mixed inputs are fine)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError("Bloch coefficients need a 2x2 operator")
    return np.array([2 * np.trace(rho @ J) for J in _su2(2)])


def bloch_of_amplitudes(a: complex, b: complex) -> np.ndarray:
    return np.array([np.conj(a) * b + a * np.conj(b), 1j * (a * np.conj(b) - np.conj(a) * b), abs(a) ** 2 - abs(b) ** 2])


def qubit_from_bloch(n) -> np.ndarray:
    Jx, Jy, Jz = _su2(2)
    return 0.5 * np.eye(2) + n[0] * Jx + n[1] * Jy + n[2] * Jz


def _covariant(X, dim: int, identity_coef: float, k: float, scale: float, flip_y: bool = False) -> np.ndarray:
    """``scale * (identity_coef tr(X) I_dim + k sum_i n_i J_i^(dim))``, linear in ``X``."""
    n = bloch_coefficients(X)
    if flip_y:
        n = n * np.array([1, -1, 1])
    Jx, Jy, Jz = _su2(dim)
    return scale * (identity_coef * np.trace(X) * np.eye(dim) + k * (n[0] * Jx + n[1] * Jy + n[2] * Jz))


def _cloning_map(ell: int, X) -> np.ndarray:
    return _covariant(X, ell + 1, ell / 2, 1.0, 2.0 / (ell * (ell + 1)))


def _anticlone_map(ell: int, X) -> np.ndarray:
    return _covariant(X, ell, (ell + 1) / 2, 1.0, 2.0 / (ell * (ell + 1)), flip_y=True)


def _check_ell(ell) -> int:
    return check_count(ell, "ell", 1)


def cloning_apply(ell: int, rho) -> np.ndarray:
    """Optimal ``1 -> ell`` qubit cloner.

    ``Cl_ell(rho) = 2/(ell(ell+1)) (ell/2 I_{ell+1} + sum_i n_i J_i^{(ell+1)})``.
    """
    ell = _check_ell(ell)
    return _cloning_map(ell, check_density_matrix(rho, 2))


def cloning_complement_apply(ell: int, rho) -> np.ndarray:
    """Complementary output of the ``1 -> ell`` cloner (the anti-clones), dimension ``ell``.

    Uses ``m = (n_x, -n_y, n_z)``, i.e. the Bloch vector of the transposed input.
    """
    ell = _check_ell(ell)
    return _anticlone_map(ell, check_density_matrix(rho, 2))


def cloning_channel(ell: int) -> FunctionChannel:
    ell = _check_ell(ell)
    return FunctionChannel(lambda X: _cloning_map(ell, X), lambda X: _anticlone_map(ell, X), 2, f"Cl_{ell}")


def anticlone_channel(ell: int) -> FunctionChannel:
    """The complementary cloner used as a channel in its own right."""
    return cloning_channel(ell).swapped()


def block_weights(z: float, ell_max: int) -> tuple[np.ndarray, float]:
    """``p_l = (1-z)^3 l (l+1) z^(l-1) / 2`` for ``l = 1..ell_max`` and the remaining tail mass."""
    z = check_in_range(z, "z", 0.0, 1.0, high_inclusive=False)
    ell_max = check_count(ell_max, "ell_max", 1)
    ell = np.arange(1, ell_max + 1)
    p = 0.5 * (1 - z) ** 3 * ell * (ell + 1) * np.power(z, ell - 1)
    # sum_{l > L} l(l+1) z^(l-1) is the second derivative of z^(L+2) / (1-z)
    L = ell_max
    u = 1.0 - z
    tail = 0.5 * z**L * ((L + 2) * (L + 1) * u**2 + 2 * (L + 2) * z * u + 2 * z**2)
    return p, tail


def tail_cutoff(z: float, tol: float) -> int:
    """Smallest ``ell_max`` whose block-weight tail is below ``tol``."""
    L = 1
    while block_weights(z, L)[1] > tol:
        L += 1
    return L


def depolarizing_apply(q: float, rho) -> np.ndarray:
    """``(1-q) rho + q/2 I`` for ``0 <= q <= 4/3``."""
    q = check_in_range(q, "q", 0.0, 4.0 / 3.0)
    rho = check_density_matrix(rho, 2)
    return _depolarizing_map(q, rho)


def _depolarizing_map(q: float, X) -> np.ndarray:
    return (1 - q) * X + 0.5 * q * np.trace(X) * np.eye(2)


def depolarizing_channel(q: float) -> FunctionChannel:
    q = check_in_range(q, "q", 0.0, 4.0 / 3.0)
    fwd = lambda X: _depolarizing_map(q, X)  # noqa: E731
    return FunctionChannel(fwd, None, 2, f"D(q={q})")


def block_depolarizing_apply(ell: int, q: float, rho) -> np.ndarray:
    """Depolarized cloner block ``2/(l(l+1)) (l/2 I + sum_i k_i J_i^{(l+1)})``.

    Coefficients are taken exactly as published, ``k_i = (q - 1) n_i``.
    Note that for ``ell = 1`` this is ``depolarizing_apply(2 - q, rho)``, not
    ``depolarizing_apply(q, rho)``: the published ``k_i`` carry the opposite
    sign to the published qubit depolarizing map.
    """
    ell = _check_ell(ell)
    rho = check_density_matrix(rho, 2)
    return _covariant(rho, ell + 1, ell / 2, q - 1.0, 2.0 / (ell * (ell + 1)))


def covariant_block_apply(ell: int, k: float, rho) -> np.ndarray:
    """``2/(l(l+1)) (l/2 I + k sum_i n_i J_i^{(l+1)})``; ``k = 1`` is the cloner."""
    ell = _check_ell(ell)
    return _covariant(check_density_matrix(rho, 2), ell + 1, ell / 2, k, 2.0 / (ell * (ell + 1)))


def complementary_channel(V: StinespringIsometry) -> StinespringIsometry:
    """``rho -> tr_B(V rho V^dagger)`` as an isometry with B and E exchanged."""
    return V.complementary()


def direct_sum_channel(channels: Sequence, probs: Sequence[float]) -> StinespringIsometry:
    """Orthogonal convex sum ``(+)_x p_x N_x`` with the flag copied to output and environment.

    ``V|psi> = sum_x sqrt(p_x) (V_x|psi>) (x) |x>_B (x) |x>_E``.  Each entry of
    ``channels`` is a :class:`StinespringIsometry` or any channel that can be
    dilated through its Choi matrix.  Output factors are
    ``(B_pad, E_pad, flag_B, flag_E)`` with ``b_factors = (0, 2)``.
    """
    p = check_probabilities(probs)
    if len(channels) != p.size:
        raise ParameterError("need one probability per channel")
    isos = [c if isinstance(c, StinespringIsometry) else stinespring_of(c) for c in channels]
    d = isos[0].input_dim
    if any(v.input_dim != d for v in isos):
        raise ParameterError("all channels in a direct sum need the same input dimension")
    dB = max(v.b_dim for v in isos)
    dE = max(v.e_dim for v in isos)
    K = len(isos)
    out = np.zeros((dB, dE, K, K, d), dtype=complex)
    for x, (px, v) in enumerate(zip(p, isos)):
        W = v.column_tensor()
        out[: W.shape[0], : W.shape[1], x, x, :] = np.sqrt(px) * W
    return StinespringIsometry(out.reshape(dB * dE * K * K, d), d, (dB, dE, K, K), (0, 2))


def embed_dual_rail(V: StinespringIsometry) -> StinespringIsometry:
    """Dense two-rail isometry ``V (x) V`` restricted to the logical qubit span{|01>, |10>}.

    Output factors are ``(B1, E1, B2, E2)``; only practical for small cutoffs,
    see :func:`dual_rail_channel_from_isometry` for the structured route.
    """
    if V.input_dim < 2:
        raise DimensionError("single-rail isometry needs inputs |0> and |1>")
    W = V.column_tensor()
    cols = [np.kron(W[:, :, x].ravel(), W[:, :, y].ravel()) for x, y in DUAL_RAIL]
    dims = (V.b_dim, V.e_dim, V.b_dim, V.e_dim)
    return StinespringIsometry(np.stack(cols, axis=1), 2, dims, (0, 2))


# ---------------------------------------------------------------------------
# block structure of dual-rail channels


def _offset_maxima(P: np.ndarray) -> np.ndarray:
    """``out[d + N - 1] = max |P[i, j]|`` over entries with ``i - j = d``."""
    N = P.shape[0]
    A = np.abs(P)
    return np.array([np.abs(np.diagonal(A, offset=-d)).max(initial=0.0) for d in range(-(N - 1), N)])


@dataclass(eq=False)
class ChannelBlock:
    """One orthogonal block of a dual-rail channel.

    ``out_table[i, j]`` is the block of ``N(|i><j|)`` (unnormalised), so the
    block map is ``rho -> sum_ij rho_ij out_table[i, j] / weight``.
    ``env_table`` holds the matching environment sector when it is stored.
    """

    ell: int
    weight: float
    out_table: np.ndarray
    env_table: np.ndarray | None = None
    mass_spread: float = 0.0
    out_band: int = field(init=False)
    env_band: int | None = field(init=False)

    def __post_init__(self):
        self.out_band = _bandwidth(self.out_table)
        self.env_band = None if self.env_table is None else _bandwidth(self.env_table)

    @property
    def dim(self) -> int:
        return self.out_table.shape[-1]

    def apply(self, X) -> np.ndarray:
        return np.einsum("ij,ijab->ab", np.asarray(X, dtype=complex), self.out_table)

    def env_apply(self, X) -> np.ndarray:
        if self.env_table is None:
            raise NotImplementedError("environment sector not stored for this block")
        return np.einsum("ij,ijab->ab", np.asarray(X, dtype=complex), self.env_table)

    def channel(self, min_weight: float = 1e-12) -> FunctionChannel:
        """The normalised block map ``N_l`` (complement included when stored)."""
        if self.weight <= min_weight:
            raise ParameterError(f"block {self.ell} has mass {self.weight:.3e}; its conditional map is undefined")
        w = self.weight
        env = None if self.env_table is None else (lambda X: self.env_apply(X) / w)
        return FunctionChannel(lambda X: self.apply(X) / w, env, 2, f"block {self.ell}")


class BlockChannel(ChannelMixin):
    """Direct sum ``(+)_l p_l N_l`` of qubit-input blocks plus an untracked tail mass.

    ``apply`` returns the (dense) block-diagonal output over the stored
    blocks; entropies and coherent information are evaluated blockwise.
    Complementary entropies come from stored environment sectors or, failing
    that, from ``H(E) = H(RB)`` on a purification of the input.
    """

    input_dim = 2

    def __init__(self, blocks: Sequence[ChannelBlock], tail_mass: float = 0.0, **meta):
        self.blocks = list(blocks)
        self.tail_mass = float(tail_mass)
        self.cross_coherence = float(meta.pop("cross_coherence", 0.0))
        self.env_sector: Callable | None = meta.pop("env_sector", None)
        self.meta = meta

    @property
    def ells(self) -> list[int]:
        return [b.ell for b in self.blocks]

    @property
    def weights(self) -> np.ndarray:
        return np.array([b.weight for b in self.blocks])

    @property
    def mass_spread(self) -> float:
        return max((b.mass_spread for b in self.blocks), default=0.0)

    def block(self, ell: int) -> ChannelBlock:
        for b in self.blocks:
            if b.ell == ell:
                return b
        raise KeyError(f"no block {ell}")

    def block_map(self, ell: int, min_weight: float = 1e-12) -> "BlockChannel":
        """The normalised block map ``N_l`` as a single-block channel."""
        b = self.block(ell)
        if b.weight <= min_weight:
            raise ParameterError(f"block {ell} has mass {b.weight:.3e}; its conditional map is undefined")
        w = b.weight
        env = None if b.env_table is None else b.env_table / w
        single = ChannelBlock(ell, 1.0, b.out_table / w, env, b.mass_spread / w)
        sector = None if self.env_sector is None else (lambda label: self.env_sector(label) / w)
        return BlockChannel([single], 0.0, env_sector=sector, n_max=self.meta.get("n_max"), ell_max=ell)

    def apply_blocks(self, X) -> list[np.ndarray]:
        return [b.apply(X) for b in self.blocks]

    def apply(self, X) -> np.ndarray:
        return scipy.linalg.block_diag(*self.apply_blocks(X))

    def complement_blocks(self, X) -> list[np.ndarray]:
        out = []
        for b in self.blocks:
            if b.env_table is not None:
                out.append(b.env_apply(X))
            elif self.env_sector is not None:
                out.append(np.einsum("ij,ijab->ab", np.asarray(X, dtype=complex), self.env_sector(b.ell)))
            else:
                raise NotImplementedError("this block channel carries no environment data")
        return out

    def complement_apply(self, X) -> np.ndarray:
        return scipy.linalg.block_diag(*self.complement_blocks(X))

    def output_entropy(self, rho) -> float:
        return float(self._entropies(np.asarray(rho, dtype=complex)[None])[0][0])

    def complement_entropy(self, rho) -> float:
        return float(self._entropies(np.asarray(rho, dtype=complex)[None])[1][0])

    def coherent_information_batch(self, rhos) -> np.ndarray:
        hb, he = self._entropies(np.asarray(rhos, dtype=complex))
        return hb - he

    def _entropies(self, rhos: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = rhos.shape[0]
        hb = np.zeros(n)
        he = np.zeros(n)
        roots = None
        for b in self.blocks:
            hb += _table_entropy(rhos, b.out_table, b.out_band)
            if b.env_table is not None:
                he += _table_entropy(rhos, b.env_table, b.env_band)
            else:
                if roots is None:
                    roots = np.stack([_psd_sqrt(r) for r in rhos])
                # reference (x) block state of a purification; H(E) = H(RB)
                rb = np.einsum("nki,nlj,klab->niajb", roots, roots.conj(), b.out_table)
                d = b.dim
                he += _batched_entropy(rb.reshape(n, 2 * d, 2 * d))
        return hb, he

    def choi(self) -> ChoiMatrix:
        return choi_of(self)

    def block_choi(self, ell: int) -> ChoiMatrix:
        return choi_of(self.block_map(ell))

    def __repr__(self):
        return f"BlockChannel(blocks={self.ells[:3]}..{self.ells[-1:]}, tail_mass={self.tail_mass:.3e})"


#: blocks at least this large with bandwidth <= 1 use the tridiagonal eigensolver
TRIDIAGONAL_MIN_DIM = 24


def _bandwidth(T: np.ndarray) -> int:
    """Largest ``|a - b|`` with a structurally nonzero entry ``T[..., a, b]``."""
    a, b = np.nonzero(np.abs(T).sum(axis=(0, 1)))
    return int(np.abs(a - b).max(initial=0))


def _batched_entropy(mats: np.ndarray) -> np.ndarray:
    return _entropy_of_spectra(np.linalg.eigvalsh(mats))


def _entropy_of_spectra(lam: np.ndarray) -> np.ndarray:
    lam = np.where(lam > ENTROPY_CUTOFF, lam, 1.0)
    return -np.sum(lam * np.log2(lam), axis=-1)


def _table_entropy(rhos: np.ndarray, table: np.ndarray, band: int) -> np.ndarray:
    """Entropies of ``sum_ij rho_ij table[i, j]`` for a stack of inputs."""
    if band > 1 or table.shape[-1] < TRIDIAGONAL_MIN_DIM:
        return _batched_entropy(np.einsum("nij,ijab->nab", rhos, table))
    # a Hermitian tridiagonal matrix is unitarily similar (by a diagonal phase) to the
    # real symmetric one with off-diagonal moduli
    diag = np.einsum("nij,ija->na", rhos, table.diagonal(axis1=2, axis2=3)).real
    off = np.abs(np.einsum("nij,ija->na", rhos, table.diagonal(offset=1, axis1=2, axis2=3)))
    lam = np.empty_like(diag)
    for k in range(diag.shape[0]):
        lam[k], info = dsterf(diag[k], off[k])
        if info != 0:
            lam[k] = np.linalg.eigvalsh(np.einsum("ij,ijab->ab", rhos[k], table))
    return _entropy_of_spectra(lam)


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, U = np.linalg.eigh(rho)
    return (U * np.sqrt(np.clip(w, 0, None))) @ U.conj().T


class _DualRail:
    """Per-rail bookkeeping for composing a single-mode isometry into the dual-rail channel."""

    def __init__(self, V: StinespringIsometry, env_labels: np.ndarray):
        W = V.column_tensor()
        self.C = [W[:, :, 0], W[:, :, 1]]
        self.dB = W.shape[0]
        self.env_labels = np.asarray(env_labels)
        # P[x][x'] = tr_E |psi_x><psi_x'| and Q[x][x'] = tr_B |psi_x><psi_x'| on one rail
        self.P = [[self.C[x] @ self.C[y].conj().T for y in (0, 1)] for x in (0, 1)]
        self.Q = [[self.C[x].T @ self.C[y].conj() for y in (0, 1)] for x in (0, 1)]

    def out_table(self, ell: int) -> np.ndarray:
        m = np.arange(max(0, ell - self.dB + 1), min(ell, self.dB - 1) + 1)
        T = np.empty((2, 2, m.size, m.size), dtype=complex)
        for i, (x, y) in enumerate(DUAL_RAIL):
            for j, (xp, yp) in enumerate(DUAL_RAIL):
                T[i, j] = self.P[x][xp][np.ix_(m, m)] * self.P[y][yp][np.ix_(ell - m, ell - m)]
        return T

    def env_table(self, label: int) -> np.ndarray:
        lab = self.env_labels
        e1, e2 = np.nonzero(lab[:, None] + lab[None, :] == label)
        T = np.empty((2, 2, e1.size, e1.size), dtype=complex)
        for i, (x, y) in enumerate(DUAL_RAIL):
            for j, (xp, yp) in enumerate(DUAL_RAIL):
                T[i, j] = self.Q[x][xp][np.ix_(e1, e1)] * self.Q[y][yp][np.ix_(e2, e2)]
        return T

    def cross_coherence(self) -> float:
        """Largest output coherence between different total occupations, over all ``|i><j|``."""
        worst = 0.0
        N = self.dB
        for i, (x, y) in enumerate(DUAL_RAIL):
            for j, (xp, yp) in enumerate(DUAL_RAIL):
                m1 = _offset_maxima(self.P[x][xp])
                m2 = _offset_maxima(self.P[y][yp])
                prod = np.outer(m1, m2)
                d = np.arange(-(N - 1), N)
                prod[(d[:, None] + d[None, :]) == 0] = 0.0
                worst = max(worst, float(prod.max()))
        return worst


def _mass_spread(T: np.ndarray) -> tuple[float, float]:
    tr = np.einsum("ijaa->ij", T)
    weight = 0.5 * (tr[0, 0] + tr[1, 1]).real
    v = np.array([tr[0, 1].real, -tr[0, 1].imag, 0.5 * (tr[0, 0] - tr[1, 1]).real])
    return weight, float(np.linalg.norm(v))


def _compose_dual_rail(
    V: StinespringIsometry,
    env_labels: np.ndarray,
    ell_range: range,
    store_env: bool,
    coherence_tol: float,
) -> BlockChannel:
    rail = _DualRail(V, env_labels)
    coherence = rail.cross_coherence()
    if coherence > coherence_tol:
        raise StructureViolation(f"cross-block coherence {coherence:.3e} exceeds {coherence_tol:.1e}")
    blocks = []
    for ell in ell_range:
        T = rail.out_table(ell)
        weight, spread = _mass_spread(T)
        if weight <= 0.0:
            continue
        env = rail.env_table(ell - 1) if store_env else None
        blocks.append(ChannelBlock(ell, weight, T, env, spread))
    tail = 1.0 - sum(b.weight for b in blocks)
    return BlockChannel(
        blocks,
        tail,
        cross_coherence=coherence,
        env_sector=lambda ell: rail.env_table(ell - 1),
        n_max=rail.dB - 1,
        ell_max=ell_range[-1],
    )


def dual_rail_channel_from_isometry(
    V: StinespringIsometry,
    ell_max: int | None = None,
    coherence_tol: float = 1e-9,
) -> BlockChannel:
    """Two-rail channel of a single-mode isometry with output ``(B, E)``, split into blocks.

    Block ``l`` collects output states of total occupation ``l``; the matching
    environment sector (total occupation ``l - 1``) is stored with it.

    Raises
    ------
    StructureViolation
        If the output has coherences between different blocks above
        ``coherence_tol``.
    """
    if len(V.output_dims) != 2 or V.b_factors != (0,):
        raise DimensionError("expected a single-mode isometry with output factors (B, E)")
    n_max = V.output_dims[0] - 1
    ell_max = n_max if ell_max is None else min(check_count(ell_max, "ell_max"), n_max)
    env_labels = np.arange(V.output_dims[1])
    return _compose_dual_rail(V, env_labels, range(1, ell_max + 1), True, coherence_tol)


def reflecting_dual_rail_channel(z: float, n_max: int, ell_max: int | None = None) -> BlockChannel:
    """Perfectly reflecting horizon: dual-rail Unruh channel ``(+)_l p_l Cl_l``, computed from the isometry."""
    V = unruh_isometry(z, n_max, n_inputs=2)
    ch = dual_rail_channel_from_isometry(V, ell_max)
    ch.meta["column_residuals"] = V.column_residuals
    return ch


def absorbing_dual_rail_channel(g, n_max: int, coherence_tol: float = 1e-9) -> BlockChannel:
    """Perfectly absorbing horizon: output is the ``a`` modes, environment the ``b, c`` modes.

    Blocks are labelled by total ``a`` occupation, starting at 0.  The
    environment sector paired with block ``l`` has ``b_total - c_total = l - 1``
    and is built on demand via :meth:`BlockChannel.complement_blocks`.
    """
    V = absorb_isometry_closed_form(g, n_max)
    N = n_max + 1
    b, c = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    env_labels = (b - c).ravel()
    ch = _compose_dual_rail(V, env_labels, range(0, n_max + 1), False, coherence_tol)
    ch.meta["column_residuals"] = V.column_residuals
    return ch


# ---------------------------------------------------------------------------
# fitting block maps


def fit_depolarizing(channel) -> tuple[float, float]:
    """Fit ``q`` of a qubit depolarizing map.

    ``q/2`` is read off ``<1|D(|0><0|)|1>`` and cross-checked against the
    coherence ``(1-q)/2`` of ``D(|+><+|)``.  Returns ``(q, residual)`` where the
    residual is the larger of the two-point disagreement and the worst
    entrywise deviation from ``depolarizing_apply(q, .)`` over the six
    Pauli eigenstates.
    """
    apply = channel.apply if hasattr(channel, "apply") else channel
    q = 2.0 * float(apply(np.diag([1.0, 0.0]).astype(complex))[1, 1].real)
    plus = np.full((2, 2), 0.5, dtype=complex)
    q_plus = 1.0 - 2.0 * float(apply(plus)[0, 1].real)
    worst = abs(q - q_plus)
    for n in np.vstack([np.eye(3), -np.eye(3)]):
        rho = qubit_from_bloch(n)
        worst = max(worst, float(np.abs(apply(rho) - _depolarizing_map(q, rho)).max()))
    return q, worst


def fit_covariant_coefficient(channel, ell: int) -> tuple[float, float]:
    """Least-squares ``k`` with ``N(rho) = 2/(l(l+1)) (l/2 I + k n.J)``, and the fit residual."""
    apply = channel.apply if hasattr(channel, "apply") else channel
    scale = 2.0 / (ell * (ell + 1))
    Jx, Jy, Jz = _su2(ell + 1)
    num = den = 0.0
    samples = []
    for n in np.vstack([np.eye(3), -np.eye(3)]):
        rho = qubit_from_bloch(n)
        base = scale * (ell / 2) * np.eye(ell + 1)
        X = scale * (n[0] * Jx + n[1] * Jy + n[2] * Jz)
        Y = apply(rho) - base
        num += np.vdot(X, Y).real
        den += np.vdot(X, X).real
        samples.append((X, Y))
    k = num / den
    resid = max(float(np.abs(Y - k * X).max()) for X, Y in samples)
    return k, resid


# ---------------------------------------------------------------------------
# clone fidelity via the symmetric (Dicke) embedding


@lru_cache(maxsize=8)
def dicke_embedding(ell: int) -> np.ndarray:
    """Isometry from block ``ell`` into ``ell`` qubits: ``|m, ell-m> -> |D_ell^(m)>``.

    ``m`` photons in rail 1 are ``m`` qubits in logical ``|1>``; each Dicke state
    is the normalised symmetric sum over those bit strings.
    """
    ell = check_count(ell, "ell", 1)
    if ell > 6:
        raise ParameterError("Dicke embedding supported for ell <= 6")
    ones = np.array([bin(s).count("1") for s in range(2**ell)])
    E = np.zeros((2**ell, ell + 1))
    for m in range(ell + 1):
        sel = ones == m
        E[sel, m] = 1.0 / np.sqrt(sel.sum())
    E.setflags(write=False)
    return E


def single_clone(ell: int, block_state) -> np.ndarray:
    """Reduced one-qubit state of a block-``ell`` output embedded into ``ell`` qubits."""
    E = dicke_embedding(ell)
    full = E @ np.asarray(block_state, dtype=complex) @ E.T
    return partial_trace(full, (2,) * ell, keep=0)


def qubit_isometry_identity(d: int = 2) -> StinespringIsometry:
    """Identity channel with a trivial one-dimensional environment."""
    return StinespringIsometry(np.eye(d, dtype=complex), d, (d, 1), (0,))


__all__ = [
    "SpinGenerators",
    "su2_generators",
    "bloch_coefficients",
    "bloch_of_amplitudes",
    "qubit_from_bloch",
    "cloning_apply",
    "cloning_complement_apply",
    "cloning_channel",
    "anticlone_channel",
    "block_weights",
    "tail_cutoff",
    "depolarizing_apply",
    "depolarizing_channel",
    "block_depolarizing_apply",
    "covariant_block_apply",
    "complementary_channel",
    "direct_sum_channel",
    "embed_dual_rail",
    "ChannelBlock",
    "BlockChannel",
    "dual_rail_channel_from_isometry",
    "reflecting_dual_rail_channel",
    "absorbing_dual_rail_channel",
    "fit_depolarizing",
    "fit_covariant_coefficient",
    "dicke_embedding",
    "single_clone",
    "qubit_isometry_identity",
]
