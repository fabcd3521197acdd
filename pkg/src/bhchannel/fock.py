"""Truncated Fock-space states and isometries for the horizon channels.

Every construction keeps at most ``n_max`` quanta per mode.  Truncated
columns are renormalised and the raw norm deficit is kept alongside as
``column_residuals`` / ``residual`` so callers can judge convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .exceptions import DimensionError, ParameterError
from .linalg import kron, matrix_exp
from .representations import StinespringIsometry
from .validation import check_count, check_in_range


@dataclass(frozen=True)
class SqueezeParam:
    """Two-mode squeezing strength ``r`` of a horizon mode.

    ``z = tanh(r)**2`` is the only combination the channel maths needs.
    ``omega`` / ``kappa`` (mode frequency, surface gravity) and ``gamma_sq``
    are optional bookkeeping.
    """

    r: float
    omega: float | None = None
    kappa: float | None = None
    gamma_sq: float | None = None

    def __post_init__(self):
        check_in_range(self.r, "r", 0.0)
        if self.omega is not None and self.kappa is not None:
            if abs(math.tanh(self.r) - math.exp(-math.pi * self.omega / self.kappa)) > 1e-12:
                raise ParameterError("r is inconsistent with tanh(r) = exp(-pi omega / kappa)")

    @property
    def z(self) -> float:
        return math.tanh(self.r) ** 2

    @classmethod
    def from_z(cls, z: float) -> "SqueezeParam":
        z = check_in_range(z, "z", 0.0, 1.0, high_inclusive=False)
        return cls(math.atanh(math.sqrt(z)))

    @classmethod
    def from_frequency(cls, omega: float, kappa: float) -> "SqueezeParam":
        """Mode of frequency ``omega`` near a horizon of surface gravity ``kappa``."""
        omega = check_in_range(omega, "omega", 0.0, low_inclusive=False)
        kappa = check_in_range(kappa, "kappa", 0.0, low_inclusive=False)
        return cls(math.atanh(math.exp(-math.pi * omega / kappa)), omega=omega, kappa=kappa)

    @classmethod
    def from_mass(cls, omega: float, mass: float) -> "SqueezeParam":
        mass = check_in_range(mass, "mass", 0.0, low_inclusive=False)
        return cls.from_frequency(omega, 1.0 / (2.0 * mass))


@dataclass(frozen=True)
class AbsorbParam:
    """Coupling ``g`` of the perfectly absorbing horizon Hamiltonian."""

    g: float

    def __post_init__(self):
        check_in_range(self.g, "g", 0.0, low_inclusive=False)

    @property
    def A(self) -> float:
        return 2.0 * self.g / (2.0 + self.g**2)

    @property
    def B(self) -> float:
        return -self.g**2 / (2.0 + self.g**2)

    @property
    def decay(self) -> float:
        """Per-quantum probability ratio ``A**2 + B**2`` of the vacuum column."""
        return self.A**2 + self.B**2


@dataclass(frozen=True, eq=False)
class PureStateVector:
    amplitudes: np.ndarray
    dims: tuple
    residual: float = 0.0

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def reduced(self, keep) -> np.ndarray:
        """Reduced state on the factors ``keep`` (ascending order), without forming the full projector."""
        n = len(self.dims)
        kept = sorted({int(k) for k in np.atleast_1d(keep)})
        if any(k < 0 or k >= n for k in kept):
            raise DimensionError(f"keep {keep} out of range for {n} factors")
        rest = [i for i in range(n) if i not in kept]
        d_keep = int(np.prod([self.dims[i] for i in kept], dtype=np.int64))
        M = self.amplitudes.reshape(self.dims).transpose(kept + rest).reshape(d_keep, -1)
        return M @ M.conj().T


def _as_squeeze(p) -> SqueezeParam:
    return p if isinstance(p, SqueezeParam) else SqueezeParam.from_z(p)


def _as_absorb(g) -> AbsorbParam:
    return g if isinstance(g, AbsorbParam) else AbsorbParam(g)


def _coupling(g) -> float:
    # g = 0 is allowed here as the decoupled limit
    return g.g if isinstance(g, AbsorbParam) else check_in_range(g, "g", 0.0)


def auto_cutoff(z: float, tol: float = 1e-12, minimum: int = 1) -> int:
    """Smallest ``n_max`` with ``z**n_max <= tol`` (geometric amplitude decay)."""
    z = check_in_range(z, "z", 0.0, 1.0, high_inclusive=False)
    tol = check_in_range(tol, "tol", 0.0, 1.0, low_inclusive=False)
    if z == 0.0:
        return max(1, minimum)
    return max(1, minimum, math.ceil(math.log(tol) / math.log(z)))


def absorb_auto_cutoff(g, tol: float = 1e-10, minimum: int = 4) -> int:
    return auto_cutoff(_as_absorb(g).decay, tol, minimum)


def squeezer_vacuum_state(p, n_max: int) -> PureStateVector:
    """Two-mode squeezed vacuum ``sum_n tanh^n r / cosh r |n>_B |n>_E``, truncated."""
    p = _as_squeeze(p)
    n_max = check_count(n_max, "n_max")
    N = n_max + 1
    z = p.z
    if z >= 1.0:
        raise ParameterError("z must be < 1")
    n = np.arange(N)
    diag = np.sqrt(1.0 - z) * np.sqrt(z) ** n
    raw = float(np.sum(diag**2))
    amps = np.zeros(N * N, dtype=complex)
    amps[n * N + n] = diag / np.sqrt(raw)
    return PureStateVector(amps, (N, N), residual=1.0 - raw)


def hawking_isometry(p, n_max: int) -> StinespringIsometry:
    """Vacuum-input Hawking channel: a one-dimensional input mapped to the squeezed vacuum."""
    state = squeezer_vacuum_state(p, n_max)
    return StinespringIsometry(
        state.amplitudes[:, None], 1, state.dims, (0,), column_residuals=np.array([state.residual])
    )


def unruh_isometry(p, n_max: int, n_inputs: int | None = None) -> StinespringIsometry:
    """Single-mode Unruh isometry ``|n> -> sum_m amp(n, m) |n+m>_B |m>_E``.

    ``amp(n, m) = sqrt(C(n+m, n)) tanh^m r / cosh^(1+n) r``.  Output factors
    are ``(B, E)`` with ``n_max + 1`` levels each; inputs ``0 .. n_inputs-1``
    (default all ``n_max + 1``).
    """
    p = _as_squeeze(p)
    n_max = check_count(n_max, "n_max")
    N = n_max + 1
    n_in = N if n_inputs is None else check_count(n_inputs, "n_inputs")
    if n_in > N:
        raise ParameterError("n_inputs cannot exceed n_max + 1")
    z = p.z
    if z >= 1.0:
        raise ParameterError("z must be < 1")
    log_cosh_sq = -math.log1p(-z)  # cosh^2 r = 1 / (1 - z)
    V = np.zeros((N * N, n_in), dtype=complex)
    residuals = np.zeros(n_in)
    for n in range(n_in):
        m = np.arange(N - n)
        if z == 0.0:
            amp = (m == 0).astype(float)
        else:
            log_binom = gammaln(n + m + 1) - gammaln(n + 1) - gammaln(m + 1)
            amp = np.exp(0.5 * log_binom + 0.5 * m * math.log(z) - 0.5 * (1 + n) * log_cosh_sq)
        raw = float(np.sum(amp**2))
        residuals[n] = 1.0 - raw
        V[(n + m) * N + m, n] = amp / math.sqrt(raw)
    return StinespringIsometry(V, n_in, (N, N), (0,), column_residuals=residuals)


def _ladder(N: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)


def sorkin_hamiltonian(g, n_max: int) -> np.ndarray:
    """``H = i g (a^+ b^+ - a b + a^+ c - a c^+)`` on three truncated modes (a, b, c)."""
    g = _coupling(g)
    n_max = check_count(n_max, "n_max")
    N = n_max + 1
    a1, I = _ladder(N), np.eye(N)
    a = kron(a1, I, I)
    b = kron(I, a1, I)
    c = kron(I, I, a1)
    ad = a.conj().T
    return 1j * g * (ad @ b.conj().T - a @ b + ad @ c - a @ c.conj().T)


def absorb_isometry_closed_form(g, n_max: int) -> StinespringIsometry:
    """Absorbing-horizon isometry on c-mode inputs ``|0>`` and ``|1>``.

    Output factors are the modes ``(a, b, c)``; the channel output is ``a``.
    Binomials ``C(n, k)`` with ``k > n`` are zero.
    """
    gg = _coupling(g)
    n_max = check_count(n_max, "n_max")
    N = n_max + 1
    A, B = 2.0 * gg / (2.0 + gg**2), -(gg**2) / (2.0 + gg**2)
    pref = 2.0 / (2.0 + gg**2)
    V = np.zeros((N, N, N, 2), dtype=complex)
    for n in range(N):
        for k in range(n + 1):
            coef = math.pow(A, n - k) * math.pow(B, k) * math.sqrt(math.comb(n, k))
            V[n - k, n, k, 0] += pref * coef
            c1 = pref**2 * coef
            if k + 1 < N:
                V[n - k, n, k + 1, 1] += c1 * math.sqrt(k + 1)
            if n - k + 1 < N:
                V[n - k + 1, n, k, 1] += c1 * gg * math.sqrt(n - k + 1)
    V = V.reshape(N**3, 2)
    norms = np.sum(np.abs(V) ** 2, axis=0)
    return StinespringIsometry(V / np.sqrt(norms), 2, (N, N, N), (0,), column_residuals=1.0 - norms)


def absorb_isometry_expm(g, n_max: int) -> StinespringIsometry:
    """Oracle for :func:`absorb_isometry_closed_form`: columns of ``exp(-i H)`` on |000>, |001>."""
    N = check_count(n_max, "n_max") + 1
    U = matrix_exp(-1j * sorkin_hamiltonian(g, n_max))
    V = U[:, [0, 1]]
    norms = np.sum(np.abs(V) ** 2, axis=0)
    return StinespringIsometry(V / np.sqrt(norms), 2, (N, N, N), (0,), column_residuals=1.0 - norms)


def total_excitation(dims) -> np.ndarray:
    """Total occupation number of every basis state of a multimode Fock space."""
    grids = np.meshgrid(*[np.arange(d) for d in dims], indexing="ij")
    return sum(grids).ravel()


def greybody_alpha(Gamma: float, omega: float, T: float) -> float:
    """``alpha = sqrt(Gamma / (1 - exp(-omega / T)))`` for absorptivity ``Gamma``."""
    Gamma = check_in_range(Gamma, "Gamma", 0.0, 1.0, high_inclusive=False)
    omega = check_in_range(omega, "omega", 0.0, low_inclusive=False)
    T = check_in_range(T, "T", 0.0, low_inclusive=False)
    return math.sqrt(Gamma / -math.expm1(-omega / T))


def reflecting_params(beta: float) -> SqueezeParam:
    """Perfectly reflecting horizon: ``tanh^2 r = beta^2 / (1 + beta^2)``, ``gamma^2 = 1 + beta^2``."""
    beta = check_in_range(beta, "beta", 0.0, low_inclusive=False)
    return SqueezeParam(math.asinh(beta), gamma_sq=1.0 + beta**2)
