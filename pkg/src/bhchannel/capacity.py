"""Coherent information, capacities and entanglement-breaking diagnostics.

All entropies and capacities are in bits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import (
    BlockChannel,
    cloning_apply,
    direct_sum_channel,
    single_clone,
)
from .exceptions import ParameterError
from .linalg import partial_transpose, random_pure_state
from .representations import ChoiMatrix, StinespringIsometry
from .validation import check_count, check_density_matrix, check_in_range, check_probabilities

CAPACITY = "quantum capacity"
SINGLE_LETTER = "single-letter coherent information"


@dataclass
class CapacityResult:
    """Optimised coherent information with convergence metadata.

    ``value`` is reported as a capacity only where ``label`` says so; for
    other channels it is the single-letter coherent information.
    """

    value: float
    optimizer_input: np.ndarray | None = None
    iterations: int = 0
    residual: float = 0.0
    cutoffs: tuple = (None, None)
    tail_bound: float = 0.0
    label: str = SINGLE_LETTER
    grid_max: float | None = None
    notes: list = field(default_factory=list)

    @property
    def bloch_radius(self) -> float | None:
        if self.optimizer_input is None or self.optimizer_input.shape != (2, 2):
            return None
        rho = self.optimizer_input
        n = np.array([2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real])
        return float(np.linalg.norm(n))


@dataclass(frozen=True)
class DualRailQubit:
    """Logical qubit ``a|01> + b|10>``."""

    a: complex
    b: complex

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ParameterError(f"|a|^2 + |b|^2 = {norm!r}, expected 1")

    @classmethod
    def normalized(cls, a: complex, b: complex) -> "DualRailQubit":
        norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if norm == 0:
            raise ParameterError("amplitudes cannot both vanish")
        return cls(complex(a) / norm, complex(b) / norm)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    def density_matrix(self) -> np.ndarray:
        v = self.vector
        return np.outer(v, v.conj())


def coherent_information(channel, rho) -> float:
    """``H(N(rho)) - H(N^c(rho))``."""
    rho = check_density_matrix(rho, channel.input_dim)
    return float(channel.coherent_information(rho))


# ---------------------------------------------------------------------------
# optimisation over the Bloch ball


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` near-uniform unit vectors on the 2-sphere (deterministic)."""
    i = np.arange(n) + 0.5
    polar = np.arccos(1 - 2 * i / n)
    azim = np.pi * (1 + 5**0.5) * i
    return np.stack([np.cos(azim) * np.sin(polar), np.sin(azim) * np.sin(polar), np.cos(polar)], axis=1)


def bloch_grid(n_directions: int = 64, n_radii: int = 8) -> np.ndarray:
    """Centre of the ball plus ``n_directions`` directions at ``n_radii`` radii."""
    radii = np.arange(1, n_radii + 1) / n_radii
    dirs = fibonacci_sphere(n_directions)
    pts = (radii[:, None, None] * dirs[None]).reshape(-1, 3)
    return np.vstack([np.zeros(3), pts])


def _states(points: np.ndarray) -> np.ndarray:
    x, y, z = points.T
    rho = np.empty((points.shape[0], 2, 2), dtype=complex)
    rho[:, 0, 0] = (1 + z) / 2
    rho[:, 1, 1] = (1 - z) / 2
    rho[:, 0, 1] = (x - 1j * y) / 2
    rho[:, 1, 0] = (x + 1j * y) / 2
    return rho


def _project(n: np.ndarray) -> np.ndarray:
    r = np.linalg.norm(n)
    return n / r if r > 1.0 else n


def optimize_coherent_information(
    channel,
    tol: float = 1e-9,
    *,
    n_directions: int = 64,
    n_radii: int = 8,
    max_evals: int = 20000,
    label: str = SINGLE_LETTER,
) -> CapacityResult:
    """Maximise coherent information over qubit inputs.

    A deterministic grid (Fibonacci directions times radii, plus the centre)
    seeds a compass search in Bloch coordinates that halves its step until
    the step is below ``tol``.  The result is never below any grid value.
    A one-dimensional input has nothing to optimise and returns the
    coherent information of its only state.
    """
    d = channel.input_dim
    cutoffs = (channel.meta.get("n_max"), channel.meta.get("ell_max")) if isinstance(channel, BlockChannel) else (None, None)
    tail = channel.tail_mass if isinstance(channel, BlockChannel) else 0.0
    if d == 1:
        rho = np.ones((1, 1), dtype=complex)
        return CapacityResult(float(channel.coherent_information(rho)), rho, 1, 0.0, cutoffs, tail, label)
    if d != 2:
        raise ParameterError("optimisation is implemented for qubit-input channels only")

    pts = bloch_grid(n_directions, n_radii)
    vals = np.asarray(channel.coherent_information_batch(_states(pts)), dtype=float)
    k = int(np.argmax(vals))
    x, fx = pts[k].copy(), float(vals[k])
    grid_max = fx
    step = 1.0 / n_radii
    evals = len(pts)
    moves = np.vstack([np.eye(3), -np.eye(3)])
    while step >= tol and evals < max_evals:
        cand = np.array([_project(x + step * m) for m in moves])
        cv = np.asarray(channel.coherent_information_batch(_states(cand)), dtype=float)
        evals += len(cand)
        j = int(np.argmax(cv))
        if cv[j] > fx:
            x, fx = cand[j], float(cv[j])
        else:
            step /= 2
    result = CapacityResult(
        value=fx,
        optimizer_input=_states(x[None])[0],
        iterations=evals,
        residual=step,
        cutoffs=cutoffs,
        tail_bound=tail,
        label=label,
        grid_max=grid_max,
    )
    if step >= tol:
        result.notes.append(f"evaluation cap {max_evals} reached with step {step:.2e}")
    return result


# ---------------------------------------------------------------------------
# closed forms


def capacity_cloner(ell: int) -> float:
    """``Q(Cl_l) = log2((l+1)/l)``."""
    ell = check_count(ell, "ell", 1)
    return math.log2((ell + 1) / ell)


def unruh_tail_bound(z: float, L: int) -> float:
    """Bound on the capacity series beyond ``L`` using ``log2(1 + 1/l) <= 1/(l ln 2)``."""
    if z == 0.0:
        return 0.0
    u = 1.0 - z
    # sum_{l > L} (l+1) z^(l-1) = z^L ((L+2)/(1-z) + z/(1-z)^2)
    return u**3 / (2 * math.log(2)) * z**L * ((L + 2) / u + z / u**2)


def unruh_capacity(z: float, tol: float = 1e-12) -> CapacityResult:
    """Capacity of the reflecting-horizon (qubit Unruh) channel.

    ``Q = (1-z)^3/2 sum_l l(l+1) z^(l-1) log2((l+1)/l)``, summed until the
    analytic tail bound falls below ``tol``; the bound is returned as
    ``tail_bound``.
    """
    z = check_in_range(z, "z", 0.0, 1.0, high_inclusive=False)
    tol = check_in_range(tol, "tol", 0.0, low_inclusive=False)
    L = 1
    while unruh_tail_bound(z, L) >= tol:
        L += 1
    ell = np.arange(1, L + 1, dtype=float)
    terms = 0.5 * (1 - z) ** 3 * ell * (ell + 1) * np.power(z, ell - 1) * np.log2((ell + 1) / ell)
    return CapacityResult(
        value=math.fsum(terms),
        cutoffs=(None, L),
        tail_bound=unruh_tail_bound(z, L),
        label=CAPACITY,
    )


# ---------------------------------------------------------------------------
# entanglement-breaking and symmetry tests


def ppt_check(choi: ChoiMatrix, tol: float = 1e-10) -> tuple[bool, float]:
    """Partial-transpose test on a Choi state: ``(min eigenvalue >= -tol, min eigenvalue)``.

    Conclusive for separability only when ``input_dim * output_dim <= 6``.
    """
    pt = partial_transpose(choi.matrix, choi.dims, which=1)
    lam = float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])
    return lam >= -tol, lam


def _reorder(M: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    n = len(dims)
    T = M.reshape(tuple(dims) * 2).transpose(list(perm) + [n + p for p in perm])
    return T.reshape(M.shape)


def symmetric_channel_residual(V: StinespringIsometry, n_random: int = 5, seed: int = 0) -> float:
    """Smallest worst-case distance between ``tr_E`` and ``tr_B`` outputs over factor relabelings.

    Returns ``inf`` when output and environment dimensions cannot be matched.
    """
    b_dims = [V.output_dims[i] for i in V.b_factors]
    e_dims = [V.output_dims[i] for i in V.e_factors]
    if sorted(b_dims) != sorted(e_dims):
        return math.inf
    rng = np.random.default_rng(seed)
    inputs = [np.diag(np.eye(V.input_dim)[0]).astype(complex)]
    if V.input_dim > 1:
        for _ in range(n_random):
            v = random_pure_state(V.input_dim, rng)
            inputs.append(np.outer(v, v.conj()))
    outs = [(V.apply(r), V.complement_apply(r)) for r in inputs]
    best = math.inf
    for perm in itertools.permutations(range(len(e_dims))):
        if [e_dims[p] for p in perm] != b_dims:
            continue
        worst = max(float(np.abs(b - _reorder(e, e_dims, perm)).max()) for b, e in outs)
        best = min(best, worst)
    return best


def symmetric_channel_check(V: StinespringIsometry, tol: float = 1e-10) -> bool:
    """True when output and environment marginals coincide, so the capacity is zero."""
    return symmetric_channel_residual(V) <= tol


# ---------------------------------------------------------------------------
# direct sums and clone fidelity


@dataclass
class DirectSumReport:
    direct_sum_value: float
    weighted_value: float
    difference: float
    component_values: list
    probabilities: list
    passed: bool


def verify_direct_sum_lemma(channels: Sequence, probs: Sequence[float], tol: float = 1e-6) -> DirectSumReport:
    """Compare ``Q1((+)_i p_i N_i)`` with ``sum_i p_i Q1(N_i)``, both optimised numerically."""
    p = check_probabilities(probs)
    if any(c.input_dim != 2 for c in channels):
        raise ParameterError("direct-sum lemma check expects qubit-input channels")
    comps = [optimize_coherent_information(c).value for c in channels]
    total = optimize_coherent_information(direct_sum_channel(channels, p)).value
    weighted = math.fsum(pi * qi for pi, qi in zip(p, comps))
    diff = total - weighted
    return DirectSumReport(total, weighted, diff, comps, p.tolist(), abs(diff) <= tol)


def clone_fidelity(ell: int, phi) -> float:
    """Fidelity of one of the ``ell`` clones with the pure input ``phi``.

    The cloner output is embedded into ``ell`` qubits through Dicke states,
    one qubit is kept, and its overlap with ``phi`` is returned.
    """
    ell = check_count(ell, "ell", 1)
    if not 2 <= ell <= 6:
        raise ParameterError("clone fidelity is supported for 2 <= ell <= 6")
    if not isinstance(phi, DualRailQubit):
        phi = DualRailQubit.normalized(*phi)
    rho_one = single_clone(ell, cloning_apply(ell, phi.density_matrix()))
    v = phi.vector
    return float(np.real(v.conj() @ rho_one @ v))
