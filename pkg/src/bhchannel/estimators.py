"""Estimator-style wrappers around the channel constructions.

Every channel estimator stores its hyperparameters untouched in
``__init__`` (so ``get_params`` / ``set_params`` and ``clone`` work), checks
them in ``fit``, and exposes the built channel as ``channel_``.  ``transform``
maps a density matrix, or a stack of them, through the channel.

Examples
--------
>>> import numpy as np
>>> est = CloningChannel(ell=2).fit()
>>> np.round(est.transform(np.diag([1.0, 0.0])).real, 6)
array([[0.666667, 0.      , 0.      ],
       [0.      , 0.333333, 0.      ],
       [0.      , 0.      , 0.      ]])
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import channels as ch
from .capacity import CAPACITY, SINGLE_LETTER, CapacityResult, optimize_coherent_information
from .exceptions import ParameterError
from .fock import absorb_auto_cutoff, auto_cutoff, hawking_isometry
from .representations import ChoiMatrix, FunctionChannel, choi_of
from .validation import check_count, check_density_matrices, check_in_range


class _ChannelEstimator(TransformerMixin, BaseEstimator):
    """Common plumbing: ``fit`` builds ``channel_``; everything else reads it."""

    #: how an optimised coherent information of this channel may be labelled
    capacity_label = SINGLE_LETTER

    def _build(self):
        raise NotImplementedError

    def fit(self, X=None, y=None):
        """Validate the parameters and construct the channel.  ``X`` is ignored."""
        self.channel_ = self._build()
        return self

    def transform(self, X):
        check_is_fitted(self, "channel_")
        stack, single = check_density_matrices(X, self.channel_.input_dim)
        out = np.stack([self.channel_.apply(rho) for rho in stack])
        return out[0] if single else out

    def complement_transform(self, X):
        """Output of the complementary channel."""
        check_is_fitted(self, "channel_")
        stack, single = check_density_matrices(X, self.channel_.input_dim)
        out = np.stack([self.channel_.complement_apply(rho) for rho in stack])
        return out[0] if single else out

    def coherent_information(self, rho) -> float:
        check_is_fitted(self, "channel_")
        stack, _ = check_density_matrices(rho, self.channel_.input_dim)
        return float(self.channel_.coherent_information(stack[0]))

    def optimize(self, tol: float = 1e-9) -> CapacityResult:
        check_is_fitted(self, "channel_")
        return optimize_coherent_information(self.channel_, tol, label=self.capacity_label)

    def choi(self) -> ChoiMatrix:
        check_is_fitted(self, "channel_")
        return choi_of(self.channel_)


class CloningChannel(_ChannelEstimator):
    """Optimal ``1 -> ell`` qubit cloner."""

    capacity_label = CAPACITY

    def __init__(self, ell: int = 2):
        self.ell = ell

    def _build(self) -> FunctionChannel:
        return ch.cloning_channel(check_count(self.ell, "ell", 1))


class ComplementaryCloningChannel(_ChannelEstimator):
    """Anti-clone output of the cloner, used as the channel."""

    capacity_label = CAPACITY

    def __init__(self, ell: int = 2):
        self.ell = ell

    def _build(self) -> FunctionChannel:
        return ch.anticlone_channel(check_count(self.ell, "ell", 1))


class DepolarizingChannel(_ChannelEstimator):
    """``rho -> (1-q) rho + q/2 I``.  No complementary map is attached."""

    def __init__(self, q: float = 2.0 / 3.0):
        self.q = q

    def _build(self) -> FunctionChannel:
        return ch.depolarizing_channel(self.q)


class BlockDepolarizingChannel(_ChannelEstimator):
    """Depolarised cloner block of dimension ``ell + 1``."""

    def __init__(self, ell: int = 2, q: float = 2.0 / 3.0):
        self.ell = ell
        self.q = q

    def _build(self) -> FunctionChannel:
        ell = check_count(self.ell, "ell", 1)
        q = check_in_range(self.q, "q", 0.0, 4.0 / 3.0)
        return FunctionChannel(lambda X: ch.block_depolarizing_apply(ell, q, X), None, 2, f"D_{ell}(q={q})")


class HawkingVacuumChannel(_ChannelEstimator):
    """Vacuum in, two-mode squeezed vacuum out: B and E are the pair partners.

    Attributes
    ----------
    isometry_ : StinespringIsometry
    n_max_ : int
        Cutoff used (auto-selected from ``tol`` when ``n_max`` is None).
    """

    capacity_label = CAPACITY

    def __init__(self, z: float = 0.5, n_max: int | None = None, tol: float = 1e-12):
        self.z = z
        self.n_max = n_max
        self.tol = tol

    def _build(self):
        z = check_in_range(self.z, "z", 0.0, 1.0, high_inclusive=False)
        self.n_max_ = auto_cutoff(z, self.tol) if self.n_max is None else check_count(self.n_max, "n_max")
        self.isometry_ = hawking_isometry(z, self.n_max_)
        return self.isometry_


class ReflectingChannel(_ChannelEstimator):
    """Dual-rail channel of a perfectly reflecting horizon, built from the Unruh isometry.

    Parameters
    ----------
    z : float in [0, 1)
    n_max : int, optional
        Per-mode occupation cutoff.  By default the smallest cutoff whose
        untracked block mass is below ``tol``.
    ell_max : int, optional
        Highest block kept (at most ``n_max``).
    tol : float, default=1e-10

    Attributes
    ----------
    block_channel_ : BlockChannel
    weights_ : ndarray
    tail_mass_ : float
    """

    capacity_label = CAPACITY

    def __init__(self, z: float = 0.5, n_max: int | None = None, ell_max: int | None = None, tol: float = 1e-10):
        self.z = z
        self.n_max = n_max
        self.ell_max = ell_max
        self.tol = tol

    def _build(self):
        z = check_in_range(self.z, "z", 0.0, 1.0, high_inclusive=False)
        tol = check_in_range(self.tol, "tol", 0.0, 1.0, low_inclusive=False)
        n_max = ch.tail_cutoff(z, tol) if self.n_max is None else check_count(self.n_max, "n_max")
        self.block_channel_ = ch.reflecting_dual_rail_channel(z, n_max, self.ell_max)
        self.n_max_ = n_max
        self.weights_ = self.block_channel_.weights
        self.tail_mass_ = self.block_channel_.tail_mass
        return self.block_channel_


class AbsorbingChannel(_ChannelEstimator):
    """Dual-rail channel of a perfectly absorbing horizon (closed-form isometry).

    Attributes
    ----------
    block_channel_ : BlockChannel
        Blocks labelled by the output occupation, starting at 0.
    """

    def __init__(self, g: float = 0.5, n_max: int | None = None, tol: float = 1e-10):
        self.g = g
        self.n_max = n_max
        self.tol = tol

    def _build(self):
        g = check_in_range(self.g, "g", 0.0, low_inclusive=False)
        n_max = absorb_auto_cutoff(g, self.tol) if self.n_max is None else check_count(self.n_max, "n_max")
        self.block_channel_ = ch.absorbing_dual_rail_channel(g, n_max)
        self.n_max_ = n_max
        self.weights_ = self.block_channel_.weights
        self.tail_mass_ = self.block_channel_.tail_mass
        return self.block_channel_


class CoherentInformationMaximizer(BaseEstimator):
    """Grid-plus-compass maximiser of the coherent information.

    ``fit(channel)`` accepts a channel object or a fitted channel estimator.
    ``predict(X)`` returns the coherent information of each input state.
    """

    def __init__(self, tol: float = 1e-9, n_directions: int = 64, n_radii: int = 8):
        self.tol = tol
        self.n_directions = n_directions
        self.n_radii = n_radii

    def fit(self, channel, y=None):
        label = getattr(channel, "capacity_label", SINGLE_LETTER)
        if isinstance(channel, _ChannelEstimator):
            check_is_fitted(channel, "channel_")
            channel = channel.channel_
        check_count(self.n_directions, "n_directions")
        check_count(self.n_radii, "n_radii")
        if self.n_radii * self.n_directions + 1 < 500:
            raise ParameterError("the search grid needs at least 500 points")
        self.channel_ = channel
        self.result_ = optimize_coherent_information(
            channel, self.tol, n_directions=self.n_directions, n_radii=self.n_radii, label=label
        )
        self.value_ = self.result_.value
        self.optimizer_input_ = self.result_.optimizer_input
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "result_")
        stack, _ = check_density_matrices(X, self.channel_.input_dim)
        return np.asarray(self.channel_.coherent_information_batch(stack), dtype=float)


class DepolarizingFit(BaseEstimator):
    """Fit the depolarizing parameter ``q`` of a qubit-to-qubit map."""

    def fit(self, channel, y=None):
        if isinstance(channel, _ChannelEstimator):
            check_is_fitted(channel, "channel_")
            channel = channel.channel_
        self.q_, self.residual_ = ch.fit_depolarizing(channel)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "q_")
        stack, single = check_density_matrices(X, 2)
        out = np.stack([(1 - self.q_) * rho + 0.5 * self.q_ * np.eye(2) for rho in stack])
        return out[0] if single else out
