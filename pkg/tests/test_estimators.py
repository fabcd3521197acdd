import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from bhchannel.capacity import CAPACITY, SINGLE_LETTER
from bhchannel.channels import block_weights, cloning_channel
from bhchannel.estimators import (
    AbsorbingChannel,
    BlockDepolarizingChannel,
    CloningChannel,
    CoherentInformationMaximizer,
    ComplementaryCloningChannel,
    DepolarizingChannel,
    DepolarizingFit,
    HawkingVacuumChannel,
    ReflectingChannel,
)
from bhchannel.exceptions import ContractViolation, ParameterError

KET0 = np.diag([1.0, 0.0])


class TestParams:
    def test_get_and_set(self):
        est = ReflectingChannel(z=0.3)
        assert est.get_params() == {"z": 0.3, "n_max": None, "ell_max": None, "tol": 1e-10}
        est.set_params(z=0.4)
        assert est.z == 0.4

    def test_clone_is_unfitted(self):
        est = CloningChannel(ell=3).fit()
        copy = clone(est)
        assert copy.ell == 3
        assert not hasattr(copy, "channel_")

    def test_transform_before_fit(self):
        with pytest.raises(NotFittedError):
            CloningChannel().transform(KET0)

    @pytest.mark.parametrize(
        "est",
        [CloningChannel(ell=0), DepolarizingChannel(q=2.0), ReflectingChannel(z=1.0), AbsorbingChannel(g=0.0)],
    )
    def test_invalid_hyperparameters_raise_at_fit(self, est):
        with pytest.raises(ParameterError):
            est.fit()


class TestChannelEstimators:
    def test_cloning_transform(self):
        out = CloningChannel(ell=2).fit().transform(KET0)
        np.testing.assert_allclose(out, np.diag([2 / 3, 1 / 3, 0]), atol=1e-15)

    def test_stacked_inputs(self):
        X = np.stack([KET0, np.eye(2) / 2])
        out = CloningChannel(ell=2).fit_transform(X)
        assert out.shape == (2, 3, 3)
        np.testing.assert_allclose(out[1], np.eye(3) / 3, atol=1e-15)

    def test_complement_transform(self):
        out = CloningChannel(ell=2).fit().complement_transform(KET0)
        np.testing.assert_allclose(out, np.diag([2 / 3, 1 / 3]), atol=1e-15)
        swapped = ComplementaryCloningChannel(ell=2).fit().transform(KET0)
        np.testing.assert_allclose(swapped, out, atol=1e-15)

    def test_rejects_non_states(self):
        with pytest.raises(ContractViolation):
            CloningChannel().fit().transform(np.diag([2.0, -1.0]))

    def test_depolarizing(self):
        np.testing.assert_allclose(DepolarizingChannel(q=1.0).fit().transform(KET0), np.eye(2) / 2, atol=1e-15)

    def test_block_depolarizing(self):
        out = BlockDepolarizingChannel(ell=2, q=2 / 3).fit().transform(KET0)
        np.testing.assert_allclose(out, np.diag([2 / 9, 3 / 9, 4 / 9]), atol=1e-15)

    def test_hawking(self):
        est = HawkingVacuumChannel(z=0.5).fit()
        assert est.n_max_ == 40
        assert est.coherent_information(np.ones((1, 1))) == pytest.approx(0.0, abs=1e-10)

    def test_reflecting(self):
        est = ReflectingChannel(z=0.5, ell_max=4).fit()
        p, _ = block_weights(0.5, 4)
        np.testing.assert_allclose(est.weights_, p, atol=1e-8)
        assert est.tail_mass_ == pytest.approx(1 - p.sum(), abs=1e-8)

    def test_absorbing(self):
        est = AbsorbingChannel(g=0.5, n_max=12).fit()
        q = DepolarizingFit().fit(est.channel_.block_map(1)).q_
        assert q == pytest.approx(2 / 3, abs=1e-4)

    def test_choi(self):
        J = CloningChannel(ell=1).fit().choi()
        assert J.min_eigenvalue() == pytest.approx(0.0, abs=1e-12)
        assert J.trace_preservation_residual() <= 1e-12


class TestMaximizer:
    def test_cloner(self):
        est = CoherentInformationMaximizer().fit(CloningChannel(ell=2).fit())
        assert est.value_ == pytest.approx(math.log2(1.5), abs=1e-6)
        assert est.result_.label == CAPACITY
        assert est.predict(np.eye(2) / 2)[0] == pytest.approx(math.log2(1.5), abs=1e-12)

    def test_label_for_plain_channel(self):
        est = CoherentInformationMaximizer().fit(cloning_channel(1))
        assert est.result_.label == SINGLE_LETTER

    def test_grid_too_small(self):
        with pytest.raises(ParameterError):
            CoherentInformationMaximizer(n_directions=4, n_radii=2).fit(CloningChannel().fit())

    def test_unfitted_channel(self):
        with pytest.raises(NotFittedError):
            CoherentInformationMaximizer().fit(CloningChannel())

    def test_optimize_shortcut(self):
        res = ReflectingChannel(z=0.3, ell_max=10).fit().optimize()
        assert res.label == CAPACITY
        assert res.cutoffs[1] == 10


class TestDepolarizingFit:
    def test_recovers_q(self):
        fit = DepolarizingFit().fit(DepolarizingChannel(q=0.25).fit())
        assert fit.q_ == pytest.approx(0.25, abs=1e-14)
        np.testing.assert_allclose(fit.predict(KET0), np.diag([0.875, 0.125]), atol=1e-14)

    def test_predict_before_fit(self):
        with pytest.raises(NotFittedError):
            DepolarizingFit().predict(KET0)
