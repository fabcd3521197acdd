import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhchannel import channels as ch
from bhchannel.capacity import (
    CAPACITY,
    SINGLE_LETTER,
    DualRailQubit,
    bloch_grid,
    capacity_cloner,
    clone_fidelity,
    coherent_information,
    fibonacci_sphere,
    optimize_coherent_information,
    ppt_check,
    symmetric_channel_check,
    unruh_capacity,
    unruh_tail_bound,
    verify_direct_sum_lemma,
)
from bhchannel.exceptions import ParameterError
from bhchannel.fock import auto_cutoff, hawking_isometry, unruh_isometry
from bhchannel.linalg import haar_unitary, random_pure_state
from bhchannel.representations import FunctionChannel, choi_of


def cloner_series(z, L=4000):
    ell = np.arange(1, L + 1, dtype=float)
    return math.fsum(0.5 * (1 - z) ** 3 * ell * (ell + 1) * z ** (ell - 1) * np.log2((ell + 1) / ell))


class TestCoherentInformation:
    def test_identity_maximally_mixed(self):
        assert coherent_information(ch.cloning_channel(1), np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)

    def test_two_copy_cloner(self):
        value = coherent_information(ch.cloning_channel(2), np.eye(2) / 2)
        assert value == pytest.approx(math.log2(3) - 1, abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**31 - 1))
    def test_pure_input_gives_zero(self, ell, seed):
        psi = random_pure_state(2, np.random.default_rng(seed))
        rho = np.outer(psi, psi.conj())
        assert coherent_information(ch.cloning_channel(ell), rho) == pytest.approx(0.0, abs=1e-9)
        assert coherent_information(ch.anticlone_channel(ell), rho) == pytest.approx(0.0, abs=1e-9)

    def test_pure_input_through_isometry(self):
        V = unruh_isometry(0.4, 12)
        psi = np.zeros(13)
        psi[[0, 1]] = [0.6, 0.8]
        assert coherent_information(V, np.outer(psi, psi)) == pytest.approx(0.0, abs=1e-9)

    def test_block_channel_batch_matches_dense(self):
        bc = ch.reflecting_dual_rail_channel(0.5, 30, ell_max=30)
        rho = np.array([[0.7, 0.1 - 0.2j], [0.1 + 0.2j, 0.3]])
        dense = ch.dual_rail_channel_from_isometry(unruh_isometry(0.5, 30, n_inputs=2))
        assert bc.coherent_information_batch(rho[None])[0] == pytest.approx(
            dense.coherent_information(rho), abs=1e-12
        )


class TestOptimizer:
    @pytest.mark.parametrize("ell", [1, 2, 3])
    def test_cloners(self, ell):
        res = optimize_coherent_information(ch.cloning_channel(ell))
        assert res.value == pytest.approx(math.log2((ell + 1) / ell), abs=1e-6)
        assert res.bloch_radius <= 1e-3
        assert res.residual < 1e-9
        assert res.iterations >= 513
        assert res.grid_max <= res.value + 1e-15

    def test_anticlone_capacity_vanishes(self):
        res = optimize_coherent_information(ch.anticlone_channel(2))
        assert res.value <= 1e-8
        assert res.value >= -1e-8

    def test_unitary_conjugation_invariance(self):
        U = haar_unitary(2, np.random.default_rng(8))
        cl = ch.cloning_channel(3)
        twisted = FunctionChannel(
            lambda X: cl.apply(U @ X @ U.conj().T), lambda X: cl.complement_apply(U @ X @ U.conj().T), 2
        )
        base = optimize_coherent_information(cl).value
        assert optimize_coherent_information(twisted).value == pytest.approx(base, abs=1e-8)

    def test_one_dimensional_input(self):
        res = optimize_coherent_information(hawking_isometry(0.3, 30))
        assert res.value == pytest.approx(0.0, abs=1e-10)
        assert res.iterations == 1

    def test_label_is_single_letter_by_default(self):
        assert optimize_coherent_information(ch.cloning_channel(1)).label == SINGLE_LETTER
        assert optimize_coherent_information(ch.cloning_channel(1), label=CAPACITY).label == CAPACITY

    def test_block_channel_cutoffs_recorded(self):
        bc = ch.reflecting_dual_rail_channel(0.3, 20, ell_max=8)
        res = optimize_coherent_information(bc)
        assert res.cutoffs == (20, 8)
        assert res.tail_bound == pytest.approx(bc.tail_mass, abs=1e-15)

    def test_evaluation_cap_is_reported(self):
        res = optimize_coherent_information(ch.cloning_channel(2), 1e-9, max_evals=520)
        assert res.notes
        assert res.residual >= 1e-9

    def test_grid(self):
        assert bloch_grid().shape == (513, 3)
        np.testing.assert_allclose(np.linalg.norm(fibonacci_sphere(64), axis=1), 1.0, atol=1e-15)


class TestClosedForms:
    def test_cloner_values(self):
        assert capacity_cloner(1) == 1.0
        assert capacity_cloner(2) == pytest.approx(math.log2(1.5), abs=1e-15)

    def test_cloner_decreasing(self):
        values = [capacity_cloner(ell) for ell in range(1, 200)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] < 0.01

    def test_cloner_zero_copies(self):
        with pytest.raises(ParameterError):
            capacity_cloner(0)

    def test_cold_horizon(self):
        res = unruh_capacity(0.0)
        assert res.value == 1.0
        assert res.label == CAPACITY

    def test_monotone(self):
        values = [unruh_capacity(z).value for z in np.linspace(0.0, 0.95, 20)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_hot_limit(self):
        assert unruh_capacity(0.999, 1e-8).value < 0.01

    @pytest.mark.parametrize("z", [0.1, 0.5, 0.8])
    def test_series_value(self, z):
        res = unruh_capacity(z, 1e-13)
        assert res.value == pytest.approx(cloner_series(z), abs=1e-12)
        assert res.tail_bound < 1e-13

    def test_tail_bound_is_a_bound(self):
        z, L = 0.7, 15
        ell = np.arange(L + 1, 3000, dtype=float)
        tail = np.sum(0.5 * (1 - z) ** 3 * ell * (ell + 1) * z ** (ell - 1) * np.log2((ell + 1) / ell))
        assert tail <= unruh_tail_bound(z, L)

    def test_series_matches_constructed_channel(self):
        z = 0.5
        bc = ch.reflecting_dual_rail_channel(z, ch.tail_cutoff(z, 1e-10))
        numeric = optimize_coherent_information(bc).value
        assert numeric == pytest.approx(unruh_capacity(z).value, abs=1e-8)

    def test_z_one(self):
        with pytest.raises(ParameterError):
            unruh_capacity(1.0)


class TestPpt:
    def test_identity_is_not_ppt(self):
        ok, lam = ppt_check(choi_of(ch.cloning_channel(1)))
        assert not ok
        assert lam == pytest.approx(-0.5, abs=1e-12)

    def test_depolarizing_boundary(self):
        ok, lam = ppt_check(choi_of(ch.depolarizing_channel(2 / 3)))
        assert ok
        assert lam == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("ell", range(1, 7))
    def test_anticlones(self, ell):
        ok, lam = ppt_check(choi_of(ch.anticlone_channel(ell)))
        assert ok
        assert lam >= -1e-10


class TestSymmetric:
    @pytest.mark.parametrize("z", [0.1, 0.5, 0.9])
    def test_hawking_vacuum(self, z):
        assert symmetric_channel_check(hawking_isometry(z, auto_cutoff(z, 1e-12)))

    def test_dual_rail_unruh(self):
        assert not symmetric_channel_check(ch.embed_dual_rail(unruh_isometry(0.5, 5, n_inputs=2)))

    def test_identity(self):
        assert not symmetric_channel_check(ch.qubit_isometry_identity())


class TestDirectSum:
    def test_single_channel(self):
        rep = verify_direct_sum_lemma([ch.cloning_channel(2)], [1.0])
        assert rep.difference == pytest.approx(0.0, abs=1e-9)
        assert rep.passed

    def test_identity_and_two_copy_cloner(self):
        rep = verify_direct_sum_lemma([ch.cloning_channel(1), ch.cloning_channel(2)], [0.5, 0.5])
        assert rep.direct_sum_value == pytest.approx(0.5 + 0.5 * math.log2(1.5), abs=1e-6)
        assert rep.passed

    def test_two_and_three_copy_cloners(self):
        rep = verify_direct_sum_lemma([ch.cloning_channel(2), ch.cloning_channel(3)], [0.3, 0.7])
        expected = 0.3 * math.log2(3 / 2) + 0.7 * math.log2(4 / 3)
        assert rep.direct_sum_value == pytest.approx(expected, abs=1e-6)
        assert rep.weighted_value == pytest.approx(expected, abs=1e-6)

    def test_qubit_inputs_only(self):
        with pytest.raises(ParameterError):
            verify_direct_sum_lemma([ch.qubit_isometry_identity(3)], [1.0])


class TestCloneFidelity:
    def test_two_copies(self):
        assert clone_fidelity(2, DualRailQubit(1.0, 0.0)) == pytest.approx(5 / 6, abs=1e-12)

    def test_two_copies_random_inputs(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            a, b = random_pure_state(2, rng)
            assert clone_fidelity(2, (a, b)) == pytest.approx(5 / 6, abs=1e-9)

    @pytest.mark.parametrize("ell", range(3, 7))
    def test_more_copies(self, ell):
        assert clone_fidelity(ell, (0.6, 0.8j)) == pytest.approx((2 * ell + 1) / (3 * ell), abs=1e-12)

    @pytest.mark.parametrize("ell", [1, 7])
    def test_out_of_range(self, ell):
        with pytest.raises(ParameterError):
            clone_fidelity(ell, (1.0, 0.0))


class TestDualRailQubit:
    def test_normalization_enforced(self):
        with pytest.raises(ParameterError):
            DualRailQubit(1.0, 1.0)

    def test_normalized(self):
        q = DualRailQubit.normalized(3, 4j)
        assert abs(q.a) ** 2 + abs(q.b) ** 2 == pytest.approx(1.0, abs=1e-15)
        assert np.trace(q.density_matrix()).real == pytest.approx(1.0)

    def test_zero_vector(self):
        with pytest.raises(ParameterError):
            DualRailQubit.normalized(0, 0)
