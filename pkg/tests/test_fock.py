import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhchannel.exceptions import ParameterError
from bhchannel.fock import (
    AbsorbParam,
    PureStateVector,
    SqueezeParam,
    absorb_auto_cutoff,
    absorb_isometry_closed_form,
    absorb_isometry_expm,
    auto_cutoff,
    greybody_alpha,
    hawking_isometry,
    reflecting_params,
    sorkin_hamiltonian,
    squeezer_vacuum_state,
    total_excitation,
    unruh_isometry,
)
from bhchannel.linalg import partial_trace


def basis_index(dims, occupation):
    return int(np.ravel_multi_index(occupation, dims))


class TestParams:
    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 5.0))
    def test_z_is_tanh_squared(self, r):
        assert SqueezeParam(r).z == pytest.approx(math.tanh(r) ** 2, abs=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.05, 10.0), st.floats(0.05, 10.0))
    def test_from_frequency(self, omega, kappa):
        p = SqueezeParam.from_frequency(omega, kappa)
        assert math.tanh(p.r) == pytest.approx(math.exp(-math.pi * omega / kappa), abs=1e-12)
        assert p.z == pytest.approx(math.exp(-2 * math.pi * omega / kappa), abs=1e-12)

    def test_from_mass(self):
        p = SqueezeParam.from_mass(1.0, 1.0)
        assert p.kappa == 0.5
        assert math.tanh(p.r) == pytest.approx(math.exp(-2 * math.pi), abs=1e-14)

    def test_from_z_round_trip(self):
        assert SqueezeParam.from_z(0.3).z == pytest.approx(0.3, abs=1e-14)

    def test_inconsistent_frequency(self):
        with pytest.raises(ParameterError):
            SqueezeParam(0.5, omega=1.0, kappa=1.0)

    def test_negative_r(self):
        with pytest.raises(ParameterError):
            SqueezeParam(-0.1)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1e-3, 20.0))
    def test_absorb_coefficients(self, g):
        p = AbsorbParam(g)
        assert p.A == pytest.approx(2 * g / (2 + g**2), abs=1e-14)
        assert p.B == pytest.approx(-(g**2) / (2 + g**2), abs=1e-14)

    def test_absorb_needs_positive_coupling(self):
        with pytest.raises(ParameterError):
            AbsorbParam(0.0)

    def test_auto_cutoffs(self):
        assert auto_cutoff(0.5, 1e-12) == 40
        assert auto_cutoff(0.0) == 1
        assert 0.5**auto_cutoff(0.5, 1e-6) <= 1e-6
        assert absorb_auto_cutoff(0.5, 1e-10) >= 4


class TestSqueezer:
    def test_no_squeezing(self):
        s = squeezer_vacuum_state(SqueezeParam(0.0), 5)
        expected = np.zeros(36)
        expected[0] = 1.0
        np.testing.assert_array_equal(s.amplitudes, expected)
        assert s.residual == 0.0

    def test_amplitudes(self):
        z = 0.25
        s = squeezer_vacuum_state(z, 40)
        n = np.arange(41)
        diag = s.amplitudes.reshape(41, 41)[n, n]
        np.testing.assert_allclose(diag, np.sqrt((1 - z) * z**n), atol=1e-14)
        assert np.abs(np.linalg.norm(s.amplitudes) - 1) <= 1e-10

    @pytest.mark.parametrize("z", [0.1, 0.5, 0.9])
    def test_residual(self, z):
        s = squeezer_vacuum_state(z, 30)
        assert s.residual == pytest.approx(z**31, rel=1e-9, abs=1e-15)

    def test_z_one_rejected(self):
        with pytest.raises(ParameterError):
            squeezer_vacuum_state(1.0, 5)

    @pytest.mark.parametrize("z", [0.1, 0.5, 0.9])
    def test_marginals_equal(self, z):
        s = squeezer_vacuum_state(z, auto_cutoff(z, 1e-12))
        np.testing.assert_allclose(s.reduced(0), s.reduced(1), atol=1e-10)

    def test_hawking_isometry_single_input(self):
        V = hawking_isometry(0.5, 20)
        assert V.input_dim == 1
        assert V.isometry_residual() <= 1e-12


class TestUnruh:
    def test_no_acceleration_is_identity_into_b(self):
        V = unruh_isometry(0.0, 6)
        W = V.column_tensor()
        np.testing.assert_allclose(W[:, 0, :], np.eye(7), atol=1e-15)
        np.testing.assert_allclose(W[:, 1:, :], 0.0, atol=1e-15)

    def test_vacuum_column_is_squeezer(self):
        z = 0.3
        V = unruh_isometry(z, 25)
        s = squeezer_vacuum_state(z, 25)
        np.testing.assert_allclose(V.V[:, 0], s.amplitudes, atol=1e-14)

    def test_single_amplitude(self):
        z, n, m, n_max = 0.5, 1, 2, 80
        V = unruh_isometry(z, n_max)
        N = n_max + 1
        cosh_sq = 1.0 / (1.0 - z)
        expected = math.sqrt(math.comb(n + m, n)) * z ** (m / 2) / cosh_sq ** ((1 + n) / 2)
        assert expected == pytest.approx(math.sqrt(3) / 4, abs=1e-15)
        assert V.V[(n + m) * N + m, n].real == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("z", [0.2, 0.5, 0.7])
    def test_column_normalization_series(self, z):
        # raw norms follow sum_m C(n+m, n) z^m = (1-z)^-(n+1), so residuals shrink with n_max
        V = unruh_isometry(z, 60, n_inputs=4)
        assert np.all(V.column_residuals >= -1e-14)
        assert V.column_residuals[0] == pytest.approx(z**61, rel=1e-9, abs=1e-15)
        assert V.isometry_residual() <= 1e-12

    def test_too_many_inputs(self):
        with pytest.raises(ParameterError):
            unruh_isometry(0.5, 3, n_inputs=5)


class TestSorkin:
    @pytest.mark.parametrize("g", [0.0, 0.5, 1.7])
    def test_hermitian(self, g):
        H = sorkin_hamiltonian(g, 3)
        np.testing.assert_allclose(H, H.conj().T, atol=1e-12)

    def test_zero_coupling(self):
        np.testing.assert_array_equal(sorkin_hamiltonian(0.0, 3), 0)

    def test_pair_creation_element(self):
        g, dims = 0.7, (4, 4, 4)
        H = sorkin_hamiltonian(g, 3)
        assert H[basis_index(dims, (1, 1, 0)), basis_index(dims, (0, 0, 0))] == pytest.approx(1j * g)

    def test_hopping_element(self):
        g, dims = 0.7, (4, 4, 4)
        H = sorkin_hamiltonian(g, 3)
        assert H[basis_index(dims, (1, 0, 0)), basis_index(dims, (0, 0, 1))] == pytest.approx(1j * g)


class TestAbsorbing:
    def test_zero_coupling_is_transparent(self):
        V = absorb_isometry_closed_form(0.0, 4)
        dims = V.output_dims
        assert abs(V.V[basis_index(dims, (0, 0, 1)), 1]) == pytest.approx(1.0, abs=1e-15)
        assert abs(V.V[basis_index(dims, (0, 0, 0)), 0]) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("g", [0.1, 0.5, 1.0])
    def test_vacuum_amplitude(self, g):
        n_max = 40
        V = absorb_isometry_closed_form(g, n_max)
        raw = V.V[0, 0] * math.sqrt(1 - V.column_residuals[0])
        assert raw.real == pytest.approx(2 / (2 + g**2), abs=1e-14)

    @pytest.mark.parametrize("g,n_max", [(0.2, 10), (0.5, 10)])
    def test_matches_expm_oracle(self, g, n_max):
        A = absorb_isometry_closed_form(g, n_max)
        B = absorb_isometry_expm(g, n_max)
        low = total_excitation(A.output_dims) <= n_max // 3
        assert np.abs(A.V[low] - B.V[low]).max() <= 1e-6

    def test_reduced_matches_partial_trace(self):
        V = absorb_isometry_closed_form(0.5, 4)
        state = PureStateVector(V.V[:, 1], V.output_dims)
        for keep in (0, [1, 2], [2, 0]):
            np.testing.assert_allclose(
                state.reduced(keep), partial_trace(state.density_matrix(), V.output_dims, keep), atol=1e-14
            )

    def test_closed_form_is_isometry(self):
        V = absorb_isometry_closed_form(0.5, 14)
        assert V.isometry_residual() <= 1e-12
        assert np.all(np.abs(V.column_residuals) <= 1e-6)

    def test_total_excitation(self):
        np.testing.assert_array_equal(total_excitation((2, 3)), [0, 1, 2, 1, 2, 3])


class TestPhysicalParams:
    def test_greybody_high_frequency(self):
        assert greybody_alpha(0.4, 1000.0, 1.0) ** 2 == pytest.approx(0.4, abs=1e-15)

    def test_greybody_opaque(self):
        assert greybody_alpha(0.0, 1.0, 1.0) == 0.0

    def test_greybody_value(self):
        assert greybody_alpha(0.5, 1.0, 1.0) ** 2 == pytest.approx(0.5 / (1 - math.exp(-1)), rel=1e-14)

    @pytest.mark.parametrize("args", [(1.0, 1.0, 1.0), (-0.1, 1.0, 1.0), (0.5, 0.0, 1.0), (0.5, 1.0, -1.0)])
    def test_greybody_out_of_range(self, args):
        with pytest.raises(ParameterError):
            greybody_alpha(*args)

    def test_reflecting(self):
        assert reflecting_params(1.0).z == pytest.approx(0.5, abs=1e-14)
        assert reflecting_params(1e-6).z < 1e-11
        assert reflecting_params(1e6).z > 1 - 1e-11
        assert reflecting_params(2.0).gamma_sq == pytest.approx(5.0)
