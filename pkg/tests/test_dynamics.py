import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from telegraph_qubit import DensityMatrix2, DomainError, PureStateAngles, QubitParams, eigendecompose, evolve

from .conftest import state_angles

unit_disc = st.builds(
    lambda r, ang: r * complex(math.cos(ang), math.sin(ang)),
    st.floats(0.0, 1.0),
    st.floats(0.0, 2 * math.pi),
)


def test_plus_state_at_start():
    rho = evolve(PureStateAngles(math.pi / 2, 0.0), QubitParams(0.0), 1.0, 0.0)
    assert rho.ee == pytest.approx(0.5)
    assert rho.eg == pytest.approx(0.5)


@pytest.mark.parametrize("G", [1.0, 0.3 - 0.2j, 0.0])
def test_excited_state_is_invariant(G):
    rho = evolve(PureStateAngles(0.0, 1.0), QubitParams(2.0), G, 3.0)
    assert rho.ee == 1.0 and rho.eg == 0.0


def test_coherence_scales_with_G():
    rho = evolve(PureStateAngles(math.pi / 2, 0.0), QubitParams(), 0.5, 0.0)
    assert rho.eg == pytest.approx(0.25)


def test_coherence_phase_convention():
    # rho_eg = sin(theta)/2 exp(-i(phi + w0 t)) conj(G)
    theta, phi, w0, t, G = 1.1, 0.7, 2.5, 0.4, 0.6 + 0.3j
    rho = evolve(PureStateAngles(theta, phi), QubitParams(w0), G, t)
    assert rho.eg == pytest.approx(0.5 * math.sin(theta) * np.exp(-1j * (phi + w0 * t)) * np.conj(G))


def test_rejects_unphysical_G():
    with pytest.raises(DomainError):
        evolve(PureStateAngles(1.0), QubitParams(), 1.01, 0.0)


def test_density_matrix_validation():
    with pytest.raises(DomainError):
        DensityMatrix2(0.5, 0.6)
    with pytest.raises(DomainError):
        DensityMatrix2(1.2, 0.0)


@given(state_angles(), unit_disc, st.floats(0.0, 10.0), st.floats(0.0, 50.0))
def test_physicality(state, G, w0, t):
    rho = evolve(state, QubitParams(w0), G, t)
    assert rho.purity() <= 1 + 1e-12
    assert abs(rho.eg) == pytest.approx(0.5 * abs(math.sin(state.theta)) * abs(G), abs=1e-15)
    assert rho.ee == pytest.approx(0.5 * (1 + math.cos(state.theta)))


@given(state_angles(), unit_disc, st.floats(0.0, 10.0))
def test_omega0_only_rotates_phase(state, G, t):
    a = evolve(state, QubitParams(0.0), G, t)
    b = evolve(state, QubitParams(3.7), G, t)
    assert abs(a.eg) == pytest.approx(abs(b.eg), abs=1e-15)


@given(state_angles())
def test_initial_state_is_projector(state):
    rho = evolve(state, QubitParams(1.3), 1.0, 0.0)
    psi = np.array([math.cos(state.theta / 2), np.exp(1j * state.phi) * math.sin(state.theta / 2)])
    np.testing.assert_allclose(rho.matrix(), np.outer(psi, psi.conj()), atol=1e-15)


class TestEigendecompose:
    def test_pure_plus(self):
        p1, p2, v1, v2 = eigendecompose(DensityMatrix2(0.5, 0.5))
        assert (p1, p2) == pytest.approx((1.0, 0.0), abs=1e-15)
        np.testing.assert_allclose(v1, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)

    def test_maximally_mixed_uses_computational_basis(self):
        p1, p2, v1, v2 = eigendecompose(DensityMatrix2(0.5, 0.0))
        assert p1 == p2 == 0.5
        np.testing.assert_array_equal(v1, [1, 0])
        np.testing.assert_array_equal(v2, [0, 1])

    def test_partially_mixed(self):
        p1, p2, *_ = eigendecompose(DensityMatrix2(0.5, 0.25))
        assert (p1, p2) == pytest.approx((0.75, 0.25))

    @given(state_angles(), unit_disc)
    def test_against_eigh(self, state, G):
        rho = evolve(state, QubitParams(), G, 0.0)
        p1, p2, v1, v2 = eigendecompose(rho)
        ref = np.linalg.eigh(rho.matrix())[0][::-1]
        assert (p1, p2) == pytest.approx(tuple(ref), abs=1e-12)
        assert p1 >= p2 >= -1e-12
        assert p1 + p2 == pytest.approx(1, abs=1e-12)
        V = np.column_stack([v1, v2])
        np.testing.assert_allclose(V.conj().T @ V, np.eye(2), atol=1e-12)
        recon = p1 * np.outer(v1, v1.conj()) + p2 * np.outer(v2, v2.conj())
        assert np.abs(recon - rho.matrix()).max() < 1e-12
        for v in (v1, v2):
            lead = v[np.flatnonzero(np.abs(v) > 1e-15)[0]]
            assert lead.imag == 0 and lead.real > 0
