import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercnot import (
    CavityParams,
    ReflectionPair,
    Register,
    qd_scatter,
    reflect_cold,
    reflect_hot,
    scatter_matrix,
    tensor_state,
)
from conftest import random_state
from oracles import embed_matrix

SQ2 = np.sqrt(2.0)

POL = Register("p.pol", ("R", "L"))
SPIN = Register("e", ("up", "down"))


def params(**kw):
    defaults = dict(g=1.0, kappa_s=0.0, gamma=0.1, detuning=0.5)
    defaults.update(kw)
    return CavityParams(**defaults)


# -- reflection coefficients ----------------------------------------------


def test_cold_reflection_on_resonance():
    assert abs(reflect_cold(params(detuning=0.0)) - (-1.0)) < 1e-15


def test_cold_reflection_at_half_linewidth_detuning():
    r0 = reflect_cold(params())
    assert abs(r0 - (-1j)) < 1e-15
    assert abs(np.angle(r0) + np.pi / 2) < 1e-12


def test_cold_reflection_vanishes_at_matched_leakage():
    assert abs(reflect_cold(params(kappa_s=1.0, detuning=0.0))) < 1e-15


def test_hot_equals_cold_at_zero_coupling():
    p = params(g=0.0, kappa_s=0.3, detuning=0.7)
    assert reflect_hot(p) == reflect_cold(p)


@pytest.mark.parametrize("detuning", [-1.0, -0.3, 0.0, 0.5, 1.0])
def test_hot_reflection_strong_coupling_limit(detuning):
    r = reflect_hot(params(g=1e6, detuning=detuning))
    assert abs(r - 1.0) < 1e-9
    assert abs(np.angle(r)) < 1e-9


def test_hot_reflection_regression_fixture():
    # direct numeric evaluation of the steady-state formula, frozen
    p = params(g=2.4)
    dipole = 1j * (0.0 - 0.5) + 0.05
    cav = 1j * (0.0 - 0.5) + 0.5
    direct = 1 - dipole / (dipole * cav + 2.4**2)
    r = reflect_hot(p)
    assert abs(r - direct) < 1e-15
    assert abs(r - (0.9865117210457852 + 0.08966408731483125j)) < 1e-12


def test_reflection_magnitudes_bounded_on_grid():
    for g in np.linspace(0.0, 3.0, 7):
        for ks in np.linspace(0.0, 2.0, 5):
            for det in np.linspace(-2.0, 2.0, 9):
                p = CavityParams(g=float(g), kappa_s=float(ks), gamma=0.1, detuning=float(det))
                assert abs(reflect_hot(p)) <= 1 + 1e-12
                assert abs(reflect_cold(p)) <= 1 + 1e-12


def test_params_validation():
    with pytest.raises(ValueError):
        CavityParams(g=-0.1)
    with pytest.raises(ValueError):
        CavityParams(g=1.0, kappa=0.0)
    with pytest.raises(ValueError):
        CavityParams(g=1.0, gamma=-1.0)


# -- reflection pairs -------------------------------------------------------


def test_reflection_pair_phases():
    pair = ReflectionPair.from_params(params(g=2.4))
    assert abs(pair.phi_cold + np.pi / 2) < 1e-12
    assert abs(pair.delta_phi - (pair.phi_hot - pair.phi_cold)) < 1e-15
    assert abs(pair.faraday_up + pair.faraday_down) < 1e-15
    assert abs(pair.faraday_up - (pair.phi_cold - pair.phi_hot) / 2) < 1e-15


def test_reflection_pair_rejects_gain():
    with pytest.raises(ValueError):
        ReflectionPair(1.2, 1.0)


def test_ideal_pair_values():
    pair = ReflectionPair.ideal()
    assert pair.r_cold == -1j and pair.r_hot == 1.0
    assert abs(pair.delta_phi - np.pi / 2) < 1e-15


def test_side_leakage_warning_threshold():
    with pytest.warns(UserWarning):
        ReflectionPair.from_params(params(kappa_s=1.4))
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ReflectionPair.from_params(params(kappa_s=1.0))


# -- scattering map -----------------------------------------------------------


def test_ideal_scatter_phase_table():
    # hot pairs (L,up) and (R,down) keep their amplitude; cold pairs get -i
    cases = {
        ("R", "up"): -1j,
        ("L", "up"): 1.0,
        ("R", "down"): 1.0,
        ("L", "down"): -1j,
    }
    for (pol, spin), phase in cases.items():
        st_ = tensor_state(
            [
                (POL, (1, 0) if pol == "R" else (0, 1)),
                (SPIN, (1, 0) if spin == "up" else (0, 1)),
            ]
        )
        out = qd_scatter(st_, "p.pol", "e")
        assert abs(out.amplitude(pol, spin) - phase) < 1e-15


def test_physical_scatter_with_ideal_amplitudes_matches_ideal(rng):
    st_ = random_state((POL, SPIN), rng)
    ideal = qd_scatter(st_, "p.pol", "e")
    explicit = qd_scatter(st_, "p.pol", "e", ReflectionPair(-1j, 1.0))
    np.testing.assert_allclose(ideal.amplitudes, explicit.amplitudes, atol=1e-12)


def test_lossy_scatter_shrinks_norm(rng):
    pair = ReflectionPair(0.9 * np.exp(-1j * np.pi / 2), 0.95)
    st_ = random_state((POL, SPIN), rng)
    out = qd_scatter(st_, "p.pol", "e", pair)
    assert out.norm2 < st_.norm2
    # oracle: explicit 4x4 diagonal matrix product
    diag = np.diag([pair.r_cold, pair.r_hot, pair.r_hot, pair.r_cold])
    np.testing.assert_allclose(out.amplitudes, diag @ st_.amplitudes, atol=1e-14)


def test_scatter_norm_matches_weighted_magnitudes(rng):
    pair = ReflectionPair.from_params(params(g=0.8, kappa_s=0.4))
    st_ = random_state((SPIN, POL), rng)  # reversed register order on purpose
    out = qd_scatter(st_, "p.pol", "e", pair)
    weights = np.abs(st_.amplitudes) ** 2
    mags = np.abs(embed_matrix(2, [1, 0], scatter_matrix(pair)).diagonal()) ** 2
    assert abs(out.norm2 - float(weights @ mags)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_ideal_scatter_is_unitary(seed):
    gen = np.random.default_rng(seed)
    st_ = random_state((POL, SPIN), gen)
    out = qd_scatter(st_, "p.pol", "e")
    assert abs(out.norm2 - st_.norm2) < 1e-12


def test_scatter_requires_registers(rng):
    st_ = random_state((POL, SPIN), rng)
    with pytest.raises(ValueError):
        qd_scatter(st_, "missing", "e")
