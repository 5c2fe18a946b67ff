import math
import pytest
from wightman_probe.correlators import (
    CorrelatorSpec,
    FieldState,
    adiabatic_rate,
    closed_form_pullback,
    commutator_spectrum,
    constant_correlator,
    mode_integral_correlator,
    rank_one_correlator,
    single_mode_correlator,
    symmetric_spectrum
)
from wightman_probe.exceptions import ContractViolation, InvalidParameter, NotSupported
from wightman_probe.trajectories import Worldline

vacuum = closed_form_pullback(CorrelatorSpec())
unruh = closed_form_pullback(CorrelatorSpec(trajectory=Worldline.accelerated(1.0)))


def thermal(beta: float):
    return closed_form_pullback(CorrelatorSpec(state=FieldState.thermal(beta)))


def test_vacuum_does_not_excite():
    assert abs(adiabatic_rate(vacuum, 1.0)) <= 1e-6
    assert abs(adiabatic_rate(vacuum, 1.0, method="time")) <= 1e-6


def test_vacuum_deexcitation_rate():
    expected = 1.0 / (2.0 * math.pi)
    assert adiabatic_rate(vacuum, -1.0) == pytest.approx(expected, rel=1e-4)
    assert adiabatic_rate(vacuum, -1.0, method="time") == pytest.approx(
        adiabatic_rate(vacuum, -1.0), rel=1e-5
    )


@pytest.mark.parametrize("beta_omega", [0.5, 1.0, 3.0])
def test_detailed_balance(beta_omega):
    beta = 2.0
    omega = beta_omega / beta
    ratio = adiabatic_rate(thermal(beta), -omega) / adiabatic_rate(thermal(beta), omega)
    assert ratio == pytest.approx(math.exp(beta_omega), rel=1e-2)


@pytest.mark.parametrize("omega", [0.25, 0.5, 1.0])
def test_unruh_temperature(omega):
    ratio = adiabatic_rate(unruh, -omega) / adiabatic_rate(unruh, omega)
    assert ratio == pytest.approx(math.exp(2.0 * math.pi * omega), rel=1e-2)


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
def test_commutator_is_state_independent(omega):
    vac = commutator_spectrum(vacuum, omega)
    hot = commutator_spectrum(thermal(1.0), omega)
    assert hot == pytest.approx(vac, rel=1e-4)
    assert vac == pytest.approx(-omega / (2.0 * math.pi), rel=1e-4)


@pytest.mark.parametrize("omega", [0.3, 1.0, 1.002])
def test_single_mode_commutator_ignores_occupation(omega):
    ground = commutator_spectrum(single_mode_correlator(1.0, 0), omega)
    for n in (1, 2):
        assert commutator_spectrum(single_mode_correlator(1.0, n), omega) == pytest.approx(ground, rel=1e-12)


def test_symmetric_spectrum_grows_with_occupation():
    low = symmetric_spectrum(single_mode_correlator(1.0, 0), -1.0)
    high = symmetric_spectrum(single_mode_correlator(1.0, 2), -1.0)
    assert high == pytest.approx(5.0 * low, rel=1e-12)


def test_commutator_vanishes_at_zero_gap():
    assert commutator_spectrum(vacuum, 0.0) == 0
    assert commutator_spectrum(constant_correlator(2.0), 0.0) == 0


def test_non_stationary_is_rejected():
    with pytest.raises(ContractViolation):
        adiabatic_rate(rank_one_correlator(lambda t: t), 1.0)


def test_invalid_arguments():
    with pytest.raises(InvalidParameter):
        adiabatic_rate(vacuum, 1.0, window=0.0)
    with pytest.raises(InvalidParameter):
        adiabatic_rate(vacuum, 1.0, method="fft")


def test_spectral_route_needs_a_density():
    accelerated_modes = mode_integral_correlator(CorrelatorSpec(trajectory=Worldline.accelerated(1.0)))
    with pytest.raises(NotSupported):
        adiabatic_rate(accelerated_modes, 1.0, method="spectral")
