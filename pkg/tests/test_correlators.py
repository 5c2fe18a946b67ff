import math
import numpy as np
import pytest
from scipy import special
from wightman_probe.correlators import (
    AcceleratedVacuumCorrelator,
    CorrelatorSpec,
    FieldState,
    InertialVacuumCorrelator,
    ThermalImageCorrelator,
    adiabatic_rate,
    closed_form_pullback,
    constant_correlator,
    massive_vacuum_reference,
    mode_integral_correlator,
    rank_one_correlator,
    single_mode_correlator
)
from wightman_probe.correlators.closed import trigamma
from wightman_probe.exceptions import (
    ContractViolation,
    InfraredDivergence,
    InvalidParameter,
    NotSupported
)
from wightman_probe.trajectories import Worldline

W_INERTIAL_1 = -1.0 / (4.0 * math.pi ** 2)
W_UNRUH_1 = -1.0 / (16.0 * math.pi ** 2 * math.sinh(0.5) ** 2)

vacuum = closed_form_pullback(CorrelatorSpec())
unruh = closed_form_pullback(CorrelatorSpec(trajectory=Worldline.accelerated(1.0)))
thermal = closed_form_pullback(CorrelatorSpec(state=FieldState.thermal(2.0 * math.pi)))
modes = mode_integral_correlator(CorrelatorSpec())


def test_closed_form_dispatch():
    assert isinstance(vacuum, InertialVacuumCorrelator)
    assert isinstance(unruh, AcceleratedVacuumCorrelator)
    assert isinstance(thermal, ThermalImageCorrelator)
    assert unruh.acceleration == 1.0
    assert thermal.images == 64


def test_inertial_vacuum_limit():
    value = vacuum.limit_lapse(1.0)
    assert value.real == pytest.approx(-0.0253303, abs=1e-7)
    assert value.real == pytest.approx(W_INERTIAL_1, rel=1e-14)
    assert value.imag == 0


def test_accelerated_vacuum_limit():
    value = unruh.limit_lapse(1.0)
    assert value.real == pytest.approx(-0.023323, abs=1e-5)
    assert value.real == pytest.approx(W_UNRUH_1, rel=1e-13)
    assert abs(value.imag) < 1e-15


def test_unruh_kms_equivalence():
    for s in np.linspace(0.2, 3.0, 15):
        assert abs(unruh.limit_lapse(s) - thermal.limit_lapse(s)) <= 1e-10
    for s in (0.3, 1.0, 2.5):
        assert abs(unruh.lapse(s, 1e-3) - thermal.lapse(s, 1e-3)) <= 1e-10


def test_trigamma_against_scipy():
    w = np.array([0.5, 1.0, 3.7, 25.0, 65.0])
    assert np.allclose(trigamma(w).real, special.polygamma(1, w), rtol=1e-13)


@pytest.mark.parametrize("corr", [vacuum, unruh, thermal, modes, single_mode_correlator(1.3, 2)])
def test_kernel_hermiticity(corr):
    for s in (0.1, 0.5, 1.0, 2.7):
        assert abs(corr.lapse(-s) - np.conj(corr.lapse(s))) <= 1e-10 * max(1.0, abs(corr.lapse(s)))


def test_closed_form_unsupported():
    with pytest.raises(NotSupported) as err:
        closed_form_pullback(CorrelatorSpec(mass=1.0))
    assert "supported" in str(err.value)
    with pytest.raises(NotSupported):
        closed_form_pullback(CorrelatorSpec(dimension=2, trajectory=Worldline.inertial(dimension=2)))
    with pytest.raises(NotSupported):
        closed_form_pullback(
            CorrelatorSpec(state=FieldState.thermal(1.0), trajectory=Worldline.accelerated(1.0))
        )
    with pytest.raises(NotSupported):
        closed_form_pullback(CorrelatorSpec(state=FieldState.single_mode(1.0)))


def test_spec_validation():
    with pytest.raises(InfraredDivergence):
        CorrelatorSpec(dimension=1, trajectory=Worldline.inertial(dimension=1))
    spec = CorrelatorSpec(dimension=1, trajectory=Worldline.inertial(dimension=1), ir_cutoff=0.1)
    assert spec.ir_cutoff == 0.1
    with pytest.raises(InvalidParameter):
        CorrelatorSpec(mass=-1.0)
    with pytest.raises(InvalidParameter):
        CorrelatorSpec(dimension=4)
    with pytest.raises(InvalidParameter):
        CorrelatorSpec(epsilon=0.0)
    with pytest.raises(InvalidParameter):
        CorrelatorSpec(normalization="natural")
    with pytest.raises(InvalidParameter):
        CorrelatorSpec(dimension=2, trajectory=Worldline.inertial(dimension=3))
    with pytest.raises(InvalidParameter):
        FieldState.thermal(-1.0)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("eps", [1e-2, 5e-3])
def test_mode_integral_matches_closed_form(s, eps):
    assert abs(modes.lapse(s, eps) - vacuum.lapse(s, eps)) <= 1e-8 * abs(vacuum.lapse(s, eps))


def test_mode_integral_limit():
    assert modes.limit_lapse(1.0) == pytest.approx(W_INERTIAL_1, rel=1e-5)


def test_massive_mode_integral():
    corr = mode_integral_correlator(CorrelatorSpec(mass=1.0))
    value = corr.limit_lapse(1.0)
    expected = (special.y1(1.0) + 1j * special.j1(1.0)) / (8.0 * math.pi)
    assert abs(value.imag) > 1e-3
    assert abs(value - expected) <= 1e-5 * abs(expected)
    assert corr.reference_lapse(1.0) == pytest.approx(expected, rel=1e-14)
    assert corr.reference_lapse(-1.0) == pytest.approx(np.conj(expected), rel=1e-14)


@pytest.mark.parametrize("dimension", [1, 2])
def test_low_dimensional_massive_mode_integral(dimension):
    spec = CorrelatorSpec(mass=1.0, dimension=dimension, trajectory=Worldline.inertial(dimension=dimension))
    corr = mode_integral_correlator(spec)
    expected = massive_vacuum_reference(dimension, 1.0, 1.0)
    assert abs(corr.limit_lapse(1.0) - expected) <= 1e-5 * abs(expected)


def test_accelerated_mode_integral_limit():
    corr = mode_integral_correlator(CorrelatorSpec(trajectory=Worldline.accelerated(1.0)))
    assert corr.spectrum is None
    assert corr.limit_lapse(1.0) == pytest.approx(W_UNRUH_1, rel=1e-5)


def test_as_printed_normalization():
    corr = mode_integral_correlator(CorrelatorSpec(normalization="as_printed"))
    assert corr.lapse(1.0, 1e-2) == pytest.approx(vacuum.lapse(1.0, 1e-2) / 8.0, rel=1e-8)


def test_mode_integral_needs_vacuum():
    with pytest.raises(NotSupported):
        mode_integral_correlator(CorrelatorSpec(state=FieldState.thermal(1.0)))


def test_coincidence_has_no_limit():
    with pytest.raises(InvalidParameter):
        vacuum.limit_lapse(0.0)
    with pytest.raises(InvalidParameter):
        modes.limit(0.4, 0.4)


def test_single_mode_examples():
    ground = single_mode_correlator(2.0, 0)
    s = np.linspace(-3.0, 3.0, 13)
    assert np.allclose(np.abs(ground.lapse(s)), 1.0, rtol=0, atol=1e-15)
    for n in (0, 1, 2):
        corr = single_mode_correlator(1.0, n)
        assert np.allclose(corr.lapse(s).imag, -np.sin(s), rtol=0, atol=1e-14)
        assert np.all(np.abs(corr.lapse(s)) <= 2 * n + 1 + 1e-14)
    value = single_mode_correlator(1.0, 1).lapse(math.pi / 2)
    assert abs(value - (-1j)) < 1e-15


def test_single_mode_validation():
    with pytest.raises(InvalidParameter):
        single_mode_correlator(0.0)
    with pytest.raises(InvalidParameter):
        single_mode_correlator(1.0, -1)
    with pytest.raises(InvalidParameter):
        single_mode_correlator(1.0, 0.5)


def test_toy_correlators():
    c = constant_correlator(0.3)
    assert c.lapse(np.array([0.0, 5.0])).tolist() == [0.3, 0.3]
    assert c.spectrum.atoms == ((0.0, 0.3),)
    with pytest.raises(InvalidParameter):
        constant_correlator(-1.0)
    mode = rank_one_correlator(lambda t: np.exp(-1j * np.asarray(t)))
    assert not mode.stationary
    assert mode(1.0, 0.0) == pytest.approx(np.exp(-1j))
    assert mode.spectrum is None


def test_with_epsilon():
    coarse = vacuum.with_epsilon(0.1)
    assert coarse.epsilon == 0.1
    assert vacuum.epsilon == 1e-2
    assert coarse.lapse(1.0) == pytest.approx(-1.0 / (4.0 * math.pi ** 2 * (1.0 - 0.1j) ** 2))
    with pytest.raises(InvalidParameter):
        vacuum.with_epsilon(0.0)


def test_non_stationary_reference():
    mode = rank_one_correlator(lambda t: np.cos(np.asarray(t)))
    assert mode.reference(0.0, 1.0) is None
    assert not mode.has_reference
    with pytest.raises(ContractViolation):
        adiabatic_rate(mode, 1.0)
