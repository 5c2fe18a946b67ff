import math
import warnings
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from wightman_probe.correlators import (
    CorrelatorSpec,
    TwoPointFunction,
    closed_form_pullback,
    constant_correlator,
    single_mode_correlator
)
from wightman_probe.delta_limit import (
    EtaSchedule,
    density_of_states,
    eta_sweep,
    nonlocal_delta_limit,
    richardson,
    scaling_experiment,
    single_kick_coefficient
)
from wightman_probe.exceptions import (
    EndpointSingularityWarning,
    InfraredDivergence,
    InvalidParameter,
    QuadratureError
)
from wightman_probe.response import Detector
from wightman_probe.switching import GAUSSIAN, Comb, NascentDelta, ShapeKind, ToothShape
from wightman_probe.trajectories import Worldline

unruh = closed_form_pullback(CorrelatorSpec(trajectory=Worldline.accelerated(1.0)))
SWEEP = EtaSchedule((0.2, 0.1, 0.05, 0.025))


def two_kicks(lapse: float = 1.0, start: float = 0.0, teeth: int = 2, shape: ToothShape = GAUSSIAN) -> Comb:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Comb(NascentDelta(shape, 0.2), start=start, lapse=lapse, teeth=teeth)


def test_density_of_states_examples():
    assert density_of_states(3, 0.0, 2.0) == pytest.approx(2.0 * math.pi, rel=1e-14)
    assert density_of_states(3, 1.0, 0.5) == 0.0
    assert density_of_states(2, 0.0, 3.0) == pytest.approx(math.pi / 2.0 * 3.0, rel=1e-14)
    with pytest.warns(EndpointSingularityWarning):
        assert density_of_states(1, 1.0, 1.0) == math.inf
    with pytest.raises(InvalidParameter):
        density_of_states(4, 0.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(
    d=st.sampled_from([1, 2, 3]),
    omega=st.floats(min_value=0.0, max_value=5.0),
    m=st.floats(min_value=0.0, max_value=2.0),
    eta=st.floats(min_value=0.1, max_value=2.0)
)
def test_density_of_states_homogeneity(d, omega, m, eta):
    assume(abs(omega - m * eta) > 1e-2)
    lhs = density_of_states(d, m, omega / eta)
    rhs = eta ** (1 - d) * density_of_states(d, m * eta, omega)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


def test_single_mode_limit():
    omega, gap, zeta = 1.0, 0.5, 0.7
    value = nonlocal_delta_limit(2, zeta, 0.0, gap, single_mode_correlator(omega))
    assert value == pytest.approx(np.exp(-1j * (gap + omega) * zeta), rel=1e-14)


def test_accelerated_limit():
    value = nonlocal_delta_limit(2, 1.0, 0.0, 2.0 * math.pi, unruh)
    assert value.real == pytest.approx(-0.023323, abs=1e-5)
    assert abs(value.imag) < 1e-15


def test_stationary_limit_counts_pairs():
    zeta, gap = 0.8, 1.3
    value = nonlocal_delta_limit(4, zeta, 0.3, gap, unruh)
    expected = sum(
        (4 - m) * np.exp(-1j * gap * zeta * m) * unruh.limit_lapse(m * zeta) for m in range(1, 4)
    )
    assert value == pytest.approx(expected, rel=1e-12)
    assert nonlocal_delta_limit(1, zeta, 0.3, gap, unruh) == 0j


def test_limit_names_the_failing_pair():
    def undefined(tau, tau_p):
        raise InvalidParameter("no value at this pair")

    def unstable(tau, tau_p):
        raise QuadratureError("did not converge", estimate=0.5, residual=0.1)

    with pytest.raises(InvalidParameter) as err:
        nonlocal_delta_limit(2, 1.0, 0.0, 1.0, TwoPointFunction(undefined))
    assert "(m=1, n=0)" in str(err.value)
    assert err.value.payload["m"] == 1
    with pytest.raises(QuadratureError) as err:
        nonlocal_delta_limit(3, 1.0, 0.0, 1.0, TwoPointFunction(unstable))
    assert err.value.estimate == 0.5
    assert err.value.payload["n"] == 0


def test_limit_rejects_bad_arguments():
    with pytest.raises(InvalidParameter):
        nonlocal_delta_limit(0, 1.0, 0.0, 1.0, unruh)
    with pytest.raises(InvalidParameter):
        nonlocal_delta_limit(2, 0.0, 0.0, 1.0, unruh)


def test_single_mode_sweep_converges_quadratically():
    corr = single_mode_correlator(1.0)
    reference = nonlocal_delta_limit(2, 1.0, 0.0, 1.0, corr)
    sweep = eta_sweep(two_kicks(), Detector(gap=1.0), corr, SWEEP, reference=reference)
    assert sweep.monotone
    assert sweep.order == 2.0
    assert sweep.error_ratios[-1] == pytest.approx(4.0, rel=2e-2)
    assert abs(sweep.extrapolated - reference) < 1e-6
    assert [row[0] for row in sweep.rows()] == list(SWEEP.widths)


def test_accelerated_sweep():
    gap = 2.0 * math.pi
    reference = unruh.limit_lapse(1.0)
    sweep = eta_sweep(two_kicks(), Detector(gap=gap), unruh, SWEEP, reference=reference)
    assert sweep.order == 2.0
    # η = 0.2 is still outside the asymptotic regime (first ratio ≈ 2.5)
    for ratio in sweep.error_ratios[-2:]:
        assert 3.5 <= ratio <= 4.5
    assert abs(sweep.extrapolated - reference) <= 1e-3 * abs(reference)
    assert sweep.monotone


def test_bump_and_gaussian_agree():
    gap = 2.0 * math.pi
    reference = unruh.limit_lapse(1.0)
    bump = ToothShape(ShapeKind.SMOOTH_BUMP)
    gaussian = eta_sweep(two_kicks(), Detector(gap=gap), unruh, SWEEP, reference=reference)
    smooth = eta_sweep(two_kicks(shape=bump), Detector(gap=gap), unruh, SWEEP, reference=reference)
    assert smooth.extrapolated == pytest.approx(gaussian.extrapolated, rel=2e-3)
    assert abs(smooth.extrapolated - reference) <= 2e-3 * abs(reference)


def test_constant_correlator_sweep():
    sweep = eta_sweep(two_kicks(), Detector(gap=0.0), constant_correlator(0.7), SWEEP)
    assert len(set(sweep.values)) == 1
    assert sweep.values[0] == pytest.approx(0.7, rel=1e-14)
    assert sweep.extrapolated == pytest.approx(0.7, rel=1e-13)
    assert sweep.error < 1e-14


def test_sweep_is_start_independent():
    corr = single_mode_correlator(1.0)
    first = eta_sweep(two_kicks(), Detector(gap=1.0), corr, SWEEP)
    shifted = eta_sweep(two_kicks(start=1.7), Detector(gap=1.0), corr, SWEEP)
    assert abs(first.extrapolated - shifted.extrapolated) < 1e-10


def test_richardson_orders():
    etas = [0.2, 0.1, 0.05, 0.025]
    quadratic = [1.0 + 0.3 * e ** 2 for e in etas]
    result, order, observed = richardson(etas, quadratic)
    assert order == 2.0
    assert observed == pytest.approx(2.0, abs=1e-6)
    assert result.value == pytest.approx(1.0, abs=1e-13)
    linear = [1.0 + 0.3 * e for e in etas]
    result, order, observed = richardson(etas, linear)
    assert order == 1.0
    assert result.value == pytest.approx(1.0, abs=1e-13)


def test_eta_schedule_validation():
    assert len(EtaSchedule.geometric()) == 4
    assert EtaSchedule.geometric().widths == pytest.approx((0.2, 0.1, 0.05, 0.025))
    assert EtaSchedule.spanning(0.1, 0.01, 8).widths[-1] == pytest.approx(0.01)
    assert EtaSchedule((0.4, 0.2, 0.1)).relative_to(0.5).widths == (0.2, 0.1, 0.05)
    with pytest.raises(InvalidParameter):
        EtaSchedule((0.1, 0.05))
    with pytest.raises(InvalidParameter):
        EtaSchedule((0.1, 0.2, 0.05))
    with pytest.raises(InvalidParameter):
        EtaSchedule((0.1, 0.05, 0.025), order=3)


def test_single_kick_coefficients():
    assert single_kick_coefficient(3) == pytest.approx(0.00158314, rel=1e-5)
    assert single_kick_coefficient(3) == pytest.approx(1.0 / (64.0 * math.pi ** 2), rel=1e-10)
    assert single_kick_coefficient(3, normalization="canonical") == pytest.approx(
        1.0 / (8.0 * math.pi ** 2), rel=1e-10
    )
    assert single_kick_coefficient(2) == pytest.approx(1.0 / (32.0 * math.sqrt(math.pi)), rel=1e-9)
    bump = single_kick_coefficient(3, ToothShape(ShapeKind.SMOOTH_BUMP))
    assert bump > 0
    assert bump != pytest.approx(single_kick_coefficient(3), rel=1e-3)


def test_single_kick_rejects_low_dimension():
    with pytest.raises(InfraredDivergence) as err:
        single_kick_coefficient(1)
    assert "infrared divergence" in str(err.value)
    with pytest.raises(InvalidParameter):
        single_kick_coefficient(4)


@pytest.mark.parametrize("d,slope", [(3, -2.0), (2, -1.0)])
def test_scaling_slopes(d, slope):
    report = scaling_experiment(d)
    assert report.slope == pytest.approx(slope, abs=0.05)
    assert report.theoretical_slope == slope
    assert not report.inconclusive
    assert report.r_squared > 0.999


def test_scaling_coefficient():
    report = scaling_experiment(3)
    assert report.coefficient == pytest.approx(0.00158314, rel=1e-2)
    assert report.coefficient_ratio == pytest.approx(1.0, rel=1e-2)


@pytest.mark.parametrize("gap", [0.5, 1.0, 4.0])
def test_scaling_slope_ignores_gap(gap):
    report = scaling_experiment(3, det=Detector(gap=gap, coupling=1.0))
    assert report.slope == pytest.approx(-2.0, abs=0.05)


def test_scaling_is_mass_independent():
    massless = scaling_experiment(3)
    massive = scaling_experiment(3, mass=1.0)
    assert massive.slope == pytest.approx(-2.0, abs=0.05)
    assert massive.coefficient == pytest.approx(massless.coefficient, rel=2e-2)


def test_scaling_rejects_low_dimension():
    with pytest.raises(InfraredDivergence):
        scaling_experiment(1)
    with pytest.raises(InvalidParameter):
        scaling_experiment(5)


def test_sweep_to_dict():
    data = eta_sweep(two_kicks(), Detector(gap=1.0), single_mode_correlator(1.0), SWEEP).to_dict()
    assert data["order"] == 2.0
    assert len(data["values"]) == 4
