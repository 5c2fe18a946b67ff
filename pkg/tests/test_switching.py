import math
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from wightman_probe.exceptions import InvalidParameter, OverlapWarning
from wightman_probe.libs.quadrature import adaptive_quad
from wightman_probe.switching import (
    GAUSSIAN,
    Comb,
    NascentDelta,
    ShapeKind,
    ToothShape,
    eval_comb,
    eval_tooth,
    merge_windows,
    tooth_support
)

BUMP = ToothShape(ShapeKind.SMOOTH_BUMP)
PEAK = 10.0 / math.sqrt(2.0 * math.pi)

# teeth well separated at every tail tolerance used below.
comb = Comb(NascentDelta(GAUSSIAN, 0.05), start=0.0, lapse=1.0, teeth=3)


def _area(delta: NascentDelta) -> float:
    lo, hi = delta.support()
    return adaptive_quad(delta, [lo, delta.center, hi]).value.real


def test_eval_tooth_gaussian():
    tooth = NascentDelta(GAUSSIAN, 0.1, 0.0)
    assert eval_tooth(tooth, 0.0) == pytest.approx(3.989423, rel=1e-6)
    assert eval_tooth(tooth, 0.1) == pytest.approx(2.419707, rel=1e-6)
    assert eval_tooth(tooth, 0.0) == pytest.approx(PEAK, rel=1e-14)


def test_eval_tooth_invalid_width():
    with pytest.raises(InvalidParameter):
        NascentDelta(GAUSSIAN, 0.0)
    with pytest.raises(InvalidParameter):
        NascentDelta(GAUSSIAN, -0.1)


def test_unknown_shape():
    with pytest.raises(InvalidParameter):
        ToothShape("triangle")
    with pytest.raises(InvalidParameter):
        ToothShape(ShapeKind.SMOOTH_BUMP, sharpness=0.0)


@pytest.mark.parametrize("shape", [GAUSSIAN, BUMP])
@pytest.mark.parametrize("eta", [0.01, 0.1, 0.5, 2.0])
def test_unit_area(shape, eta):
    assert _area(NascentDelta(shape, eta, 0.3)) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(u=st.floats(min_value=-3.0, max_value=3.0))
def test_profiles_even_and_nonnegative(u):
    for shape in (GAUSSIAN, BUMP):
        assert shape.profile(u) >= 0
        assert shape.profile(u) == shape.profile(-u)


def test_bump_compact_support():
    assert BUMP.profile(1.0) == 0
    assert BUMP.profile(-1.5) == 0
    assert BUMP.profile(0.999) > 0


def test_eval_comb_midpoint():
    with pytest.warns(OverlapWarning):
        two = Comb(NascentDelta(GAUSSIAN, 0.1), start=0.0, lapse=1.0, teeth=2)
    expected = 2.0 * PEAK * math.exp(-12.5)
    assert eval_comb(two, 0.5) == pytest.approx(expected, rel=1e-12)
    assert eval_comb(two, 0.5) == pytest.approx(2.98e-5, rel=1e-2)


def test_single_tooth_comb_is_the_tooth():
    tooth = NascentDelta(GAUSSIAN, 0.1, 0.7)
    single = Comb(tooth, start=0.7, lapse=1.0, teeth=1)
    tau = np.linspace(0.0, 1.4, 29)
    assert np.array_equal(eval_comb(single, tau), eval_tooth(tooth, tau))


def test_three_teeth_at_middle():
    tau = comb.start + comb.lapse
    middle = eval_tooth(comb.tooth_at(1), tau)
    assert eval_comb(comb, tau) == pytest.approx(middle, rel=1e-12)
    assert comb.centers == (0.0, 1.0, 2.0)


@settings(max_examples=100, deadline=None)
@given(tau=st.floats(min_value=-1.0, max_value=3.0))
def test_comb_is_sum_of_teeth(tau):
    assert eval_comb(comb, tau) == sum(eval_tooth(t, tau) for t in comb.teeth_list())


def test_tooth_support():
    lo, hi = tooth_support(NascentDelta(BUMP, 0.2, 1.0))
    assert (lo, hi) == pytest.approx((0.8, 1.2))
    lo, hi = tooth_support(NascentDelta(GAUSSIAN, 0.1, 0.0), 1e-12)
    assert lo == pytest.approx(-0.72, abs=0.01)
    assert hi == pytest.approx(0.72, abs=0.01)
    lo, hi = tooth_support(NascentDelta(GAUSSIAN, 0.1, 0.0), 0.5)
    assert hi == pytest.approx(0.6745 * 0.1, rel=1e-4)
    assert lo == -hi


def test_shrinking_tooth_converges_quadratically():
    errors = []
    for eta in (0.2, 0.1, 0.05):
        tooth = NascentDelta(GAUSSIAN, eta, 0.0)
        lo, hi = tooth.support()
        value = adaptive_quad(lambda t: tooth(t) * np.cos(t), [lo, 0.0, hi]).value.real
        errors.append(abs(value - 1.0))
    assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.02)
    assert errors[1] / errors[2] == pytest.approx(4.0, rel=0.01)


@pytest.mark.parametrize("shape", [GAUSSIAN, BUMP])
def test_fourier_matches_quadrature(shape):
    tooth = NascentDelta(shape, 0.3, 0.4)
    lo, hi = tooth.support()
    for nu in (0.0, 2.5, 11.0):
        direct = adaptive_quad(lambda t: tooth(t) * np.exp(-1j * nu * t), [lo, 0.4, hi], max_width=0.1).value
        assert abs(tooth.fourier(nu) - direct) < 1e-10


def test_comb_fourier_is_sum_of_teeth():
    nu = np.linspace(-20.0, 20.0, 41)
    total = sum(t.fourier(nu) for t in comb.teeth_list())
    assert np.allclose(comb.fourier(nu), total, rtol=0, atol=1e-14)


def test_overlap_warning():
    with pytest.warns(OverlapWarning):
        Comb(NascentDelta(GAUSSIAN, 0.5), lapse=1.0, teeth=2)


def test_invalid_comb():
    with pytest.raises(InvalidParameter):
        Comb(NascentDelta(GAUSSIAN, 0.05), lapse=0.0)
    with pytest.raises(InvalidParameter):
        Comb(NascentDelta(GAUSSIAN, 0.05), teeth=0)
    with pytest.raises(InvalidParameter):
        comb.tooth_at(3)


def test_bandwidth_bounds_the_transform():
    k = GAUSSIAN.bandwidth(1e-9)
    assert abs(GAUSSIAN.fourier(k)) == pytest.approx(1e-9, rel=1e-9)
    k = BUMP.bandwidth(1e-9)
    assert np.max(np.abs(BUMP.fourier(np.linspace(k, k + 20.0, 201)))) < 1e-8


def test_merge_windows():
    assert merge_windows([(2.0, 3.0), (0.0, 1.0), (0.5, 1.5)]) == [(0.0, 1.5), (2.0, 3.0)]
