import math
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from wightman_probe.exceptions import DomainError, InvalidParameter
from wightman_probe.trajectories import (
    Event,
    Worldline,
    WorldlineKind,
    four_velocity_norm,
    interval,
    lapse_interval,
    position
)

rest = Worldline.inertial(dimension=3)
moving = Worldline.inertial(velocity=(0.3, -0.4), offset=(1.0, 2.0, 0.5), dimension=3)
unruh = Worldline.accelerated(1.0, dimension=3)


def test_accelerated_apex():
    e = position(unruh, 0.0)
    assert e.t == 0.0
    assert tuple(e.x) == (1.0, 0.0, 0.0)


def test_rest_position():
    e = position(Worldline.inertial(dimension=1), 2.0)
    assert e.t == 2.0
    assert tuple(e.x) == (0.0,)


def test_accelerated_position():
    e = position(Worldline.accelerated(2.0, dimension=1), 1.0)
    assert e.t == pytest.approx(1.81343, abs=1e-5)
    assert e.x[0] == pytest.approx(1.88109, abs=1e-5)


def test_interval_examples():
    zeta = 1.7
    assert interval(Event(zeta, (0.0,)), Event(0.0, (0.0,))) == zeta
    assert interval(Event(0.0, (0.0,)), Event(0.0, (0.0,))) == 0.0
    for s in (-2.0, 0.5, 3.0):
        delta = interval(position(unruh, s), position(unruh, 0.0))
        assert delta == pytest.approx(2.0 * math.sinh(s / 2.0), rel=1e-12)


def test_spacelike_is_rejected():
    with pytest.raises(DomainError):
        interval(Event(0.0, (1.0,)), Event(0.0, (0.0,)))


@settings(max_examples=100, deadline=None)
@given(
    t1=st.floats(min_value=-5.0, max_value=5.0),
    t2=st.floats(min_value=-5.0, max_value=5.0)
)
def test_interval_properties(t1, t2):
    e1, e2 = position(moving, t1), position(moving, t2)
    assert interval(e1, e2) == pytest.approx(t1 - t2, abs=1e-12)
    assert interval(e1, e2) == -interval(e2, e1)


@pytest.mark.parametrize("worldline", [rest, moving, unruh, Worldline.accelerated(0.7, dimension=2)])
def test_four_velocity_normalized(worldline):
    tau = np.linspace(-5.0, 5.0, 21)
    assert np.allclose(four_velocity_norm(worldline, tau), -1.0, atol=1e-6)


def test_lapse_interval():
    assert lapse_interval(rest, 1.5) == 1.5
    assert lapse_interval(unruh, 1.0) == pytest.approx(2.0 * math.sinh(0.5))
    s = np.array([-1.0, 0.0, 2.0])
    assert np.allclose(lapse_interval(unruh, s), 2.0 * np.sinh(s / 2.0))


def test_invalid_worldlines():
    with pytest.raises(InvalidParameter):
        Worldline.inertial(velocity=1.0)
    with pytest.raises(InvalidParameter):
        Worldline.accelerated(0.0)
    with pytest.raises(InvalidParameter):
        Worldline("circular")
    with pytest.raises(InvalidParameter):
        Worldline.inertial(velocity=(0.1, 0.1), dimension=1)


def test_worldline_padding():
    assert moving.velocity == (0.3, -0.4, 0.0)
    assert moving.gamma == pytest.approx(1.0 / math.sqrt(0.75))
    assert unruh.kind is WorldlineKind.UNIFORMLY_ACCELERATED
