import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dsgchain.errors import DegenerateCriticalPointError, DomainError
from dsgchain.potential import (
    CriticalKind,
    ModelParams,
    critical_points,
    potential_d1,
    potential_d2,
    potential_value,
)

phis = st.floats(-5, 5, allow_nan=False)
family = st.floats(0, 1)


@pytest.mark.parametrize(
    "phi, a, expected",
    [(0.0, 0.6, 0.0), (0.5, 0.6, 0.8), (0.25, 0.0, 1.0), (0.5, 0.0, 2.0), (0.5, 0.99, 0.02)],
)
def test_potential_values(phi, a, expected):
    assert potential_value(phi, a) == pytest.approx(expected, abs=1e-14)


def test_curvature_at_critical_points():
    # 4(1+3a)pi^2, 4(5a-1)pi^2 and (1 - a(2+15a))/a pi^2 at a = 0.6
    assert potential_d2(0.0, 0.6) == pytest.approx(110.53956929220081, rel=1e-14)
    assert potential_d2(0.5, 0.6) == pytest.approx(78.95683520871486, rel=1e-14)
    assert potential_d2(0.27665018951905684, 0.6) == pytest.approx(-92.11630774350068, rel=1e-12)


@pytest.mark.parametrize("a", [0.0, 0.3, 0.6, 1.0])
def test_first_derivative_vanishes_at_zero(a):
    assert potential_d1(0.0, a) == 0.0


@pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan")])
def test_domain_error(bad):
    with pytest.raises(DomainError):
        potential_value(0.1, bad)


def test_params_validation():
    ModelParams(3, 1.0, 0.0)
    for args in [(2, 1.0, 0.0), (10, 0.0, 0.5), (10, -1.0, 0.5), (10, 1.0, 1.2), (10.5, 1.0, 0.1)]:
        with pytest.raises(DomainError):
            ModelParams(*args)


def test_finite_differences_random_points():
    rng = np.random.default_rng(7)
    x = rng.uniform(-1, 2, 20)
    h = 1e-6
    for a in (0.0, 0.6, 0.99):
        fd = (potential_value(x + h, a) - potential_value(x - h, a)) / (2 * h)
        np.testing.assert_allclose(potential_d1(x, a), fd, rtol=1e-8, atol=1e-8)


@settings(max_examples=200)
@given(phis, family)
def test_nonnegative_periodic_even(phi, a):
    v = potential_value(phi, a)
    assert v >= -1e-15
    assert potential_value(phi + 1, a) == pytest.approx(v, abs=1e-12)
    assert potential_value(-phi, a) == pytest.approx(v, abs=1e-15)


@settings(max_examples=100)
@given(phis, family)
def test_derivatives_match_finite_differences(phi, a):
    h = 1e-6
    fd1 = (potential_value(phi + h, a) - potential_value(phi - h, a)) / (2 * h)
    fd2 = (potential_d1(phi + h, a) - potential_d1(phi - h, a)) / (2 * h)
    assert abs(potential_d1(phi, a) - fd1) <= 1e-8 * max(abs(fd1), 1.0)
    assert abs(potential_d2(phi, a) - fd2) <= 1e-8 * max(abs(fd2), 1.0)


def test_longdouble_evaluation_agrees():
    phi = np.linspace(0, 1, 17)
    for a in (0.0, 0.6):
        ld = potential_d1(phi.astype(np.longdouble), a)
        assert ld.dtype == np.longdouble
        np.testing.assert_allclose(ld.astype(float), potential_d1(phi, a), atol=1e-13)


def test_critical_points_sine_gordon_limit():
    pts = critical_points(0.0)
    assert [p.location for p in pts] == [0.0, 0.5]
    assert [p.kind for p in pts] == [CriticalKind.ABSOLUTE_MINIMUM, CriticalKind.MAXIMUM]


def test_critical_points_two_lump_regime():
    pts = critical_points(0.6)
    # brentq roots of V' on (0, 1)
    expected = [0.0, 0.27665018951905684, 0.5, 0.7233498104809432]
    np.testing.assert_allclose([p.location for p in pts], expected, atol=1e-13)
    assert [p.kind for p in pts] == [
        CriticalKind.ABSOLUTE_MINIMUM,
        CriticalKind.MAXIMUM,
        CriticalKind.RELATIVE_MINIMUM,
        CriticalKind.MAXIMUM,
    ]
    for p in pts:
        assert abs(potential_d1(p.location, 0.6)) < 1e-12
        assert math.copysign(1, p.curvature) == (-1 if p.kind is CriticalKind.MAXIMUM else 1)


def test_critical_points_near_double_angle():
    pts = critical_points(0.99)
    assert len(pts) == 4
    half = next(p for p in pts if p.location == 0.5)
    assert half.kind is CriticalKind.RELATIVE_MINIMUM
    assert potential_value(0.5, 0.99) == pytest.approx(0.02, abs=1e-14)


def test_critical_points_at_a_one():
    kinds = {p.location: p.kind for p in critical_points(1.0)}
    assert kinds[0.0] is kinds[0.5] is CriticalKind.ABSOLUTE_MINIMUM
    assert kinds[0.25] is kinds[0.75] is CriticalKind.MAXIMUM


def test_transition_value_is_degenerate():
    with pytest.raises(DegenerateCriticalPointError):
        critical_points(0.2)


@settings(max_examples=60)
@given(st.floats(0, 0.999).filter(lambda a: abs(a - 0.2) > 1e-9))
def test_critical_points_are_stationary(a):
    for p in critical_points(a):
        assert 0 <= p.location < 1
        assert abs(potential_d1(p.location, a)) < 1e-12
