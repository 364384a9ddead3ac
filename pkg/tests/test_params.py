import math

import pytest
from hypothesis import given, strategies as st

from semitoric.errors import DomainError, OutOfFocusFocusRange
from semitoric.params import (FixedPointClass, ModelParams, ParamChart, classify_fixed_point, critical_interval,
                              from_chart, rA_squared_factored, reverse_map, to_chart)

radii = st.floats(0.2, 5.0)


def test_interval_values():
    ci = critical_interval(ModelParams(1, 2, 0.5))
    # roots of -R^2(1-2t)^2 + 2Rt - t^2 at R = 2
    for t in (ci.t_minus, ci.t_plus):
        assert abs(-4 * (1 - 2 * t) ** 2 + 4 * t - t * t) < 1e-13
    assert ci.t_minus < 0.5 < ci.t_plus


def test_equal_radii_interval():
    ci = critical_interval(ModelParams(1, 1, 0.5))
    assert ci.t_minus == pytest.approx(0.2)
    assert ci.t_plus == 1.0


@pytest.mark.parametrize("t, kind", [(0.5, FixedPointClass.FOCUS_FOCUS), (0.1, FixedPointClass.ELLIPTIC_ELLIPTIC),
                                     (0.95, FixedPointClass.ELLIPTIC_ELLIPTIC)])
def test_classification(t, kind):
    assert classify_fixed_point(ModelParams(1, 2, t)) is kind


def test_degenerate_endpoints():
    assert classify_fixed_point(ModelParams(1, 1, 0.2)) is FixedPointClass.DEGENERATE
    assert classify_fixed_point(ModelParams(1, 1, 1.0)) is FixedPointClass.DEGENERATE


@pytest.mark.parametrize("args", [(0, 1, 0.5), (1, -1, 0.5), (1, 1, 1.5), (1, 1, -0.1), (math.nan, 1, 0.5)])
def test_bad_params(args):
    with pytest.raises(DomainError):
        ModelParams(*args)


@given(radii, radii, st.floats(0.05, 0.95))
def test_factored_discriminant(R1, R2, f):
    p0 = ModelParams(R1, R2, 0.5)
    ci = p0.interval
    p = ModelParams(R1, R2, ci.t_minus + f * (ci.t_plus - ci.t_minus))
    assert rA_squared_factored(p) == pytest.approx(p.rA_squared, rel=1e-9, abs=1e-12)
    assert p.rA_squared > 0


@given(st.floats(-2, 2), st.floats(-4, 4), st.floats(0.3, 3))
def test_chart_roundtrip(u, v, kappa):
    c = ParamChart(u, v, kappa)
    back = to_chart(from_chart(c))
    assert back.u == pytest.approx(u, abs=1e-10)
    assert back.v == pytest.approx(v, abs=1e-8)
    assert back.kappa == pytest.approx(kappa, rel=1e-12)


@given(radii, radii, st.floats(0.05, 0.95))
def test_reverse_is_involution_and_conjugates_u(R1, R2, f):
    ci = ModelParams(R1, R2, 0.5).interval
    p = ModelParams(R1, R2, ci.t_minus + f * (ci.t_plus - ci.t_minus))
    q = reverse_map(p)
    assert classify_fixed_point(q) is FixedPointClass.FOCUS_FOCUS
    back = reverse_map(q)
    assert back.t == pytest.approx(p.t, abs=1e-14)
    a, b = to_chart(p), to_chart(q)
    assert b.u == pytest.approx(-a.u, abs=1e-12)
    assert b.v == pytest.approx(a.v, abs=1e-9)


def test_chart_outside_range():
    with pytest.raises(OutOfFocusFocusRange):
        to_chart(ModelParams(1, 2, 0.1))
