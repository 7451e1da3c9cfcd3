import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orliczlab import young
from orliczlab.exceptions import DomainOverflow, InvalidYoungFunction
from orliczlab.young import (ExpMinusOne, Power, PowerLog, Scaled, Tabulated, calderon_combine,
                             delta2_constant, diagnose, quasi_subadditive_bound, validate)


def test_power_values():
    phi = Power(2)
    assert phi(3.0) == 9.0
    assert phi.inverse(9.0) == pytest.approx(3.0, rel=1e-15)
    np.testing.assert_allclose(phi(np.array([0.0, 1.0, 2.0])), [0.0, 1.0, 4.0])


def test_exp_and_power_log_values():
    assert ExpMinusOne(1)(1.0) == pytest.approx(math.e - 1, rel=1e-15)
    # t^1 log(1+t)^1 at t=1 is log 2
    assert PowerLog(1, 1)(1.0) == pytest.approx(math.log(2), rel=1e-15)
    # inverse by bracketing
    assert PowerLog(1, 1).inverse(math.log(2)) == pytest.approx(1.0, rel=1e-11)


def test_scalar_in_scalar_out():
    assert isinstance(Power(3)(2.0), float)
    assert Power(3)(np.array([2.0])).shape == (1,)


def test_negative_argument_rejected():
    with pytest.raises(ValueError):
        Power(2)(-1.0)


def test_exp_domain_cap():
    phi = ExpMinusOne(1)
    with pytest.raises(DomainOverflow):
        phi(1e4)
    assert math.isfinite(phi(phi.domain_cap))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([Power(1.5), PowerLog(2, 0.5), ExpMinusOne(1.3), Scaled(Power(2), 0.7),
                        Tabulated([[0, 0], [1, 1], [2, 3]], 4.0)]),
       st.floats(1e-6, 50.0))
def test_inverse_round_trip(phi, t):
    assert phi.inverse(phi(t)) == pytest.approx(t, rel=1e-10)


def test_calderon_combine_power_pair():
    # inverse u^(1/2) * u^(1/6) = u^(2/3), i.e. t^(3/2)
    phi = calderon_combine(Power(1), Power(3), 0.5)
    t = np.array([0.1, 1.0, 2.0, 7.5])
    np.testing.assert_allclose(phi(t), t ** 1.5, rtol=1e-11)


def test_calderon_combine_mixed_value():
    # Phi(1) solves u^(1/4) log(1+u)^(1/2) = 1; root from mpmath at 30 digits
    phi = calderon_combine(Power(2), ExpMinusOne(1), 0.5)
    assert phi(1.0) == pytest.approx(1.35841940437675587218, rel=1e-11)


def test_calderon_combine_equal_collapses():
    assert calderon_combine(Power(2), Power(2), 0.3) == Power(2)


def test_delta2_estimates():
    assert delta2_constant(Power(2)).constant == pytest.approx(4.0, rel=1e-12)
    assert delta2_constant(Power(1)).constant == pytest.approx(2.0, rel=1e-12)
    # 2 log(1+2t)/log(1+t) increases to 4 as t -> 0
    est = delta2_constant(PowerLog(1, 1))
    assert not est.unbounded and est.constant == pytest.approx(4.0, rel=1e-3)
    assert ExpMinusOne(1).delta2.unbounded
    assert not ExpMinusOne(1).is_delta2


@pytest.mark.parametrize("spec, message", [
    ({"kind": "tabulated", "points": [[0, 1], [1, 2]], "terminal_slope": 2}, "phi(0) != 0"),
    ({"kind": "tabulated", "points": [[0, 0], [1, 2], [2, 3]], "terminal_slope": 1},
     "convexity violated"),
    ({"kind": "tabulated", "points": [[0, 0], [1, 1], [2, 1]], "terminal_slope": 1},
     "monotonicity violated"),
    ({"kind": "power", "p": 0.5}, "convexity violated"),
])
def test_diagnostics(spec, message):
    assert message in diagnose(spec)
    with pytest.raises(InvalidYoungFunction) as info:
        validate(spec)
    assert message in info.value.diagnostics


def test_diagnose_malformed():
    assert diagnose({"kind": "nope"})[0].startswith("malformed spec")
    assert diagnose({"kind": "power"})[0].startswith("malformed spec")


@pytest.mark.parametrize("phi", [Power(2.5), PowerLog(1.5, 2), ExpMinusOne(2), Scaled(Power(2), 3),
                                 Tabulated([[0, 0], [1, 1]], 2.0),
                                 calderon_combine(Power(1), Power(4), 0.25)])
def test_spec_round_trip(phi):
    again = validate(phi.to_spec())
    assert again == phi
    assert again(1.7) == pytest.approx(phi(1.7), rel=1e-12)


def test_quasi_subadditive_examples():
    lhs, rhs = quasi_subadditive_bound(Power(2), 1.0, [1.0, 1.0])
    # (1+1)^2 = 4 against 2^2/2 + 4^2/4 = 6
    assert (lhs, rhs) == (4.0, 6.0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 20), min_size=1, max_size=6), st.floats(1.0, 4.0),
       st.sampled_from([Power(1), Power(2.7), PowerLog(1.2, 1.0), Scaled(Power(3), 0.5)]))
def test_quasi_subadditive_property(ts, alpha, phi):
    lhs, rhs = quasi_subadditive_bound(phi, alpha, ts)
    assert lhs <= rhs * (1 + 1e-12) + 1e-300


def test_scale_argument():
    psi = young.scale_argument(Power(2), 2.0)
    assert psi(4.0) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        young.scale_argument(Power(2), 0.0)
