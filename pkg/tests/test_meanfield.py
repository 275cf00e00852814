import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from keynodes import meanfield
from keynodes.errors import HorizonExceeded
from keynodes.rates import RatePair, RateSpec, preset

import oracles

# (1-a) = a e^a solved with mpmath.findroot at 30 digits
CONST_EXP_FIXED_POINT = 0.401058137541547036
# 0.6 e^{-0.4} - 0.4, mpmath at 30 digits
EXP_CONST_RHS_AT_04 = 0.00219202762138358045


def test_rhs_value():
    assert meanfield.rhs(preset("exp-const"), 0.4) == pytest.approx(EXP_CONST_RHS_AT_04, rel=1e-12)


def test_fixed_point_oracles():
    with mpmath.workdps(30):
        ref = float(mpmath.findroot(lambda a: (1 - a) - a * mpmath.e ** a, 0.4))
    assert ref == pytest.approx(CONST_EXP_FIXED_POINT, abs=1e-15)
    assert meanfield.fixed_points(preset("const-exp")) == pytest.approx([CONST_EXP_FIXED_POINT], abs=1e-11)
    assert meanfield.fixed_points(preset("power-const")) == pytest.approx([math.sqrt(2) - 1], abs=1e-11)
    assert meanfield.fixed_points(preset("const")) == pytest.approx([0.45 / 1.1], abs=1e-11)


def test_aging_fixed_point_near_one():
    fp = meanfield.fixed_points(preset("aging"))
    lam, mu = preset("aging").lam, preset("aging").mu
    ref = oracles.bisect(lambda a: (1 - a) * lam(a) - a * mu(a), 0.5, 1.0)
    assert len(fp) == 1
    assert fp[0] == pytest.approx(ref, abs=1e-11)
    assert 0.9999999 < fp[0] < 1


def test_constant_closed_form():
    r = preset("const")
    traj = meanfield.solve_activation(r, 20.0)
    t = np.linspace(0, 20, 101)
    np.testing.assert_allclose(traj(t), meanfield.closed_form_constant(0.45, 0.65, t),
                               atol=1e-9)


def test_tau_constant_closed_form():
    trig = meanfield.trigger_time(preset("const"), 0.4)
    assert trig.reached
    assert trig.tau_hat == pytest.approx(math.log(45) / 1.1, abs=1e-6)
    # the slope at gamma is only 0.01, so state error is magnified; tighter
    # tolerances close the gap down to the crossing bisection width
    tight = meanfield.trigger_time(preset("const"), 0.4, rtol=1e-12, atol=1e-14)
    assert tight.tau_hat == pytest.approx(math.log(45) / 1.1, abs=1e-8)
    assert meanfield.tau_constant(0.45, 0.65, 0.4) == pytest.approx(math.log(45) / 1.1, rel=1e-14)


@pytest.mark.parametrize("name", ["exp-const", "const-exp", "power-const", "log-log"])
def test_trajectory_against_rk4(name):
    r = preset(name)
    traj = meanfield.solve_activation(r, 5.0)
    ref = oracles.rk4_activation(r.lam, r.mu, 5.0)
    assert traj(5.0) == pytest.approx(ref, abs=1e-9)


def test_trigger_bracketing():
    # a(tau) = gamma, and a stays below gamma before tau
    for name in ("exp-const", "log-log", "aging"):
        r = preset(name)
        trig = meanfield.trigger_time(r, 0.3)
        traj = meanfield.solve_activation(r, 1.01 * trig.tau_hat)
        assert traj(trig.tau_hat) == pytest.approx(0.3, abs=1e-9)
        assert np.all(traj(np.linspace(0, 0.999 * trig.tau_hat, 50)) < 0.3)


def test_unreachable():
    trig = meanfield.trigger_time(preset("const"), 0.41)
    assert not trig.reached
    assert trig.fixed_point == pytest.approx(0.45 / 1.1)


def test_horizon_exceeded():
    with pytest.raises(HorizonExceeded):
        meanfield.trigger_time(preset("const"), 0.4, horizon=1.0)


def test_gamma_range():
    with pytest.raises(ValueError):
        meanfield.trigger_time(preset("const"), 1.0)


def test_default_horizon():
    assert meanfield.default_horizon(preset("const")) == pytest.approx(50 / 0.45)
    assert meanfield.default_horizon(preset("aging")) == pytest.approx(50 / 0.00113)


pairs = st.builds(
    lambda l, m, r1, r2: RatePair(RateSpec.expscale(l, r1), RateSpec.expscale(m, r2)),
    st.floats(0.05, 5), st.floats(0.05, 5), st.floats(-3, 3), st.floats(-3, 3))


@settings(max_examples=30, deadline=None)
@given(pairs)
def test_trajectory_stays_in_unit_interval_and_rises(rates):
    traj = meanfield.solve_activation(rates, 10.0)
    assert np.all(traj.values >= 0) and np.all(traj.values <= 1)
    # from a = 0 the solution climbs monotonically toward the first fixed point
    # up to integration error near the fixed point
    assert np.all(np.diff(traj.values) >= -1e-7)
    fp = meanfield.fixed_points(rates)[0]
    assert traj.values[-1] <= fp + 1e-7


@pytest.mark.parametrize("name", ["const", "exp-const", "log-log", "aging"])
def test_trigger_converges_when_rtol_halves(name):
    r = preset(name)
    rtol = 1e-8
    a = meanfield.trigger_time(r, 0.3, rtol=rtol).tau_hat
    b = meanfield.trigger_time(r, 0.3, rtol=rtol / 2).tau_hat
    assert abs(a - b) < 10 * rtol * a


@pytest.mark.parametrize("name", ["const", "const-exp", "aging"])
def test_trigger_monotone_in_gamma(name):
    r = preset(name)
    fp = meanfield.fixed_points(r)[0]
    gammas = np.linspace(0.02, 0.98 * fp, 15)
    taus = [meanfield.trigger_time(r, g).tau_hat for g in gammas]
    assert all(b >= a for a, b in zip(taus, taus[1:]))


def test_rhs_const_values():
    assert meanfield.rhs(preset("const"), 0.0) == 0.45
    assert meanfield.rhs(preset("const"), 9 / 22) == pytest.approx(0.0, abs=1e-16)
