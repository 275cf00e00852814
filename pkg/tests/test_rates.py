import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from keynodes.errors import DomainError, SpecError, UnknownPreset
from keynodes.rates import (
    PRESETS,
    Family,
    RatePair,
    RateSpec,
    evaluate,
    parse_rate,
    preset,
)

# 0.00113 * e^10.27 and 1/ln 3, both from mpmath at 30 digits
AGING_LAM_AT_1 = 32.6048924981321625
INV_LOG3 = 0.910239226626837394


def test_expscale_at_one():
    assert RateSpec.expscale(0.00113, 10.27)(1.0) == pytest.approx(AGING_LAM_AT_1, rel=1e-13)


def test_logshiftinverse_at_zero():
    assert RateSpec.logshiftinverse(1, 3)(0.0) == pytest.approx(INV_LOG3, rel=1e-14)


@pytest.mark.parametrize("spec, a, expected", [
    (RateSpec.constant(0.45), 0.3, 0.45),
    (RateSpec.expscale(1, -1), 0.5, math.exp(-0.5)),
    (RateSpec.powershift(1, -1), 1.0, 0.5),
    (RateSpec.logshift(2, 3), 1.0, 2 * math.log(4)),
])
def test_family_values(spec, a, expected):
    assert spec(a) == pytest.approx(expected, rel=1e-15)
    assert evaluate(spec, a) == spec(a)


def test_array_matches_scalar():
    grid = np.linspace(0, 1, 11)
    for lam, mu in PRESETS.values():
        for spec in (lam, mu):
            arr = spec(grid)
            assert arr.shape == grid.shape
            np.testing.assert_allclose(arr, [spec(float(a)) for a in grid], rtol=1e-15)


@pytest.mark.parametrize("a", [-1e-9, 1.0 + 1e-9, float("nan")])
def test_domain(a):
    with pytest.raises(DomainError):
        RateSpec.constant(1)(a)
    with pytest.raises(DomainError):
        RateSpec.constant(1)(np.array([0.5, a]))


@pytest.mark.parametrize("family, params", [
    (Family.CONSTANT, ()),
    (Family.CONSTANT, (1, 2)),
    (Family.EXPSCALE, (1,)),
    (Family.EXPSCALE, (0, 1)),
    (Family.EXPSCALE, (-1, 1)),
    (Family.EXPSCALE, (1, float("inf"))),
    (Family.LOGSHIFT, (1, 1)),
    (Family.LOGSHIFTINVERSE, (1, 0.5)),
])
def test_invalid_params(family, params):
    with pytest.raises(SpecError):
        RateSpec(family, params)


def test_bounds_use_endpoints():
    assert RateSpec.expscale(1, -1).bounds() == (math.exp(-1), 1.0)
    assert RateSpec.logshift(1, 3).bounds() == (math.log(3), math.log(4))
    assert RateSpec.constant(2).bounds() == (2.0, 2.0)


def test_presets():
    assert set(PRESETS) == {"const", "exp-const", "const-exp", "power-const",
                            "log-log", "aging"}
    aging = preset("aging")
    assert aging.mu.c == pytest.approx(0.00113 / 1.5)
    assert aging.mu.x == -6.5
    assert not aging.stable
    assert preset("const").stable
    with pytest.raises(UnknownPreset):
        preset("nope")


def test_parse_rate():
    assert parse_rate("expscale(0.00113, 10.27)") == RateSpec.expscale(0.00113, 10.27)
    assert parse_rate("  Constant( 2 ) ") == RateSpec.constant(2)
    for bad in ("expscale 1 2", "foo(1)", "constant(a)", "expscale(1)"):
        with pytest.raises(SpecError):
            parse_rate(bad)


specs = st.one_of(
    st.builds(RateSpec.constant, st.floats(1e-6, 1e3)),
    st.builds(RateSpec.expscale, st.floats(1e-6, 1e3), st.floats(-20, 20)),
    st.builds(RateSpec.powershift, st.floats(1e-6, 1e3), st.floats(-5, 5)),
    st.builds(RateSpec.logshift, st.floats(1e-6, 1e3), st.floats(1.001, 100)),
    st.builds(RateSpec.logshiftinverse, st.floats(1e-6, 1e3), st.floats(1.001, 100)),
)


@given(specs)
def test_str_round_trip(spec):
    assert parse_rate(str(spec)) == spec


@given(specs, st.floats(0, 1))
def test_rates_positive_and_bounded(spec, a):
    lo, hi = spec.bounds()
    v = spec(a)
    assert v > 0
    # every family is monotone in a, so the endpoints bracket the value
    assert lo * (1 - 1e-12) <= v <= hi * (1 + 1e-12)


def test_pair_label():
    assert preset("const").label() == "const"
    pair = RatePair(RateSpec.constant(1), RateSpec.constant(2))
    assert "constant(1.0)" in pair.label()
