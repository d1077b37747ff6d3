import math

import pytest
from hypothesis import example, given
from hypothesis import strategies as st

from cone_ab.channels import Channel, ChannelClass, channel_range, classify, classify_j_squared, effective_j_squared
from cone_ab.errors import AntiConeError, DomainError

ms = st.integers(min_value=-50, max_value=50)
fluxes = st.floats(min_value=-3.0, max_value=3.0)
alphas = st.floats(min_value=1e-2, max_value=1.0)


def test_examples():
    assert effective_j_squared(0, 0.0, 1.0) == 0.0
    assert effective_j_squared(1, 0.25, 0.8) == pytest.approx(2.30078125, rel=1e-15)
    assert effective_j_squared(0, 0.0, 0.5) == pytest.approx(-0.75, rel=1e-15)


def test_alpha_domain():
    with pytest.raises(DomainError):
        effective_j_squared(0, 0.1, 0.0)
    with pytest.raises(AntiConeError):
        effective_j_squared(0, 0.1, 1.2)


@pytest.mark.parametrize("j2, cls", [
    (2.30078125, ChannelClass.REGULAR_ONLY),
    (0.25, ChannelClass.EXTENSION_ELIGIBLE),
    (-0.75, ChannelClass.UNSUPPORTED),
    (0.0, ChannelClass.LOG_DEGENERATE),
    (1.0, ChannelClass.REGULAR_ONLY),
])
def test_classification(j2, cls):
    assert classify_j_squared(j2) is cls


def test_channel_fields():
    ch = Channel(1, 0.25, 0.8)
    assert ch.j_squared == effective_j_squared(1, 0.25, 0.8)
    assert ch.j_abs == math.sqrt(ch.j_squared)
    assert classify(ch) is ChannelClass.REGULAR_ONLY
    bad = Channel(0, 0.0, 0.5)
    assert bad.j_abs is None
    assert classify(bad) is ChannelClass.UNSUPPORTED
    with pytest.raises(DomainError):
        Channel(0.5, 0.0, 1.0)


def test_channel_order():
    assert [c.m for c in channel_range(2, 0.1, 1.0)] == [0, 1, -1, 2, -2]


@given(ms, fluxes)
def test_flat_limit(m, phi):
    got = effective_j_squared(m, phi, 1.0)
    want = (m + phi) ** 2
    assert abs(got - want) <= 4 * math.ulp(max(want, 1e-300))


@given(ms, fluxes, alphas)
def test_even_in_m_plus_flux(m, phi, a):
    # (m + phi) -> -(m + phi) is m -> -m, phi -> -phi
    assert effective_j_squared(m, phi, a) == effective_j_squared(-m, -phi, a)


@given(ms, fluxes, alphas, alphas)
@example(m=0, phi=0.25, a=0.5, b=1.0)
def test_decreasing_in_alpha(m, phi, a, b):
    # Stated invariant; fails whenever 0 < |m + phi| <= 1/2.
    if m + phi == 0.0 or a == b:
        return
    lo, hi = sorted((a, b))
    assert effective_j_squared(m, phi, lo) > effective_j_squared(m, phi, hi)


@given(ms, fluxes, alphas, alphas)
def test_alpha_dependence_sign(m, phi, a, b):
    # J^2 = ((m + phi)^2 - 1/4) / alpha^2 + 1/4
    lo, hi = sorted((a, b))
    if hi - lo < 1e-6:
        return
    c = (m + phi) ** 2 - 0.25
    d = effective_j_squared(m, phi, lo) - effective_j_squared(m, phi, hi)
    if abs(c) > 1e-6:
        assert math.copysign(1.0, d) == math.copysign(1.0, c)


def test_alpha_independent_at_half():
    for a in (0.1, 0.5, 0.9, 1.0):
        assert effective_j_squared(0, 0.5, a) == pytest.approx(0.25, abs=1e-14)


@given(ms, fluxes, alphas)
def test_eligible_iff_open_unit_interval(m, phi, a):
    ch = Channel(m, phi, a)
    assert (classify(ch) is ChannelClass.EXTENSION_ELIGIBLE) == (0.0 < ch.j_squared < 1.0)
