import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cone_ab.errors import AntiConeError, DomainError
from cone_ab.geometry import (
    ConeGeometry,
    gaussian_curvature_coefficient,
    geometric_potential_delta_coefficient,
    geometric_potential_regular_coefficient,
    mean_curvature,
)

alphas = st.floats(min_value=1e-3, max_value=1.0)


def test_construction_rejects_bad_parameters():
    with pytest.raises(AntiConeError):
        ConeGeometry(1.5)
    for bad in (0.0, -0.2, math.nan):
        with pytest.raises(DomainError):
            ConeGeometry(bad)
    with pytest.raises(DomainError):
        ConeGeometry(0.5, mass=0.0)
    assert not isinstance(DomainError("x"), AntiConeError)


@pytest.mark.parametrize("alpha, expected", [(1.0, 0.0), (0.5, 1.0), (0.8, 0.25)])
def test_gaussian_curvature_coefficient(alpha, expected):
    assert gaussian_curvature_coefficient(ConeGeometry(alpha)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("alpha, r, expected", [
    (1.0, 2.0, 0.0),
    (0.6, 1.0, 0.8 / 1.2),
    (0.5, 2.0, math.sqrt(0.75) / 2.0),
])
def test_mean_curvature(alpha, r, expected):
    assert mean_curvature(ConeGeometry(alpha), r) == pytest.approx(expected, rel=1e-14, abs=1e-16)


def test_mean_curvature_needs_positive_radius():
    with pytest.raises(DomainError):
        mean_curvature(ConeGeometry(0.5), 0.0)


@pytest.mark.parametrize("alpha, mass, expected", [
    (1.0, 1.0, 0.0),
    (1.0, 7.0, 0.0),
    (0.5, 1.0, -0.375),
    (0.8, 0.5, -0.140625),
])
def test_regular_coefficient(alpha, mass, expected):
    got = geometric_potential_regular_coefficient(ConeGeometry(alpha, mass))
    assert got == pytest.approx(expected, rel=1e-14, abs=1e-16)


@pytest.mark.parametrize("alpha, expected", [(1.0, 0.0), (0.5, 1.0), (0.25, 3.0)])
def test_delta_coefficient(alpha, expected):
    assert geometric_potential_delta_coefficient(ConeGeometry(alpha)) == expected


@given(alphas, alphas)
def test_regular_coefficient_monotone(a, b):
    lo, hi = sorted((a, b))
    assert geometric_potential_regular_coefficient(ConeGeometry(lo)) <= \
        geometric_potential_regular_coefficient(ConeGeometry(hi))


@given(alphas)
def test_signs_and_convention_identity(a):
    g = ConeGeometry(a)
    assert geometric_potential_regular_coefficient(g) <= 0.0
    assert geometric_potential_delta_coefficient(g) >= 0.0
    assert gaussian_curvature_coefficient(g) == geometric_potential_delta_coefficient(g)
    assert (geometric_potential_regular_coefficient(g) == 0.0) == (a == 1.0)
