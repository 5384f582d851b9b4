import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dsmimaging import DomainError, bessel_j0, bessel_y0, green2d
from dsmimaging.specfun import SERIES_CUTOFF, hankel1_0

import oracles


def test_j0_at_zero_is_one():
    assert bessel_j0(0.0) == 1.0


def test_j0_at_one_matches_series():
    assert bessel_j0(1.0) == pytest.approx(0.7651976866, abs=1e-10)


def test_j0_first_zero():
    assert abs(bessel_j0(2.4048255577)) <= 1e-7


def test_y0_first_zero():
    assert abs(bessel_y0(0.8935769663)) <= 1e-6


def test_y0_at_one_matches_series():
    assert bessel_y0(1.0) == pytest.approx(0.0882569642, abs=1e-10)


@pytest.mark.parametrize("bad", [-1e-9, -3.0, math.nan, math.inf])
def test_j0_domain(bad):
    with pytest.raises(DomainError):
        bessel_j0(bad)


@pytest.mark.parametrize("bad", [0.0, -2.0, math.nan, -math.inf])
def test_y0_domain(bad):
    with pytest.raises(DomainError):
        bessel_y0(bad)


def test_scalar_in_scalar_out():
    assert isinstance(bessel_j0(2.0), float)
    assert isinstance(bessel_y0(2.0), float)
    assert bessel_j0(np.array([0.0, 1.0])).shape == (2,)


@pytest.mark.parametrize(
    "x", [0.01, 0.3, 1.7, 4.2, 7.99, 8.0, 11.99, SERIES_CUTOFF, 12.01, 17.3, 33.3, 50.0, 123.4, 200.0]
)
def test_against_high_precision_series(x):
    assert abs(bessel_j0(x) - float(oracles.j0_series(x))) <= 1e-7
    assert abs(bessel_y0(x) - float(oracles.y0_series(x))) <= 1e-7


def test_dense_sweep_against_reference():
    # scipy.special is an independent third implementation for a dense sweep
    from scipy.special import j0, y0

    x = np.linspace(0.01, 200, 40001)
    assert np.max(np.abs(bessel_j0(x) - j0(x))) <= 1e-7
    assert np.max(np.abs(bessel_y0(x) - y0(x))) <= 1e-7


def test_wronskian():
    x = np.linspace(0.5, 50, 2000)
    h = 1e-5 * np.maximum(1, x)
    dj = (bessel_j0(x + h) - bessel_j0(x - h)) / (2 * h)
    dy = (bessel_y0(x + h) - bessel_y0(x - h)) / (2 * h)
    w = bessel_j0(x) * dy - dj * bessel_y0(x)
    expected = 2 / (np.pi * x)
    assert np.max(np.abs(w - expected) / expected) <= 1e-6


@given(st.floats(0, 500))
def test_j0_bounded(x):
    assert abs(bessel_j0(x)) <= 1.0


@given(st.floats(5, 1000))
def test_j0_decay_envelope(x):
    assert abs(bessel_j0(x)) <= math.sqrt(2 / (math.pi * x)) + 1e-3


def test_hankel_combines_both_kinds():
    x = np.array([0.5, 3.0, 20.0])
    assert np.allclose(hankel1_0(x), bessel_j0(x) + 1j * bessel_y0(x), rtol=0, atol=0)


def test_green_at_j0_zero():
    k0 = 2.0
    z = (0.0, 0.0)
    x = (2.4048255577 / k0, 0.0)
    g = green2d(z, x, k0)
    # Phi = (Y0 - i J0)/4, so the imaginary part vanishes with J0
    assert abs(g.imag) <= 1e-7
    assert g.real == pytest.approx(bessel_y0(2.4048255577) / 4, abs=1e-12)


def test_green_against_oracle():
    k0 = 2 * math.pi / 0.4
    assert green2d((0.3, -0.3), (3.0, 0.0), k0) == pytest.approx(
        complex(-0.026386518985358532 + 0.01536583046830426j), abs=1e-9
    )


points = st.tuples(st.floats(-10, 10), st.floats(-10, 10))


@given(points, points, st.floats(0.1, 50))
def test_green_symmetric(z, x, k0):
    if math.dist(z, x) * k0 < 1e-6:
        return
    assert green2d(z, x, k0) == green2d(x, z, k0)


def test_green_coincident_points():
    with pytest.raises(DomainError):
        green2d((1.0, 2.0), (1.0, 2.0), 3.0)


def test_green_bad_wavenumber():
    with pytest.raises(DomainError):
        green2d((0, 0), (1, 0), 0.0)


def test_green_broadcasts():
    xs = np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 3.0]])
    g = green2d((0.0, 0.0), xs, 1.5)
    assert g.shape == (3,)
    assert g[1] == green2d((0.0, 0.0), xs[1], 1.5)
