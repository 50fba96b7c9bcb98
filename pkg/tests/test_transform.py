import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from halfwave import transform
from halfwave.errors import DomainError, HalfPlaneError
from halfwave.transform import (
    HalfPlanePoint,
    PoleField,
    PoleTerm,
    PowExpTerm,
    RadialProfile,
    Regime,
    SampledProfile,
    TransformOrder,
)

mp.mp.dps = 30

# Gamma(1.3) 2^-1.3, frozen from mpmath
C_EXAMPLE = 0.36448636186713645540


def test_order_regimes():
    assert TransformOrder(1.5).regime is Regime.ADMISSIBLE
    assert TransformOrder(0.75).regime is Regime.NON_ADMISSIBLE
    assert TransformOrder(0.3).regime is Regime.NON_SQUARE_INTEGRABLE
    with pytest.raises(DomainError):
        TransformOrder(0.0)


def test_half_plane_point():
    z = HalfPlanePoint(0.4, 2.0)
    assert z.zbar == 0.4 - 2j
    with pytest.raises(HalfPlaneError):
        HalfPlanePoint(0.0, 0.0)


def test_forward_transform_examples():
    f = RadialProfile.single(1.0, 0.5, 1.0)
    assert transform.forward_transform(f, 0.8, -1j) == pytest.approx(C_EXAMPLE, rel=1e-14)
    e = RadialProfile.single()
    assert transform.forward_transform(e, 0.5, -1j) == pytest.approx(0.31332853432887503, rel=1e-14)
    assert transform.forward_transform(RadialProfile(), 0.5, -1j) == 0


def test_forward_transform_domain():
    with pytest.raises(HalfPlaneError):
        transform.forward_transform(RadialProfile.single(), 0.5, 1.0 + 0.5j)
    with pytest.raises(DomainError):
        transform.forward_transform(RadialProfile.single(1.0, -0.6), 0.5, -1j)
    with pytest.raises(DomainError):
        PowExpTerm(1.0, 1.0, -0.5)


def test_closed_form_transform_examples():
    pt = transform.closed_form_transform(PowExpTerm(1.0, 1.0, 1.0), 0.5)
    assert pt.coeff == pytest.approx(0.886226925452758, rel=1e-15)
    assert pt.exponent == 1.5 and pt.pole == 1j
    alpha, n, g = 0.6, 3, 0.75
    pt = transform.closed_form_transform(PowExpTerm(1.0, alpha + n, 1.0), g)
    assert pt.coeff == pytest.approx(math.gamma(g + alpha + n), rel=1e-15)
    doubled = transform.closed_form_transform(PowExpTerm(2.0, 1.7, 0.5), g)
    single = transform.closed_form_transform(PowExpTerm(1.0, 1.7, 0.5), g)
    assert doubled.coeff == 2 * single.coeff


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(0.1, 3.0), st.floats(0.5, 2.0), st.floats(-1.0, 1.0),
       st.floats(-20.0, 20.0), st.floats(0.1, 10.0))
def test_closed_form_against_mpmath(g, p, sr, si, b, a):
    s = complex(sr, si)
    zb = complex(b, -a)
    ref = complex(mp.gamma(g + p) * mp.power(mp.mpc(s) + 1j * mp.mpc(zb), -(g + p)))
    got = transform.forward_transform(RadialProfile.single(1.0, p, s), g, zb)
    assert abs(got - ref) <= 1e-13 * abs(ref)


def test_three_routes_agree():
    f = RadialProfile((PowExpTerm(1.0, 0.5, 1.0), PowExpTerm(-0.4 + 0.2j, 2.2, 0.7 + 0.3j)))
    zs = [0.3 - 0.5j, -4.0 - 2.0j, 12.0 - 0.2j, 40.0 - 0.1j]
    for z in zs:
        closed = transform.forward_transform(f, 0.8, z, method="closed")
        quad = transform.forward_transform(f, 0.8, z, method="quadrature")
        real = transform.forward_transform(f, 0.8, z, method="real-axis")
        assert abs(quad - closed) <= 1e-10 * abs(closed)
        assert abs(real - closed) <= 1e-9 * abs(closed)


def test_sampled_profile_transform():
    q = np.geomspace(1e-4, 40.0, 3000)
    f = SampledProfile.from_function(lambda x: np.exp(-x), q, endpoint_power=1.0, tail_rate=1.0)
    for z in (-1j, 2.0 - 0.5j):
        ref = transform.forward_transform(RadialProfile.single(), 0.5, z)
        assert abs(transform.forward_transform(f, 0.5, z) - ref) <= 1e-6 * abs(ref)
    with pytest.raises(DomainError):
        transform.forward_transform(f, 0.5, -1j, method="closed")


def test_sampled_profile_validation():
    with pytest.raises(DomainError):
        SampledProfile(np.array([0.0, 1.0, 2.0]), np.ones(3))
    with pytest.raises(DomainError):
        SampledProfile(np.array([1.0, 0.5, 2.0]), np.ones(3))


def test_wavelet_coefficient():
    f = RadialProfile.single(1.0, 0.5, 1.0)
    assert transform.wavelet_coefficient(f, 0.8, HalfPlanePoint(0.0, 1.0)) == pytest.approx(C_EXAMPLE, rel=1e-14)
    e = RadialProfile.single()
    z = HalfPlanePoint(1.0, 4.0)
    assert transform.wavelet_coefficient(e, 0.5, z) == transform.forward_transform(e, 0.5, z.zbar)


def test_derivative_field_example():
    val = transform.derivative_field(RadialProfile.single(), 0.5, -1j)
    assert val == pytest.approx(-1j * math.gamma(2.5) / 2 ** 2.5, rel=1e-14)
    assert transform.derivative_field(RadialProfile(), 0.5, -1j) == 0


def test_derivative_matches_finite_difference():
    f = RadialProfile((PowExpTerm(1.0, 1.2, 1.0), PowExpTerm(0.5j, 0.4, 2.0 - 1j)))
    z, h = 0.7 - 1.3j, 1e-5
    fd = (transform.forward_transform(f, 0.6, z + h) - transform.forward_transform(f, 0.6, z - h)) / (2 * h)
    assert abs(transform.derivative_field(f, 0.6, z) - fd) <= 1e-8 * abs(fd)


def test_euler_operator_example():
    val = transform.apply_euler_operator(RadialProfile.single(), 0.5, -1j)
    assert val == pytest.approx(-math.gamma(2.5) / 2 ** 2.5, rel=1e-13)


def test_norm_examples():
    assert transform.l2_norm_radial(RadialProfile.single()) == pytest.approx(0.25, rel=1e-15)
    assert transform.l2_norm_radial(RadialProfile.single(1.0, 0.5)) == pytest.approx(0.25, rel=1e-15)
    assert transform.l2_norm_radial(RadialProfile()) == 0.0


def test_bergman_examples():
    assert transform.bergman_weighted_integral(RadialProfile.single(), 0.5) == pytest.approx(0.25, rel=1e-3)
    assert transform.bergman_weighted_integral(RadialProfile(), 0.5) == 0.0
    scaled = transform.bergman_weighted_integral(RadialProfile.single(3.0), 0.5)
    assert scaled == pytest.approx(9 * 0.25, rel=1e-3)


@pytest.mark.parametrize("g", [0.3, 0.75, 1.4])
@pytest.mark.parametrize("n", [0, 2, 4])
def test_isometry_family(g, n):
    f = RadialProfile.family_member(0.6, n)
    ratio = transform.bergman_weighted_integral(f, g) / transform.l2_norm_radial(f)
    assert ratio == pytest.approx(1.0, rel=1e-3)


def test_agamma_constants():
    g = 0.75
    assert transform.agamma_constant(g) == pytest.approx(2 * math.pi * math.gamma(1.5) / 2 ** 1.5, rel=1e-15)
    # the unshifted variant goes negative on (1/2, 1), so it cannot be a norm ratio
    assert transform.printed_agamma_constant(g) < 0
    assert transform.printed_agamma_constant(1.0) == math.inf


def test_analyticity_contour():
    f = RadialProfile((PowExpTerm(1.0, 0.7, 1.0), PowExpTerm(-2.0, 1.9, 0.6 + 0.8j)))
    field_ = transform.transform_field(f, 0.9)
    total, perim, peak = transform.rectangle_contour_integral(field_, (-2.0, 3.0), (0.2, 2.5))
    assert abs(total) <= 1e-8 * perim * peak


def test_decay_in_b():
    f = RadialProfile.single(1.0, 1.0)
    b = np.linspace(0.0, 1e4, 2001)
    mags = np.abs(transform.forward_transform(f, 1.0, b - 1j))
    assert np.all(np.diff(mags) < 0)
    assert mags[-1] < 1e-6 * mags[0]


@pytest.mark.parametrize("theta", [-math.pi / 2, -math.pi / 4, -0.1])
def test_decay_exponent(theta):
    one = PoleField((PoleTerm(1.0, 1.3, 1j),))
    two = PoleField((PoleTerm(1.0, 1.3, 1j), PoleTerm(5.0, 2.3, 2j)))
    assert transform.decay_exponent_estimate(one, theta) == pytest.approx(-1.3, abs=0.01)
    assert transform.decay_exponent_estimate(two, theta) == pytest.approx(-1.3, abs=0.01)


def test_decay_exponent_rejects_upper_ray():
    with pytest.raises(DomainError):
        transform.decay_exponent_estimate(PoleField((PoleTerm(1.0, 1.3, 1j),)), 0.5)


def test_pole_field_algebra():
    F = PoleField((PoleTerm(1.0, 1.3, 1j), PoleTerm(2.0, 1.3, 1j), PoleTerm(1.0, 2.0, 2j)))
    z = np.array([0.3 - 1j, -5.0 - 0.1j])
    assert np.allclose(F.combined()(z), F(z), rtol=1e-15)
    assert len(F.combined().terms) == 2
    assert F.slowest_exponent == 1.3
    assert np.allclose((2 * F)(z), 2 * F(z), rtol=0)


def test_grid_evaluation_order_independent():
    f = RadialProfile((PowExpTerm(1.0, 0.7, 1.0), PowExpTerm(0.3j, 2.0, 0.5)))
    z = np.array([0.1 - 1j, 3.0 - 0.2j, -7.0 - 4.0j, 0.0 - 0.01j])
    forward = transform.forward_transform(f, 0.6, z)
    perm = np.array([2, 0, 3, 1])
    permuted = transform.forward_transform(f, 0.6, z[perm])
    assert np.array_equal(forward[perm], permuted)
    one_by_one = np.array([transform.forward_transform(f, 0.6, zi) for zi in z])
    assert np.array_equal(forward, one_by_one)
