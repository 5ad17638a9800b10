import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

import oracle_values as ov
from jostlab import special_fn as sf
from jostlab.errors import NoConvergence, PoleOfGamma, QuadratureFailure

EULER = 0.5772156649015329

orders = st.complex_numbers(min_magnitude=0, max_magnitude=8, allow_nan=False, allow_infinity=False)
args = st.floats(min_value=0.05, max_value=8.0)


def rel(a, b):
    return abs(a - b) / abs(b)


def close(a, b, rtol, atol=1e-14):
    # absolute floor for values sitting next to a zero in the order
    return abs(a - b) <= rtol * abs(b) + atol


# ---------------------------------------------------------------- gamma family


def test_log_gamma_known_values():
    assert sf.log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-13)
    assert abs(sf.log_gamma(1.0)) < 1e-15


def test_log_gamma_against_oracle():
    for z, want in ov.LOG_GAMMA:
        assert rel(np.exp(sf.log_gamma(z)), np.exp(want)) < 1e-13, z


def test_digamma_against_oracle():
    for z, want in ov.DIGAMMA:
        assert rel(sf.digamma(z), want) < 1e-12, z


def test_log_gamma_pole():
    with pytest.raises(PoleOfGamma):
        sf.log_gamma(-3 + 1e-13)
    with pytest.raises(PoleOfGamma):
        sf.digamma(0.0)


def test_recip_gamma_values():
    assert sf.recip_gamma(-3.0) == 0
    assert sf.recip_gamma(0.0) == 0
    assert sf.recip_gamma(1.0) == pytest.approx(1.0, rel=1e-15)
    assert sf.recip_gamma(0.5) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-14)


def test_digamma_values():
    assert sf.digamma(1.0) == pytest.approx(-EULER, rel=1e-12)
    assert sf.digamma(2.0) == pytest.approx(1 - EULER, rel=1e-12)
    # psi(z+1) = psi(z) + 1/z
    z = 0.5 + 1.5j
    assert rel(sf.digamma(z + 1), sf.digamma(z) + 1 / z) < 1e-12


def test_psi_recip_gamma_finite_at_poles():
    # psi/Gamma -> (-1)^(n+1) n! at z = -n
    for n in range(0, 5):
        assert sf.psi_recip_gamma(-n) == pytest.approx((-1) ** (n + 1) * math.factorial(n), rel=1e-12)


# ---------------------------------------------------------------- series controls


def test_series_control_validation():
    with pytest.raises(ValueError):
        sf.SeriesControl(max_terms=10)
    with pytest.raises(ValueError):
        sf.SeriesControl(tail_tolerance=1e-3)
    with pytest.raises(ValueError):
        sf.SeriesControl(tail_tolerance=0.0)


def test_no_convergence_raised():
    with pytest.raises(NoConvergence):
        sf.bessel_I(0.3, 60.0, sf.SeriesControl(max_terms=30))


def test_bad_argument():
    with pytest.raises(ValueError):
        sf.bessel_I(1.0, 0.0)
    with pytest.raises(ValueError):
        sf.bessel_J(1.0, -2.0)


# ---------------------------------------------------------------- Bessel values


def test_closed_forms():
    assert sf.bessel_I(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-14)
    assert abs(sf.bessel_J(0.5, math.pi)) < 1e-15
    assert abs(sf.bessel_J(0.0, 1e-8) - 1.0) < 1e-12
    assert sf.bessel_K(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1.0), rel=1e-12)
    assert rel(sf.bessel_I(-2, 3.0), sf.bessel_I(2, 3.0)) < 1e-13


@pytest.mark.parametrize("kind", ["I", "J"])
def test_bessel_against_oracle(kind):
    fn = sf.bessel_I if kind == "I" else sf.bessel_J
    for nu, x, want in getattr(ov, f"BESSEL_{kind}"):
        assert close(fn(nu, x), want, 1e-11), (nu, x)


@pytest.mark.parametrize("kind", ["I", "J"])
def test_order_derivative_against_oracle(kind):
    fn = sf.dI_dnu if kind == "I" else sf.dJ_dnu
    for nu, x, want in getattr(ov, f"D{kind}_DNU"):
        assert close(fn(nu, x), want, 1e-10), (nu, x)


@pytest.mark.parametrize("kind", ["I", "J"])
def test_x_derivative_against_oracle(kind):
    fn = sf.bessel_I if kind == "I" else sf.bessel_J
    for nu, x, want in getattr(ov, f"D{kind}_DX"):
        assert close(fn(nu, x, derivative=1), want, 1e-11), (nu, x)


def test_bessel_k_against_oracle():
    for nu, x, want in ov.BESSEL_K:
        assert rel(sf.bessel_K(nu, x), want) < 1e-9, (nu, x)


def test_bessel_k0_quadrature():
    val, _ = integrate.quad(lambda t: math.exp(-5 * math.cosh(t)), 0, 8.0, epsabs=1e-16, epsrel=1e-13)
    assert rel(sf.bessel_K(0, 5.0), val) < 1e-11


def test_bessel_k_even_in_order():
    for nu in (0.37j, 1.3 - 0.4j, 2 + 1e-3, 0.0):
        assert rel(sf.bessel_K(-nu, 3.0), sf.bessel_K(nu, 3.0)) < 1e-12


def test_bessel_k_seam_agreement():
    # the two branches of K meet at |nu - n| = K_SEAM
    for n in (0, 1, 3, -2):
        for side in (1, 1j, -1):
            eps = sf.K_SEAM * side
            inner = sf.bessel_K(n + eps * (1 - 1e-9), 5.0)
            outer = sf.bessel_K(n + eps * (1 + 1e-9), 5.0)
            assert rel(inner, outer) < 1e-9, (n, side)


def test_order_derivative_reduces_at_root():
    # at a root of I_nu the ln(x/2) I_nu term drops out
    nu0 = ov.ROOTS["repulsive"][6][0]
    x = 5.0
    with_log = sf.dI_dnu(nu0, x)
    assert abs(sf.bessel_I(nu0, x)) < 1e-13
    at_root = -sf.ascending_series(nu0, x, alternating=False, weight="psi")
    assert rel(with_log, at_root) < 1e-10


def test_order_derivative_finite_difference_spots():
    h = 1e-5
    nu = 0.7 + 0.3j
    fd = (sf.bessel_I(nu + h, 5.0) - sf.bessel_I(nu - h, 5.0)) / (2 * h)
    assert rel(sf.dI_dnu(nu, 5.0), fd) < 1e-7
    fd = (sf.bessel_J(1.2 + h, 5.0) - sf.bessel_J(1.2 - h, 5.0)) / (2 * h)
    assert rel(sf.dJ_dnu(1.2, 5.0), fd) < 1e-7


# ---------------------------------------------------------------- Neumann identity


def test_neumann_identity():
    assert sf.neumann_identity_residual(0, 0, 1.0) < 1e-10
    assert sf.neumann_identity_residual(0.5, 0.5, 2.0) < 1e-10
    assert sf.neumann_identity_residual(0.3 + 0.8j, 0.3 - 0.8j, 5.0) < 1e-9


def test_neumann_identity_rejects_bad_orders():
    with pytest.raises(ValueError):
        sf.neumann_identity_residual(-0.8, -0.5, 1.0)


def test_neumann_quadrature_failure():
    with pytest.raises(QuadratureFailure):
        sf.neumann_identity_residual(0.3 + 40j, 0.3 - 40j, 5.0, limit=1)


# ---------------------------------------------------------------- properties


@settings(max_examples=60, deadline=None)
@given(orders, args)
def test_schwarz_reflection_in_order(nu, x):
    for fn in (sf.bessel_I, sf.bessel_J):
        a = fn(nu, x)
        b = fn(nu.conjugate(), x)
        assert abs(np.conj(a) - b) <= 1e-12 * max(1.0, abs(a))


@settings(max_examples=60, deadline=None)
@given(orders, args)
def test_modified_bessel_ode_residual(nu, x):
    y = sf.bessel_I(nu, x)
    y1 = sf.bessel_I(nu, x, derivative=1)
    y2 = sf.bessel_I(nu, x, derivative=2)
    res = x * x * y2 + x * y1 - (x * x + nu * nu) * y
    scale = max(abs(x * x * y2), abs(x * y1), abs((x * x + nu * nu) * y), 1e-300)
    assert abs(res) <= 1e-9 * scale


@settings(max_examples=60, deadline=None)
@given(orders, args)
def test_wronskian_i_pair(nu, x):
    w = sf.bessel_I(nu, x) * sf.bessel_I(-nu, x, derivative=1) - sf.bessel_I(nu, x, derivative=1) * sf.bessel_I(-nu, x)
    s, _ = sf.sinpi_cospi(nu)
    ref = -2 * s / (math.pi * x)
    scale = max(abs(sf.bessel_I(nu, x) * sf.bessel_I(-nu, x, derivative=1)), 1e-300)
    assert abs(w - ref) <= 1e-10 * max(abs(ref), scale)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), st.floats(0.2, 6.0))
def test_wronskian_k_i(nu, x):
    w = sf.bessel_K(nu, x) * sf.bessel_I(nu, x, derivative=1) - sf.bessel_K(nu, x, derivative=1) * sf.bessel_I(nu, x)
    assert abs(w - 1 / x) <= 1e-10 * max(1 / x, abs(sf.bessel_K(nu, x) * sf.bessel_I(nu, x, derivative=1)))


@pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
def test_integer_order_collapse(n):
    for x in (0.3, 5.0):
        assert abs(sf.bessel_I(n, x) - sf.bessel_I(-n, x)) < 1e-9 * max(1.0, abs(sf.bessel_I(n, x)))
        assert abs(sf.bessel_J(-n, x) - (-1) ** n * sf.bessel_J(n, x)) < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.complex_numbers(max_magnitude=6, allow_nan=False, allow_infinity=False), st.floats(0.2, 6.0))
def test_order_derivatives_match_finite_differences(nu, x):
    h = 1e-5
    for fn, dfn in ((sf.bessel_I, sf.dI_dnu), (sf.bessel_J, sf.dJ_dnu)):
        fd = (fn(nu + h, x) - fn(nu - h, x)) / (2 * h)
        d = dfn(nu, x)
        scale = max(abs(fn(nu, x)), abs(d), 1e-300)
        assert abs(d - fd) <= 1e-7 * scale


def test_vectorised_matches_scalar():
    nus = np.array([0.3 + 0.7j, -5.5 + 2j, 8.0, -9.99])
    vec = sf.bessel_I(nus, 5.0)
    for nu, v in zip(nus, vec):
        assert vec.shape == (4,)
        assert v == sf.bessel_I(nu, 5.0)
