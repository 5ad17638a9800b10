"""Complex-order special functions at real argument.

Gamma-family functions are thin wrappers over :mod:`scipy.special` with
explicit pole handling.  The Bessel functions of complex order are summed
from their ascending series, weighted by the reciprocal Gamma function so
that every function is entire in the order ``nu``.

All public functions accept scalars or numpy arrays (broadcast against each
other) and return a numpy complex scalar for scalar input.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from jostlab.errors import NoConvergence, NonFiniteResult, PoleOfGamma, QuadratureFailure

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "log_gamma",
    "recip_gamma",
    "digamma",
    "bessel_I",
    "bessel_J",
    "bessel_K",
    "dI_dnu",
    "dJ_dnu",
    "neumann_identity_residual",
]

POLE_TOL = 1e-12
# dist(nu, Z) below which K switches to its integer-order limit branch; the
# connection formula loses ~|I_nu/K_nu|/dist digits, so 1e-4 is too close
K_SEAM = 1e-2
_gl_x, _gl_w = np.polynomial.legendre.leggauss(4)
# Gauss-Legendre nodes and weights on [0, 1]
GL_NODES = tuple(0.5 * (_gl_x + 1.0))
GL_WEIGHTS = tuple(0.5 * _gl_w)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the ascending series."""

    max_terms: int = 400
    tail_tolerance: float = 1e-16

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 30:
            raise ValueError(f"max_terms must be an integer >= 30, got {self.max_terms!r}")
        if not 0.0 < self.tail_tolerance <= 1e-6:
            raise ValueError(f"tail_tolerance must lie in (0, 1e-6], got {self.tail_tolerance!r}")


DEFAULT_CONTROL = SeriesControl()


def _out(a):
    return a[()] if isinstance(a, np.ndarray) and a.ndim == 0 else a


def _sign_of_int(n):
    return np.where(np.mod(n, 2) == 0, 1.0, -1.0)


def sinpi_cospi(z):
    """Return ``(sin(pi z), cos(pi z))`` with the real part reduced first.

    Exact zeros at integers; full relative accuracy close to them.
    """
    z = np.asarray(z, dtype=complex)
    n = np.round(z.real)
    f = z - n
    sgn = _sign_of_int(n)
    return sgn * np.sin(np.pi * f), sgn * np.cos(np.pi * f)


def _distance_to_nonpositive_int(z):
    n = np.minimum(np.round(z.real), 0.0)
    return np.abs(z - n)


def _check_gamma_pole(z):
    bad = _distance_to_nonpositive_int(z) < POLE_TOL
    if np.any(bad):
        where = np.asarray(z)[bad].ravel()[0]
        raise PoleOfGamma(f"Gamma has a pole at z = {where}")


def log_gamma(z):
    """Principal-branch log Gamma (continuous off the negative real axis)."""
    z = np.asarray(z, dtype=complex)
    _check_gamma_pole(z)
    return _out(special.loggamma(z))


def recip_gamma(z):
    """1/Gamma(z); entire, exactly zero at z = 0, -1, -2, ..."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = np.exp(-special.loggamma(z[right]))
    left = ~right
    if np.any(left):
        zl = z[left]
        s, _ = sinpi_cospi(zl)
        out[left] = s * np.exp(special.loggamma(1.0 - zl)) / np.pi
    return _out(out)


def digamma(z):
    """psi(z) = Gamma'(z)/Gamma(z)."""
    z = np.asarray(z, dtype=complex)
    _check_gamma_pole(z)
    return _out(special.psi(z))


def psi_recip_gamma(z):
    """psi(z)/Gamma(z) = -d/dz [1/Gamma(z)], finite at the nonpositive integers.

    Left of Re z = 1/2 the reflection formula gives
    -Gamma(1-z) [cos(pi z) - sin(pi z) psi(1-z)/pi].
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        zr = z[right]
        out[right] = special.psi(zr) * np.exp(-special.loggamma(zr))
    left = ~right
    if np.any(left):
        zl = z[left]
        s, c = sinpi_cospi(zl)
        w = 1.0 - zl
        out[left] = -np.exp(special.loggamma(w)) * (c - s * special.psi(w) / np.pi)
    return _out(out)


def _falling(p, d):
    if d == 0:
        return 1.0
    if d == 1:
        return p
    return p * (p - 1.0)


def ascending_series(nu, x, *, alternating, weight="rgamma", derivative=0, ctl=None):
    """Sum  sum_m (+-1)^m (x/2)^(nu+2m) w(nu+m+1) / m!  (x-derivative of order 0..2).

    ``weight`` is ``"rgamma"`` for 1/Gamma or ``"psi"`` for psi/Gamma.  Each
    element stops once two consecutive terms fall below ``tail_tolerance``
    times its partial sum; elements are frozen independently so a result never
    depends on its batch neighbours.  ``x`` may be complex here (principal
    branch of the power); public wrappers restrict it to x > 0.
    """
    ctl = ctl or DEFAULT_CONTROL
    if derivative not in (0, 1, 2):
        raise ValueError("derivative must be 0, 1 or 2")
    wfun = recip_gamma if weight == "rgamma" else psi_recip_gamma
    nu, x = np.broadcast_arrays(np.asarray(nu, dtype=complex), np.asarray(x, dtype=complex))
    shape = nu.shape
    nu = nu.ravel()
    x = x.ravel()
    half = x / 2.0
    half2 = half * half
    log_half = np.log(half)
    base = np.exp(nu * log_half)
    if derivative:
        base = base / x**derivative

    # before this index terms may still be growing or pinned at exact zeros
    m_start = np.maximum(np.ceil(-nu.real), 0.0) + 2.0
    m_start = np.maximum(m_start, np.ceil(np.abs(half2)))

    total = np.zeros_like(nu)
    coef = np.ones_like(nu)
    small_prev = np.zeros(nu.shape, dtype=bool)
    done = np.zeros(nu.shape, dtype=bool)
    sgn = -1.0 if alternating else 1.0
    idx = np.arange(nu.size)
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(ctl.max_terms):
            live = idx[~done]
            if live.size == 0:
                break
            nl = nu[live]
            term = base[live] * coef[live] * wfun(nl + m + 1.0) * _falling(nl + 2.0 * m, derivative)
            total[live] += term
            small = np.abs(term) <= ctl.tail_tolerance * np.abs(total[live])
            ok = small & small_prev[live] & (m >= m_start[live])
            small_prev[live] = small
            done[live] = ok | ~np.isfinite(total[live])
            coef[live] *= sgn * half2[live] / (m + 1.0)
    if not np.all(done):
        bad = nu[~done][0]
        raise NoConvergence(
            f"ascending series did not converge in {ctl.max_terms} terms (nu={bad})"
        )
    return total.reshape(shape)


def _check_x(x):
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise ValueError("argument x must be real and > 0")
    return xa


def _finite(out, what):
    if not np.all(np.isfinite(out)):
        raise NonFiniteResult(f"{what} overflowed")
    return _out(out)


def bessel_I(nu, x, ctl=None, derivative=0):
    """Modified Bessel function I_nu(x) of complex order, real x > 0.

    ``derivative`` selects d^k/dx^k (k <= 2), term-wise differentiated.
    """
    x = _check_x(x)
    return _finite(ascending_series(nu, x, alternating=False, derivative=derivative, ctl=ctl), "I_nu")


def bessel_J(nu, x, ctl=None, derivative=0):
    """Bessel function J_nu(x) of complex order, real x > 0."""
    x = _check_x(x)
    return _finite(ascending_series(nu, x, alternating=True, derivative=derivative, ctl=ctl), "J_nu")


def _order_derivative(nu, x, alternating, ctl, derivative):
    if derivative not in (0, 1):
        raise ValueError("order derivatives support derivative in (0, 1)")
    log_half = np.log(np.asarray(x, dtype=float) / 2.0)
    ser = ascending_series(nu, x, alternating=alternating, weight="psi", derivative=derivative, ctl=ctl)
    val = ascending_series(nu, x, alternating=alternating, derivative=derivative, ctl=ctl)
    out = log_half * val - ser
    if derivative == 1:
        out = out + ascending_series(nu, x, alternating=alternating, ctl=ctl) / x
    return out


def dI_dnu(nu, x, ctl=None, derivative=0):
    """d I_nu(x) / d nu, valid for every complex nu (not only at roots).

    ln(x/2) I_nu(x) - sum (x/2)^(nu+2m) psi(nu+m+1)/Gamma(nu+m+1)/m!
    """
    x = _check_x(x)
    return _finite(_order_derivative(nu, x, False, ctl, derivative), "dI/dnu")


def dJ_dnu(nu, x, ctl=None, derivative=0):
    """d J_nu(x) / d nu; alternating-sign mirror of :func:`dI_dnu`."""
    x = _check_x(x)
    return _finite(_order_derivative(nu, x, True, ctl, derivative), "dJ/dnu")


def bessel_K(nu, x, ctl=None, derivative=0):
    """Macdonald function K_nu(x) for complex nu and real x > 0.

    Away from the integers: pi/(2 sin(nu pi)) [I_{-nu}(x) - I_nu(x)].
    Within ``K_SEAM`` of an integer n the bracket divided by (nu - n) is
    replaced by the mean of its nu-derivative over Gauss-Legendre nodes
    between n and nu; at nu = n exactly this is the L'Hopital limit
    (-1)^(n+1)/2 [dI_dnu(-n, x) + dI_dnu(n, x)].
    """
    if derivative not in (0, 1):
        raise ValueError("bessel_K supports derivative in (0, 1)")
    x = _check_x(x)
    nu, x = np.broadcast_arrays(np.asarray(nu, dtype=complex), x)
    out = np.empty(nu.shape, dtype=complex)
    n = np.round(nu.real)
    eps = nu - n
    near = np.abs(eps) <= K_SEAM
    far = ~near
    if np.any(far):
        nf, xf = nu[far], x[far]
        s, _ = sinpi_cospi(nf)
        bracket = ascending_series(-nf, xf, alternating=False, derivative=derivative, ctl=ctl) - ascending_series(
            nf, xf, alternating=False, derivative=derivative, ctl=ctl
        )
        out[far] = np.pi / (2.0 * s) * bracket
    if np.any(near):
        nn, en, xn = n[near], eps[near], x[near]
        pe = np.pi * en
        with np.errstate(invalid="ignore", divide="ignore"):
            sinc = np.where(en == 0, 1.0 + 0j, np.sin(pe) / np.where(en == 0, 1.0, pe))
        factor = _sign_of_int(nn) / (2.0 * sinc)
        acc = np.zeros_like(en)
        for t, w in zip(GL_NODES, GL_WEIGHTS):
            mu = nn + t * en
            acc += w * (
                -_order_derivative(-mu, xn, False, ctl, derivative) - _order_derivative(mu, xn, False, ctl, derivative)
            )
        out[near] = factor * acc
    return _finite(out, "K_nu")


def neumann_identity_residual(mu, nu, x, ctl=None, limit=200):
    """|I_mu(x) I_nu(x) - (2/pi) int_0^{pi/2} I_{mu+nu}(2x cos t) cos((mu-nu) t) dt|."""
    mu, nu = complex(mu), complex(nu)
    if not (mu + nu).real > -1.0:
        raise ValueError("Neumann formula requires Re(mu + nu) > -1")
    x = float(x)
    if not x > 0:
        raise ValueError("x must be > 0")
    lhs = complex(bessel_I(mu, x, ctl) * bessel_I(nu, x, ctl))
    order = mu + nu
    diff = mu - nu

    def integrand(t):
        arg = 2.0 * x * math.cos(t)
        if arg <= 0.0:
            # t = pi/2 exactly: I_order(0) is 1 for order 0 and 0 for Re(order) > 0
            return 1.0 + 0j if order == 0 else 0j
        return complex(bessel_I(order, arg, ctl)) * np.cos(diff * t)

    parts = []
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            for pick in (lambda z: z.real, lambda z: z.imag):
                val, _ = integrate.quad(
                    lambda t: pick(integrand(t)), 0.0, math.pi / 2, epsabs=1e-14, epsrel=1e-13, limit=limit
                )
                parts.append(val)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(str(exc)) from exc
    rhs = 2.0 / math.pi * complex(parts[0], parts[1])
    return abs(lhs - rhs)
