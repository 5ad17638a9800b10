"""Regular and irregular solutions, Jost functions and the s-wave S-matrix.

Units are hbar = 2m = 1.  A potential is fixed by its range ``a``, the
dimensionless coupling ``alpha = 2 a sqrt(|V0|)`` and its sign; the repulsive
case is built from I_nu, the attractive one from J_nu.  With rho = 2ak the
Jost function is the confluent limit function

    F+(k) = B_{-i rho}(alpha) Gamma(1 - i rho) (alpha/2)^{i rho}
          = 0F1(; 1 - i rho; +-alpha^2/4),

which is what :func:`jost_plus` sums.  S(k) = F-(k)/F+(k).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from jostlab import special_fn as sf
from jostlab.errors import IrregularSingular, JostSingular, NoConvergence, OdeFailure, SMatrixPole

POLE_TOL = 1e-12


class Sign(str, enum.Enum):
    REPULSIVE = "repulsive"
    ATTRACTIVE = "attractive"


class BesselKind(str, enum.Enum):
    I = "I"  # noqa: E741
    J = "J"


@dataclass(frozen=True)
class PotentialSpec:
    """V(r) = +-|V0| exp(-r/a) with alpha = 2a sqrt(|V0|)."""

    alpha: float
    a: float = 1.0
    sign: Sign = Sign.REPULSIVE

    def __post_init__(self):
        object.__setattr__(self, "sign", Sign(self.sign))
        if not (math.isfinite(self.a) and self.a > 0):
            raise ValueError(f"range a must be > 0, got {self.a!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"coupling alpha must be > 0, got {self.alpha!r}")

    @property
    def u0(self):
        """Strength |V0| of the potential in units hbar = 2m = 1."""
        return (self.alpha / (2.0 * self.a)) ** 2

    def flipped(self):
        other = Sign.ATTRACTIVE if self.sign is Sign.REPULSIVE else Sign.REPULSIVE
        return PotentialSpec(self.alpha, self.a, other)


@dataclass(frozen=True)
class MomentumPoint:
    """A momentum k together with rho = 2ak and the order nu = i rho."""

    k: complex
    rho: complex
    nu: complex

    @classmethod
    def from_k(cls, k, a):
        k = complex(k)
        rho = 2.0 * a * k
        return cls(k, rho, 1j * rho)


def family(pot):
    """Bessel family appearing in the solutions: I (repulsive) or J (attractive)."""
    return BesselKind.I if pot.sign is Sign.REPULSIVE else BesselKind.J


def bessel_fn(kind):
    return sf.bessel_I if BesselKind(kind) is BesselKind.I else sf.bessel_J


def bessel_dnu(kind):
    return sf.dI_dnu if BesselKind(kind) is BesselKind.I else sf.dJ_dnu


def _argument_sq4(pot):
    """The 0F1 argument +-alpha^2/4 (sign of the potential)."""
    z = pot.alpha**2 / 4.0
    return z if pot.sign is Sign.REPULSIVE else -z


def hyp0f1(b, w, ctl=None):
    """0F1(; b; w) = sum_m w^m / ((b)_m m!) for complex b and w (vectorised).

    Elements whose ``b`` is a nonpositive integer come back non-finite.
    """
    ctl = ctl or sf.DEFAULT_CONTROL
    b, w = np.broadcast_arrays(np.asarray(b, dtype=complex), np.asarray(w, dtype=complex))
    shape = b.shape
    b = b.ravel()
    w = w.ravel()
    m_start = np.maximum(np.ceil(-b.real), 0.0) + 2.0
    m_start = np.maximum(m_start, np.ceil(np.sqrt(np.abs(w))))
    total = np.zeros_like(b)
    term = np.ones_like(b)
    small_prev = np.zeros(b.shape, dtype=bool)
    done = np.zeros(b.shape, dtype=bool)
    idx = np.arange(b.size)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for m in range(ctl.max_terms):
            live = idx[~done]
            if live.size == 0:
                break
            t = term[live]
            total[live] += t
            small = np.abs(t) <= ctl.tail_tolerance * np.abs(total[live])
            ok = small & small_prev[live] & (m >= m_start[live])
            small_prev[live] = small
            done[live] = ok | ~np.isfinite(total[live])
            term[live] = t * w[live] / ((b[live] + m) * (m + 1.0))
    if not np.all(done):
        raise NoConvergence(f"0F1 series did not converge in {ctl.max_terms} terms (b={b[~done][0]})")
    return total.reshape(shape)


def _out(a):
    return a[()] if isinstance(a, np.ndarray) and a.ndim == 0 else a


def _near_int(t, positive):
    """Integer n (>= 1 if positive, <= -1 otherwise) within POLE_TOL of t, or None per element."""
    n = np.round(t.real)
    hit = np.abs(t - n) < POLE_TOL
    hit &= (n >= 1) if positive else (n <= -1)
    return hit, n


def jost_plus(k, pot, ctl=None):
    """Jost function F+(k); zero exactly where B_{-i rho}(alpha) vanishes."""
    t = 2j * pot.a * np.asarray(k, dtype=complex)
    hit, n = _near_int(t, positive=True)
    if np.any(hit):
        raise JostSingular(f"F+ is singular at i*rho = {int(n[hit].ravel()[0])} (k = -i n/(2a))")
    return _out(hyp0f1(1.0 - t, _argument_sq4(pot), ctl))


def jost_minus(k, pot, ctl=None):
    """Complementary Jost function F-(k) = F+(-k)."""
    t = -2j * pot.a * np.asarray(k, dtype=complex)
    hit, n = _near_int(t, positive=True)
    if np.any(hit):
        raise JostSingular(
            f"F- is singular at i*rho = {-int(n[hit].ravel()[0])} (redundant pole k = i n/(2a))"
        )
    return _out(hyp0f1(1.0 - t, _argument_sq4(pot), ctl))


def jost_plus_bessel(k, pot, ctl=None):
    """F+(k) assembled as B_{-i rho}(alpha) Gamma(1 - i rho) (alpha/2)^{i rho}."""
    t = 2j * pot.a * np.asarray(k, dtype=complex)
    hit, n = _near_int(t, positive=True)
    if np.any(hit):
        raise JostSingular("F+ is singular here")
    b = bessel_fn(family(pot))(-t, pot.alpha, ctl)
    return _out(b * np.exp(sf.special.loggamma(1.0 - t) + t * math.log(pot.alpha / 2.0)))


def smatrix_values(k, pot, ctl=None):
    """S(k) on an array without raising.

    Redundant poles come back as ``inf``, the Gamma zeros at k = -in/(2a) as
    exactly 0, and any other non-finite result as ``nan``.
    """
    k = np.asarray(k, dtype=complex)
    t = 2j * pot.a * k
    z = _argument_sq4(pot)
    with np.errstate(all="ignore"):
        num = hyp0f1(1.0 + t, z, ctl)
        den = hyp0f1(1.0 - t, z, ctl)
        s = num / den
    pole, _ = _near_int(t, positive=False)
    zero, _ = _near_int(t, positive=True)
    s = np.where(np.isfinite(s), s, np.nan + 0j)
    s = np.where(zero, 0j, s)
    s = np.where(pole, complex(np.inf, 0.0), s)
    return _out(s)


def s_matrix(k, pot, ctl=None):
    """S(k) = F-(k)/F+(k); raises :class:`SMatrixPole` at any pole."""
    k_arr = np.asarray(k, dtype=complex)
    t = 2j * pot.a * k_arr
    pole, n = _near_int(t, positive=False)
    if np.any(pole):
        nn = -int(n[pole].ravel()[0])
        raise SMatrixPole(
            f"S has a redundant (gamma) pole at k = {nn}i/(2a)", kind="gamma-pole", k=1j * nn / (2 * pot.a), n=nn
        )
    s = np.asarray(smatrix_values(k_arr, pot, ctl))
    bad = ~np.isfinite(s)
    if np.any(bad):
        where = complex(k_arr[bad].ravel()[0]) if k_arr.ndim else complex(k_arr)
        raise SMatrixPole(f"S has a pole (Jost-function zero) at k = {where}", kind="bessel-zero", k=where)
    return _out(s)


def f_irregular(k, r, pot, direction="plus", derivative=False, ctl=None):
    """Irregular solution f+-(k, r) ~ exp(+-ikr) as r -> infinity.

    f+(k, r) = Gamma(1 - i rho)(alpha/2)^{i rho} B_{-i rho}(x), x = alpha e^{-r/(2a)},
    summed as exp(ikr) 0F1(; 1 - i rho; +-x^2/4).  With ``derivative`` the
    pair (f, df/dr) is returned.
    """
    sgn = 1.0 if direction == "plus" else -1.0
    if direction not in ("plus", "minus"):
        raise ValueError("direction must be 'plus' or 'minus'")
    k, r = np.broadcast_arrays(np.asarray(k, dtype=complex), np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise ValueError("r must be >= 0")
    kk = sgn * k
    t = 2j * pot.a * kk
    hit, n = _near_int(t, positive=True)
    if np.any(hit):
        raise IrregularSingular(f"f_{direction} is singular at i*rho = {int(sgn * n[hit].ravel()[0])}")
    b = 1.0 - t
    w = _argument_sq4(pot) * np.exp(-r / pot.a)
    phase = np.exp(1j * kk * r)
    f0 = hyp0f1(b, w, ctl)
    val = phase * f0
    if not derivative:
        return _out(val)
    with np.errstate(divide="ignore", invalid="ignore"):
        f1 = hyp0f1(b + 1.0, w, ctl) / b
    dval = phase * (1j * kk * f0 - (w / pot.a) * f1)
    return _out(val), _out(dval)


def _phi_kernel_I(mu, pot, x, xa, derivative, ctl):
    ka = sf.bessel_K(mu, xa, ctl)
    ia = sf.bessel_I(mu, xa, ctl)
    d = 1 if derivative else 0
    return -2.0 * pot.a * (ka * sf.bessel_I(mu, x, ctl, derivative=d) - ia * sf.bessel_K(mu, x, ctl, derivative=d))


def _pair_bracket(mu, alpha, x, kind, derivative, ctl):
    B = bessel_fn(kind)
    d = 1 if derivative else 0
    return B(-mu, alpha, ctl) * B(mu, x, ctl, derivative=d) - B(mu, alpha, ctl) * B(-mu, x, ctl, derivative=d)


def _pair_bracket_dmu(mu, alpha, x, kind, derivative, ctl):
    B = bessel_fn(kind)
    dB = bessel_dnu(kind)
    d = 1 if derivative else 0
    return (
        -dB(-mu, alpha, ctl) * B(mu, x, ctl, derivative=d)
        + B(-mu, alpha, ctl) * dB(mu, x, ctl, derivative=d)
        - dB(mu, alpha, ctl) * B(-mu, x, ctl, derivative=d)
        + B(mu, alpha, ctl) * dB(-mu, x, ctl, derivative=d)
    )


def phi_pair_basis(r, k, pot, derivative=False, ctl=None):
    """Regular solution in the {B_{i rho}, B_{-i rho}} basis,

        phi = -pi a / sin(i rho pi) [B_{-i rho}(alpha) B_{i rho}(x) - B_{i rho}(alpha) B_{-i rho}(x)],

    with no special handling at integer i rho (the bracket vanishes there).
    """
    mu = 2j * pot.a * complex(k)
    r = np.asarray(r, dtype=float)
    x = pot.alpha * np.exp(-r / (2.0 * pot.a))
    s, _ = sf.sinpi_cospi(mu)
    out = -math.pi * pot.a / s * _pair_bracket(mu, pot.alpha, x, family(pot), derivative, ctl)
    if derivative:
        out = out * (-x / (2.0 * pot.a))
    return _out(out)


def phi_regular(r, k, pot, derivative=False, ctl=None):
    """Regular solution phi(k, r) with phi(0) = 0 and phi'(0) = 1.

    Repulsive: -2a [K_{i rho}(alpha) I_{i rho}(x) - I_{i rho}(alpha) K_{i rho}(x)].
    Attractive: the Wronskian-normalised {J_{i rho}, J_{-i rho}} combination,
    switched to a nu-derivative limit within ``K_SEAM`` of integer i rho.
    ``derivative`` returns d phi/dr instead of phi.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be >= 0")
    mu = 2j * pot.a * complex(k)
    x = pot.alpha * np.exp(-r / (2.0 * pot.a))
    if family(pot) is BesselKind.I:
        out = _phi_kernel_I(mu, pot, x, pot.alpha, derivative, ctl)
    else:
        n = round(mu.real)
        eps = mu - n
        if abs(eps) > sf.K_SEAM:
            s, _ = sf.sinpi_cospi(mu)
            out = -math.pi * pot.a / s * _pair_bracket(mu, pot.alpha, x, BesselKind.J, derivative, ctl)
        else:
            # sin(mu pi) = (-1)^n sin(eps pi) and bracket(n) = 0, so bracket/eps is
            # the mean of its mu-derivative along [n, mu]
            ratio = 1.0 / math.pi if eps == 0 else eps / complex(np.sin(math.pi * eps))
            factor = (-1.0) ** (n % 2) * ratio
            acc = 0j
            for t, w in zip(sf.GL_NODES, sf.GL_WEIGHTS):
                acc = acc + w * _pair_bracket_dmu(n + t * eps, pot.alpha, x, BesselKind.J, derivative, ctl)
            out = -math.pi * pot.a * factor * acc
    if derivative:
        out = out * (-x / (2.0 * pot.a))
    return _out(np.asarray(out))


def _radial_rhs(pot, k2):
    sgn = 1.0 if pot.sign is Sign.REPULSIVE else -1.0
    u0, a = pot.u0, pot.a

    def rhs(r, y):
        return [y[1], (sgn * u0 * math.exp(-r / a) - k2) * y[0]]

    return rhs


def integrate_radial(k, pot, r_eval, rtol=1e-12, atol=1e-14):
    """Integrate u'' + [k^2 - V(r)] u = 0 from u(0)=0, u'(0)=1 (complex k allowed).

    Returns ``(u, du/dr)`` at ``r_eval``.
    """
    r_eval = np.atleast_1d(np.asarray(r_eval, dtype=float))
    k = complex(k)
    real = k.imag == 0
    y0 = np.array([0.0, 1.0], dtype=float if real else complex)
    k2 = k.real**2 if real else k * k
    sol = solve_ivp(
        _radial_rhs(pot, k2),
        (0.0, float(r_eval.max())),
        y0,
        method="DOP853",
        t_eval=np.sort(r_eval),
        rtol=rtol,
        atol=atol,
    )
    if sol.status != 0:
        raise OdeFailure(f"radial integration failed: {sol.message}")
    order = np.argsort(np.argsort(r_eval))
    return sol.y[0][order], sol.y[1][order]


def ode_oracle_phase_shift(k, pot, r_far=(38.0, 40.0)):
    """Phase shift delta(k) in (-pi/2, pi/2] from direct integration of the radial equation.

    u is matched to P sin(kr) + Q cos(kr) at r1 = 38a and r2 = 40a; when those
    two points are nearly half a period apart the value and slope at r2 are
    matched instead.
    """
    k = float(k)
    if not k > 0:
        raise ValueError("k must be real and > 0")
    r1, r2 = r_far[0] * pot.a, r_far[1] * pot.a
    u, du = integrate_radial(k, pot, [r1, r2])
    if abs(math.sin(k * (r2 - r1))) > 0.2:
        m = np.array([[math.sin(k * r1), math.cos(k * r1)], [math.sin(k * r2), math.cos(k * r2)]])
        p, q = np.linalg.solve(m, u)
    else:
        s, c = math.sin(k * r2), math.cos(k * r2)
        p = u[1] * s + du[1] * c / k
        q = u[1] * c - du[1] * s / k
    delta = math.atan2(q, p)
    delta = (delta + math.pi / 2) % math.pi - math.pi / 2
    if delta == -math.pi / 2:
        delta = math.pi / 2
    return delta
