"""Redundant-pole sums for the Heisenberg condition and the half-integer asymptote.

The redundant poles k_n = in/(2a) carry

    2 pi i Res S(k_n) = (pi/a) (-1)^{n-1} w^n / (n! (n-1)!),   w = +-alpha^2/4,

so summing them against exp(-n (r+r')/(2a)) gives a Bessel series in
z = (alpha/2) exp(-(r+r')/(4a)):  +(pi/a) z J1(2z) for the repulsive
potential and -(pi/a) z I1(2z) for the attractive one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from jostlab.errors import NonPositiveBoundResidue
from jostlab.scattering import BesselKind, family, s_matrix
from jostlab.spectrum import FeatureKind, default_residue_radius, numeric_residue

MAX_TERMS = 400


@dataclass(frozen=True)
class CompletenessQuery:
    r_plus_rprime: float
    n_terms: int = 40

    def __post_init__(self):
        if not (math.isfinite(self.r_plus_rprime) and self.r_plus_rprime >= 0):
            raise ValueError("r + r' must be finite and >= 0")
        if not 1 <= self.n_terms <= MAX_TERMS:
            raise ValueError(f"n_terms must be in 1..{MAX_TERMS}")


def z_of(r_sum, pot):
    """Series variable z = (alpha/2) exp(-(r+r')/(4a))."""
    return pot.alpha / 2.0 * math.exp(-r_sum / (4.0 * pot.a))


def _log_term(n, log_z):
    return 2 * n * log_z - math.lgamma(n + 1) - math.lgamma(n)


def redundant_pole_sum(q, pot):
    """Partial sum of 2 pi i Res S(k_n) exp(-n (r+r')/(2a)) over n = 1..n_terms."""
    log_z = math.log(pot.alpha / 2.0) - q.r_plus_rprime / (4.0 * pot.a)
    repulsive = family(pot) is BesselKind.I
    total = 0.0
    for n in range(1, q.n_terms + 1):
        sign = (1.0 if n % 2 else -1.0) if repulsive else -1.0
        total += sign * math.exp(_log_term(n, log_z))
    return math.pi / pot.a * total


def alternating_series(z, n_terms, a=1.0):
    """(pi/a) sum_{n=1}^{N} (-1)^n z^{2n} / (n!(n-1)!): the alternating series with the
    sign pattern (-1)^n, whose exact sum is -(pi/a) z J1(2z)."""
    if z == 0:
        return 0.0
    log_z = math.log(z)
    total = 0.0
    for n in range(1, n_terms + 1):
        total += (-1.0) ** n * math.exp(_log_term(n, log_z))
    return math.pi / a * total


def closed_form(z, pot):
    """Infinite-sum value of :func:`redundant_pole_sum` at series variable z."""
    if z < 0:
        raise ValueError("z must be >= 0")
    if family(pot) is BesselKind.I:
        return math.pi / pot.a * z * float(special.j1(2 * z))
    return -math.pi / pot.a * z * float(special.i1(2 * z))


def half_integer_asymptote(n, pot=None):
    """Large-n form of S at k = i(n + 1/2)/(2a): 2 (2n)!! / ((2n-1)!! sqrt(2 pi (2n+1))).

    Uses (0)!! = (-1)!! = 1; identical for both signs of the potential.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    log2 = math.log(2.0)
    log_even = n * log2 + math.lgamma(n + 1)
    log_odd = math.lgamma(2 * n + 1) - n * log2 - math.lgamma(n + 1)
    return 2.0 * math.exp(log_even - log_odd) / math.sqrt(2 * math.pi * (2 * n + 1))


def half_integer_ratio(n, pot):
    """|S(i(n + 1/2)/(2a))| divided by :func:`half_integer_asymptote`."""
    s = s_matrix(1j * (n + 0.5) / (2 * pot.a), pot)
    return abs(s) / half_integer_asymptote(n, pot)


def heisenberg_bound_state_terms(pot, features, tol=1e-8):
    """2 pi i times the contour residue of S at every bound state in ``features``."""
    out = []
    for f in features:
        if f.kind is not FeatureKind.BOUND_STATE:
            continue
        radius = default_residue_radius(f, pot, features)
        val = 2j * math.pi * numeric_residue(f.k_loc, pot, radius)
        if not (val.real > 0 and abs(val.imag) <= tol * abs(val)):
            raise NonPositiveBoundResidue(f"bound state at k = {f.k_loc} has 2 pi i Res = {val}")
        out.append(val.real)
    return out

