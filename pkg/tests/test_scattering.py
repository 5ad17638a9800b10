import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracle_values as ov
from conftest import ATT, REP
from jostlab.errors import IrregularSingular, JostSingular, SMatrixPole
from jostlab.scattering import (
    MomentumPoint,
    PotentialSpec,
    Sign,
    f_irregular,
    integrate_radial,
    jost_minus,
    jost_plus,
    jost_plus_bessel,
    ode_oracle_phase_shift,
    phi_pair_basis,
    phi_regular,
    s_matrix,
    smatrix_values,
)

POTS = {"repulsive": REP, "attractive": ATT}

# k away from redundant poles, Gamma zeros and the deepest Jost zeros
kpoints = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def rel(a, b):
    return abs(a - b) / abs(b)


def regular_k(k):
    t = 2j * k
    return abs(t - round(t.real)) > 1e-3


# ---------------------------------------------------------------- types


def test_potential_spec_validation():
    with pytest.raises(ValueError):
        PotentialSpec(0.0)
    with pytest.raises(ValueError):
        PotentialSpec(5.0, a=-1.0)
    with pytest.raises(ValueError):
        PotentialSpec(5.0, sign="neutral")
    assert PotentialSpec(5.0, 2.0).u0 == pytest.approx(1.5625)
    assert REP.flipped() == ATT
    assert ATT.sign is Sign.ATTRACTIVE


def test_momentum_point():
    m = MomentumPoint.from_k(0.3 - 0.1j, 2.0)
    assert m.rho == pytest.approx(1.2 - 0.4j)
    assert m.nu == pytest.approx(0.4 + 1.2j)


# ---------------------------------------------------------------- oracle values


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
def test_smatrix_against_oracle(sign):
    for k, want in getattr(ov, f"SMATRIX_{sign.upper()}"):
        assert rel(s_matrix(k, POTS[sign]), want) < 1e-11, k


def test_smatrix_scales_with_range():
    pot = PotentialSpec(3.0, 2.0)
    for k, want in ov.SMATRIX_REPULSIVE_A2:
        assert rel(s_matrix(k, pot), want) < 1e-11


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
def test_jost_against_oracle(sign):
    pot = POTS[sign]
    for k, want in getattr(ov, f"JOST_PLUS_{sign.upper()}"):
        assert rel(jost_plus(k, pot), want) < 1e-11
        assert rel(jost_plus_bessel(k, pot), want) < 1e-11
        assert rel(jost_minus(-k, pot), want) < 1e-11


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
def test_irregular_against_oracle(sign):
    for k, r, want in getattr(ov, f"F_PLUS_{sign.upper()}"):
        assert rel(f_irregular(k, r, POTS[sign]), want) < 1e-11


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
def test_regular_against_oracle(sign):
    for k, r, want in getattr(ov, f"PHI_{sign.upper()}"):
        assert rel(phi_regular(r, k, POTS[sign]), want) < 1e-10, (k, r)


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
def test_phase_shift_against_oracle(sign):
    for (alpha, k), delta in getattr(ov, f"DELTA_{sign.upper()}").items():
        s = s_matrix(k, PotentialSpec(alpha, 1.0, sign))
        assert cmath.exp(2j * delta) == pytest.approx(s, abs=1e-12)


# ---------------------------------------------------------------- poles and singular points


def test_redundant_pole_raises():
    with pytest.raises(SMatrixPole) as exc:
        s_matrix(0.5j, REP)
    assert exc.value.kind == "gamma-pole"
    assert exc.value.n == 1
    assert exc.value.k == pytest.approx(0.5j)


def test_near_jost_zero_is_large():
    # a floating-point root leaves F+ tiny but nonzero
    nu0 = ov.ROOTS["attractive"][0][0]
    assert abs(s_matrix(1j * nu0 / 2, ATT)) > 1e10


def test_smatrix_values_never_raises():
    vals = smatrix_values(np.array([0.5j, -0.5j, 1.0, 1.5j]), REP)
    assert np.isinf(vals[0]) and np.isinf(vals[3])
    assert vals[1] == 0
    assert abs(abs(vals[2]) - 1) < 1e-13


def test_jost_singular_points():
    with pytest.raises(JostSingular):
        jost_plus(-0.5j, REP)
    with pytest.raises(JostSingular):
        jost_minus(1.0j, REP)
    with pytest.raises(IrregularSingular):
        f_irregular(-1.5j, 1.0, ATT)
    with pytest.raises(ValueError):
        f_irregular(1.0, -1.0, REP)
    with pytest.raises(ValueError):
        f_irregular(1.0, 1.0, REP, direction="up")


def test_s_at_origin_is_one():
    for pot in POTS.values():
        assert s_matrix(0.0, pot) == pytest.approx(1.0, abs=1e-15)


# ---------------------------------------------------------------- symmetries


@settings(max_examples=80, deadline=None)
@given(kpoints)
def test_reflection_and_schwarz(k):
    assume(regular_k(k) and regular_k(-k))
    for pot in POTS.values():
        try:
            s = s_matrix(k, pot)
            sm = s_matrix(-k, pot)
            sc = s_matrix(k.conjugate(), pot)
        except SMatrixPole:
            continue
        assert abs(s * sm - 1) < 1e-9
        assert abs(np.conj(sc) * s - 1) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-8, max_value=8))
def test_unitarity_on_real_axis(k):
    for pot in POTS.values():
        assert abs(abs(s_matrix(k, pot)) - 1) < 1e-12


@settings(max_examples=40, deadline=None)
@given(kpoints)
def test_factorisation(k):
    assume(regular_k(k) and regular_k(-k))
    for pot in POTS.values():
        try:
            s = s_matrix(k, pot)
        except SMatrixPole:
            continue
        assert rel(s, jost_minus(k, pot) / jost_plus(k, pot)) < 1e-12


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
def test_irregular_wronskian(sign):
    pot = POTS[sign]
    for k in (0.3, 1.1, 0.6 - 0.2j, 2.0 + 0.1j):
        for r in (0.0, 0.7, 3.0):
            fp, dfp = f_irregular(k, r, pot, "plus", derivative=True)
            fm, dfm = f_irregular(k, r, pot, "minus", derivative=True)
            w = fp * dfm - dfp * fm
            assert rel(w, -2j * k) < 1e-9


def test_irregular_derivative_by_difference():
    h = 1e-5
    for pot in POTS.values():
        f0, d0 = f_irregular(0.7 - 0.1j, 1.3, pot, derivative=True)
        fd = (f_irregular(0.7 - 0.1j, 1.3 + h, pot) - f_irregular(0.7 - 0.1j, 1.3 - h, pot)) / (2 * h)
        assert rel(d0, fd) < 1e-8


def test_jost_is_irregular_at_origin():
    for pot in POTS.values():
        assert rel(f_irregular(0.8, 0.0, pot), jost_plus(0.8, pot)) < 1e-13


# ---------------------------------------------------------------- regular solution


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
@pytest.mark.parametrize("k", [0.37, 0.6j, 1.1 - 0.25j, 0.5j, 1.0j + 1e-4, 0.0])
def test_regular_initial_values(sign, k):
    pot = POTS[sign]
    assert abs(phi_regular(0.0, k, pot)) < 1e-11
    h = 1e-5
    slope = (phi_regular(h, k, pot) - phi_regular(0.0, k, pot)) / h
    assert abs(phi_regular(0.0, k, pot, derivative=True) - 1) < 1e-10
    assert abs(slope - 1) < 1e-4


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
def test_regular_matches_ode(sign):
    pot = POTS[sign]
    rs = np.array([0.5, 2.0, 5.0])
    for k in (0.37, 1.1 - 0.25j, 0.6j):
        u, du = integrate_radial(k, pot, rs)
        assert np.max(np.abs(phi_regular(rs, k, pot) - u)) < 1e-9 * max(1.0, np.max(np.abs(u)))
        assert np.max(np.abs(phi_regular(rs, k, pot, derivative=True) - du)) < 1e-9 * max(1.0, np.max(np.abs(du)))


def test_alternate_basis_agrees():
    # repulsive pair basis against the K-form, away from integer orders
    k = 0.37 / 2
    for pot in POTS.values():
        for r in (0.5, 2.0):
            assert rel(phi_pair_basis(r, k, pot), phi_regular(r, k, pot)) < 1e-10


def test_attractive_limit_branch_is_continuous():
    # straddle the seam around i rho = 1
    for d in (0.99e-2, 1.01e-2):
        k_in = (1 - d * (1 - 1e-9)) / 2j
        k_out = (1 - d * (1 + 1e-9)) / 2j
        assert rel(phi_regular(2.0, k_in, ATT), phi_regular(2.0, k_out, ATT)) < 1e-8


def test_regular_rejects_negative_r():
    with pytest.raises(ValueError):
        phi_regular(-1.0, 0.5, REP)


# ---------------------------------------------------------------- phase shifts


@pytest.mark.parametrize("sign", ["repulsive", "attractive"])
@pytest.mark.parametrize("alpha", [1.0, 5.0])
@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_ode_phase_shift_matches_s(sign, alpha, k):
    pot = PotentialSpec(alpha, 1.0, sign)
    delta = ode_oracle_phase_shift(k, pot)
    assert abs(cmath.exp(2j * delta) - s_matrix(k, pot)) < 1e-6


def test_weak_coupling_gives_no_phase_shift():
    pot = PotentialSpec(1e-6, 1.0)
    assert abs(cmath.phase(s_matrix(0.8, pot))) < 1e-10


def test_repulsive_phase_shift_negative_at_low_k():
    for k in (0.05, 0.2, 0.5):
        assert cmath.phase(s_matrix(k, REP)) < 0
        assert ode_oracle_phase_shift(k, REP) < 0


def test_phase_shift_rejects_complex_k():
    with pytest.raises(ValueError):
        ode_oracle_phase_shift(-1.0, REP)
    assert math.isfinite(ode_oracle_phase_shift(1.3, ATT))
