"""Named invariant checks run by ``jostlab verify``.

Each check takes a tolerance (its own default unless overridden) and
returns ``(passed, detail)``.  All checks use a = 1, alpha = 5 unless
they say otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from jostlab import completeness as cp
from jostlab import render as rd
from jostlab import scattering as sc
from jostlab import special_fn as sf
from jostlab import spectrum as sp

REP = sc.PotentialSpec(5.0, 1.0, "repulsive")
ATT = sc.PotentialSpec(5.0, 1.0, "attractive")
FIG1 = sp.KWindow(-3.0, 3.0, -5.0, 5.0)


@dataclass(frozen=True)
class Invariant:
    name: str
    tol: float
    check: Callable[[float], tuple]
    doc: str


_REGISTRY: list = []
_CACHE: dict = {}


def invariant(name, tol):
    def deco(fn):
        _REGISTRY.append(Invariant(name, tol, fn, (fn.__doc__ or "").strip()))
        return fn

    return deco


def _spectrum(pot):
    key = (pot, FIG1)
    if key not in _CACHE:
        _CACHE[key] = sp.search_window(pot, FIG1)
    return _CACHE[key]


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _sample_k(n=200, seed=20240611):
    rng = np.random.default_rng(seed)
    ks = rng.uniform(-3, 3, n) + 1j * rng.uniform(-4.8, 4.8, n)
    # stay clear of the Gamma poles/zeros on the imaginary axis
    near = np.abs(ks.real) < 1e-3
    ks[near] += 0.05
    return ks


@invariant("bessel-real-order", 1e-12)
def _bessel_real(tol):
    """I_nu and J_nu at real order agree with scipy's iv and jv."""
    nus = np.linspace(-4.7, 6.3, 23)
    worst = 0.0
    for x in (0.5, 2.0, 5.0):
        worst = max(worst, np.max(np.abs(sf.bessel_I(nus, x).real - special.iv(nus, x)) / np.abs(special.iv(nus, x))))
        worst = max(worst, np.max(np.abs(sf.bessel_J(nus, x).real - special.jv(nus, x)) / np.abs(special.jv(nus, x))))
    return worst <= tol, f"max rel err {worst:.2e}"


@invariant("bessel-integer-reflection", 1e-12)
def _reflection(tol):
    """I_{-n} = I_n and J_{-n} = (-1)^n J_n."""
    worst = 0.0
    for n in range(0, 8):
        for x in (0.3, 5.0):
            worst = max(worst, _rel(sf.bessel_I(-n, x), sf.bessel_I(n, x)))
            worst = max(worst, _rel(sf.bessel_J(-n, x), (-1) ** n * sf.bessel_J(n, x)))
    return worst <= tol, f"max rel err {worst:.2e}"


@invariant("wronskian-I", 1e-10)
def _wronskian_i(tol):
    """W_x{I_nu, I_-nu} = -2 sin(nu pi)/(pi x)."""
    worst = 0.0
    for nu in (0.3 + 0.7j, -1.4 + 2j, 2.5 - 1j, 0.37j):
        for x in (0.5, 2.0, 5.0):
            w = sf.bessel_I(nu, x) * sf.bessel_I(-nu, x, derivative=1) - sf.bessel_I(nu, x, derivative=1) * sf.bessel_I(
                -nu, x
            )
            ref = -2 * complex(np.sin(np.pi * nu)) / (np.pi * x)
            worst = max(worst, _rel(w, ref))
    return worst <= tol, f"max rel err {worst:.2e}"


@invariant("wronskian-f", 1e-9)
def _wronskian_f(tol):
    """W_r{f+, f-} = -2ik on a 5 x 5 (k, r) grid, both signs."""
    worst = 0.0
    for pot in (REP, ATT):
        for k in (0.3, 1.0, 2.2, 0.7 - 0.4j, 1.3 + 0.2j):
            for r in (0.0, 0.5, 1.5, 4.0, 10.0):
                fp, dfp = sc.f_irregular(k, r, pot, "plus", derivative=True)
                fm, dfm = sc.f_irregular(k, r, pot, "minus", derivative=True)
                worst = max(worst, _rel(fp * dfm - dfp * fm, -2j * k))
    return worst <= tol, f"max rel err {worst:.2e}"


@invariant("regular-initial-values", 1e-10)
def _phi0(tol):
    """phi(0) = 0 and phi'(0) = 1 for both signs."""
    worst = 0.0
    for pot in (REP, ATT):
        for k in (0.37, 1.2 - 0.3j, 0.6j, 0.5j + 1e-3):
            worst = max(worst, abs(sc.phi_regular(0.0, k, pot)), abs(sc.phi_regular(0.0, k, pot, derivative=True) - 1))
    return worst <= tol, f"max err {worst:.2e}"


@invariant("jost-series-vs-bessel-product", 1e-10)
def _jost_forms(tol):
    """0F1 form of F+ equals B_{-i rho}(alpha) Gamma(1 - i rho)(alpha/2)^{i rho}."""
    worst = 0.0
    for pot in (REP, ATT):
        for k in (0.3 + 0.1j, 1.5, -0.8 - 1.1j, 0.2j):
            worst = max(worst, _rel(sc.jost_plus(k, pot), sc.jost_plus_bessel(k, pot)))
    return worst <= tol, f"max rel err {worst:.2e}"


@invariant("s-reflection", 1e-10)
def _s_reflection(tol):
    """S(k) S(-k) = 1 on 200 random k."""
    ks = _sample_k()
    worst = max(float(np.max(np.abs(sc.smatrix_values(ks, p) * sc.smatrix_values(-ks, p) - 1))) for p in (REP, ATT))
    return worst <= tol, f"max err {worst:.2e}"


@invariant("s-schwarz", 1e-10)
def _s_schwarz(tol):
    """conj(S(conj k)) S(k) = 1 on 200 random k."""
    ks = _sample_k()
    worst = max(
        float(np.max(np.abs(np.conj(sc.smatrix_values(np.conj(ks), p)) * sc.smatrix_values(ks, p) - 1)))
        for p in (REP, ATT)
    )
    return worst <= tol, f"max err {worst:.2e}"


@invariant("unitarity", 1e-12)
def _unitarity(tol):
    """|S(k)| = 1 for real k."""
    ks = np.linspace(-6, 6, 241)
    worst = max(float(np.max(np.abs(np.abs(sc.smatrix_values(ks, p)) - 1))) for p in (REP, ATT))
    return worst <= tol, f"max err {worst:.2e}"


@invariant("ode-phase-shift", 1e-6)
def _ode(tol):
    """exp(2i delta) from direct integration matches S on the real axis."""
    worst = 0.0
    for sign in ("repulsive", "attractive"):
        for alpha in (1.0, 5.0):
            pot = sc.PotentialSpec(alpha, 1.0, sign)
            for k in (0.5, 1.0, 2.0):
                d = sc.ode_oracle_phase_shift(k, pot)
                worst = max(worst, abs(np.exp(2j * d) - sc.s_matrix(k, pot)))
    return worst <= tol, f"max err {worst:.2e}"


@invariant("winding-conservation", 0.0)
def _winding(tol):
    """Found root multiplicities equal the boundary winding number."""
    out = []
    for pot in (REP, ATT):
        res = _spectrum(pot)
        n = sum(f.multiplicity for f in res.features if f.kind is not sp.FeatureKind.REDUNDANT_POLE)
        out.append((n, res.winding_total))
    ok = all(abs(a - b) <= tol for a, b in out)
    return ok, ", ".join(f"{a} roots / winding {b}" for a, b in out)


@invariant("coulomb-zero-free", 0.0)
def _coulomb(tol):
    """No complex zeros of I_nu(5) with Re nu > -1.4, none of J_nu(5) off the real axis."""
    wi = sp.region_winding(5.0, "I", sp.SearchRegion(-1.4, 6.0, 0.1, 8.0))
    wj = sp.region_winding(5.0, "J", sp.SearchRegion(-12.0, 12.0, 0.1, 10.0))
    wj2 = sp.region_winding(5.0, "J", sp.SearchRegion(-12.0, 12.0, -10.0, -0.1))
    return max(abs(wi), abs(wj), abs(wj2)) <= tol, f"windings {wi}, {wj}, {wj2}"


@invariant("conjugate-pairing", 1e-9)
def _pairs(tol):
    """Every resonance at k has an anti-resonance at -conj(k)."""
    feats = _spectrum(REP).features
    res = [f.k_loc for f in feats if f.kind is sp.FeatureKind.RESONANCE]
    anti = [f.k_loc for f in feats if f.kind is sp.FeatureKind.ANTI_RESONANCE]
    if len(res) != len(anti):
        return False, f"{len(res)} resonances vs {len(anti)} anti-resonances"
    worst = max((min(abs(-k.conjugate() - q) for q in anti) for k in res), default=0.0)
    return worst <= tol, f"{len(res)} pairs, max mismatch {worst:.2e}"


@invariant("depth-bound", 0.0)
def _depth(tol):
    """Repulsive singularities off the positive imaginary axis have Im k <= -3/(4a)."""
    feats = [f for f in _spectrum(REP).features if f.kind is not sp.FeatureKind.REDUNDANT_POLE]
    top = max(f.k_loc.imag for f in feats)
    return top <= -0.75 + tol, f"highest Im k = {top:.4f}"


@invariant("residue-agreement", 1e-8)
def _residues(tol):
    """Analytic residues match contour integrals for every simple pole in both preset windows."""
    worst = 0.0
    count = 0
    for pot in (REP, ATT):
        feats = _spectrum(pot).features
        for f in feats:
            if f.residue_k is None:
                continue
            r = sp.default_residue_radius(f, pot, feats)
            worst = max(worst, _rel(sp.numeric_residue(f.k_loc, pot, r), f.residue_k))
            count += 1
    return worst <= tol, f"{count} residues, max rel err {worst:.2e}"


@invariant("redundant-alpha-independence", 0.0)
def _alpha_indep(tol):
    """Redundant-pole positions do not depend on alpha or on the sign."""
    lists = [
        [f.k_loc for f in sp.redundant_poles(sc.PotentialSpec(al, 1.0, s), 6)]
        for al in (1.0, 5.0, 10.0)
        for s in ("repulsive", "attractive")
    ]
    worst = max(abs(a - b) for lst in lists for a, b in zip(lst, lists[0]))
    return worst <= tol, f"max spread {worst:.1e}"


@invariant("feature-consistency", 1e-9)
def _consistency(tol):
    """k = i nu/(2a) and kind/location rules hold for every feature."""
    bad = [f for p in (REP, ATT) for f in _spectrum(p).features if not sp.validate_feature(f, p.a, tol)]
    return not bad, f"{len(bad)} inconsistent features"


@invariant("completeness-closed-form", 1e-12)
def _closed(tol):
    """40-term redundant-pole sums equal their Bessel closed forms."""
    worst = 0.0
    for z in (0.1, 0.5, 1.0, 2.0, 2.5):
        worst = max(worst, abs(cp.alternating_series(z, 40) + math.pi * z * special.j1(2 * z)))
        for pot in (REP, ATT):
            r_sum = 4 * pot.a * math.log(pot.alpha / 2 / z)
            worst = max(worst, abs(cp.redundant_pole_sum(cp.CompletenessQuery(r_sum, 40), pot) - cp.closed_form(z, pot)))
    return worst <= tol, f"max abs err {worst:.2e}"


@invariant("completeness-term-ratio", 1e-12)
def _term_ratio(tol):
    """Consecutive repulsive redundant-pole terms have ratio -z^2/(n(n+1))."""
    r_sum = 3.0
    z = cp.z_of(r_sum, REP)
    terms = [sp.redundant_residue_2pii(n, REP) * math.exp(-n * r_sum / 2) for n in range(1, 22)]
    worst = max(
        abs(terms[n] / terms[n - 1] + z * z / (n * (n + 1))) / (z * z / (n * (n + 1))) for n in range(1, 21)
    )
    return worst <= tol, f"max rel err {worst:.2e}"


@invariant("redundant-residue-signs", 0.0)
def _signs(tol):
    """Repulsive redundant residues alternate in sign; attractive ones are all negative."""
    rep = [sp.redundant_residue_2pii(n, REP) for n in range(1, 12)]
    att = [sp.redundant_residue_2pii(n, ATT) for n in range(1, 12)]
    ok = all(a * b < 0 for a, b in zip(rep, rep[1:])) and all(v < 0 for v in att)
    return ok, f"rep {rep[0]:+.4f}, {rep[1]:+.4f}, ...; att {att[0]:+.4f}, ..."


@invariant("bound-state-positive", 1e-8)
def _bound(tol):
    """2 pi i Res S at every bound state is real and positive."""
    vals = cp.heisenberg_bound_state_terms(ATT, _spectrum(ATT).features, tol=tol)
    none = cp.heisenberg_bound_state_terms(REP, _spectrum(REP).features, tol=tol)
    return len(vals) == 1 and not none, f"bound-state terms {vals}"


@invariant("render-determinism", 0.0)
def _render(tol):
    """Two renders of the same spec are byte-identical."""
    spec = rd.ImageSpec(64, 80, -4, 4, -5, 5)
    a = rd.ppm_bytes(rd.domain_color(REP, spec))
    b = rd.ppm_bytes(rd.domain_color(REP, spec))
    return a == b, f"{len(a)} bytes"


@invariant("magnitude-mirror", 1e-9)
def _mirror(tol):
    """log10|S| is even under Re k -> -Re k on a symmetric window."""
    g = rd.magnitude_grid(REP, rd.ImageSpec(64, 80, -4, 4, -5, 5))
    worst = float(np.max(np.abs(g - g[:, ::-1])))
    return worst <= tol, f"max pair difference {worst:.2e}"


@invariant("phase-winding-probe", 1e-2)
def _probe(tol):
    """arg S winds by -2 pi around each pole and +2 pi around each zero."""
    spec = rd.PRESETS["fig1"][1]
    res = sp.search_window(REP, spec.window(), include_zeros=True)
    ks = [f.k_loc for f in res.features]
    worst = 0.0
    for f in res.features:
        expect = (2 if f.kind is sp.FeatureKind.SMATRIX_ZERO else -2) * math.pi * f.multiplicity
        w = rd.phase_winding(REP, f.k_loc, rd.probe_radius(spec, f.k_loc, ks))
        worst = max(worst, abs(w - expect))
    return worst <= tol, f"{len(res.features)} features, max dev {worst:.2e} rad"


def names():
    return [inv.name for inv in _REGISTRY]


def run(tol_override=None, only=None):
    """Run the suite; yields ``(name, passed, detail)``."""
    for inv in _REGISTRY:
        if only and inv.name not in only:
            continue
        tol = inv.tol if tol_override is None else tol_override
        try:
            ok, detail = inv.check(tol)
        except Exception as exc:  # noqa: BLE001 - a crash is a failure, not an abort
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield inv.name, bool(ok), detail
