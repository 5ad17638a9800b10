"""Poles and zeros of S(k): where they lie and what they are.

Every zero of the Jost function F+(k) is a zero of B_nu(alpha) at the order
nu = -i rho = -2iak, and B_nu(alpha) is entire in nu.  Roots are therefore
searched in the nu-plane by the argument principle and then mapped to
k = i nu / (2a).  The redundant poles k = in/(2a) come from Gamma(1 + i rho)
in F-(k) and are added analytically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from jostlab import special_fn as sf
from jostlab.errors import (
    BoundaryRootCollision,
    ContourTooClose,
    MultipleRoot,
    NotIsolated,
    UnclassifiableRoot,
    WindingMismatch,
)
from jostlab.scattering import BesselKind, PotentialSpec, bessel_dnu, bessel_fn, family, smatrix_values

# A boundary segment shorter than this (relative to the region scale) that
# still carries a large phase jump means a root sits on the boundary.
_MIN_SEGMENT = 1e-13
_MAX_DARG = math.pi / 4
# Largest boundary spacing before any adaptive refinement.
_BASE_SPACING = 0.05
# Cells below this size that still wind more than once hold a multiple root.
MIN_CELL = 1e-6
# Off-centre split fractions keep split lines off Im nu = 0 for symmetric regions.
_SPLIT_RE = 0.5137
_SPLIT_IM = 0.4871
_NUDGE_ATTEMPTS = 5


class FeatureKind(str, enum.Enum):
    REDUNDANT_POLE = "redundant_pole"
    BOUND_STATE = "bound_state"
    VIRTUAL_STATE = "virtual_state"
    RESONANCE = "resonance"
    ANTI_RESONANCE = "anti_resonance"
    SMATRIX_ZERO = "smatrix_zero"


@dataclass(frozen=True)
class SearchRegion:
    """Closed rectangle in the nu-plane, traversed counterclockwise."""

    nu_re_min: float
    nu_re_max: float
    nu_im_min: float
    nu_im_max: float
    boundary_samples: int = 256

    def __post_init__(self):
        vals = (self.nu_re_min, self.nu_re_max, self.nu_im_min, self.nu_im_max)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("region bounds must be finite")
        if not (self.nu_re_max > self.nu_re_min and self.nu_im_max > self.nu_im_min):
            raise ValueError("region must be a nonempty rectangle")
        if self.boundary_samples < 64:
            raise ValueError("boundary_samples must be >= 64")

    @property
    def width(self):
        return self.nu_re_max - self.nu_re_min

    @property
    def height(self):
        return self.nu_im_max - self.nu_im_min

    @property
    def size(self):
        return max(self.width, self.height)

    @property
    def center(self):
        return complex(0.5 * (self.nu_re_min + self.nu_re_max), 0.5 * (self.nu_im_min + self.nu_im_max))

    def corners(self):
        return (
            complex(self.nu_re_min, self.nu_im_min),
            complex(self.nu_re_max, self.nu_im_min),
            complex(self.nu_re_max, self.nu_im_max),
            complex(self.nu_re_min, self.nu_im_max),
        )

    def contains(self, nu, pad=0.0):
        return (
            self.nu_re_min - pad <= nu.real <= self.nu_re_max + pad
            and self.nu_im_min - pad <= nu.imag <= self.nu_im_max + pad
        )

    def expanded(self, delta):
        return SearchRegion(
            self.nu_re_min - delta,
            self.nu_re_max + delta,
            self.nu_im_min - delta,
            self.nu_im_max + delta,
            self.boundary_samples,
        )

    def as_dict(self):
        return {
            "nu_re": [self.nu_re_min, self.nu_re_max],
            "nu_im": [self.nu_im_min, self.nu_im_max],
            "boundary_samples": self.boundary_samples,
        }


@dataclass(frozen=True)
class KWindow:
    """Rectangle in the complex k-plane (bounds inclusive)."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        vals = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("window bounds must be finite")
        if self.re_max < self.re_min or self.im_max < self.im_min:
            raise ValueError("window bounds are reversed")

    @property
    def empty(self):
        return self.re_max == self.re_min or self.im_max == self.im_min

    def contains(self, k, tol=1e-12):
        return (
            self.re_min - tol <= k.real <= self.re_max + tol and self.im_min - tol <= k.imag <= self.im_max + tol
        )

    def to_region(self, a, boundary_samples=256):
        # k = i nu/(2a): Re nu = 2a Im k, Im nu = -2a Re k
        return SearchRegion(
            2 * a * self.im_min, 2 * a * self.im_max, -2 * a * self.re_max, -2 * a * self.re_min, boundary_samples
        )

    def mirrored(self):
        """The window reflected through the real axis."""
        return KWindow(self.re_min, self.re_max, -self.im_max, -self.im_min)


@dataclass(frozen=True)
class SpectralFeature:
    kind: FeatureKind
    k_loc: complex
    nu_loc: complex
    residue_k: complex | None = None
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", FeatureKind(self.kind))
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")


@dataclass
class SpectrumResult:
    features: list
    region: SearchRegion | None
    winding_total: int
    nudges: int = 0
    extra: dict = field(default_factory=dict)


def k_of_nu(nu, a):
    return 1j * complex(nu) / (2.0 * a)


def nu_of_k(k, a):
    return -2j * a * complex(k)


def _target(x, kind, ctl):
    B = bessel_fn(kind)
    return lambda nu: np.asarray(B(np.asarray(nu, dtype=complex), x, ctl), dtype=complex)


# --------------------------------------------------------------------------
# argument principle
# --------------------------------------------------------------------------


class _OnContour(Exception):
    pass


def _edge_points(p0, p1, n):
    t = np.linspace(0.0, 1.0, n, endpoint=False)
    return p0 + (p1 - p0) * t


def _closed_path_winding(fun, pts, scale):
    """Winding number of ``fun`` along the closed polyline ``pts`` with adaptive refinement.

    Segments whose phase change exceeds pi/4 are bisected.  Raises
    ``_OnContour`` when refinement bottoms out, i.e. a zero sits on the path.
    """
    pts = np.append(pts, pts[0])
    vals = fun(pts)
    for _ in range(80):
        if not np.all(np.isfinite(vals)) or np.any(vals == 0):
            raise _OnContour
        darg = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(darg) > _MAX_DARG
        if not bad.any():
            total = darg.sum() / (2 * math.pi)
            w = int(round(total))
            if abs(total - w) > 1e-6:
                raise _OnContour
            return w
        idx = np.nonzero(bad)[0]
        seg = np.abs(pts[idx + 1] - pts[idx])
        if np.any(seg < _MIN_SEGMENT * max(scale, 1.0)):
            raise _OnContour
        mids = 0.5 * (pts[idx] + pts[idx + 1])
        mid_vals = fun(mids)
        pts = np.insert(pts, idx + 1, mids)
        vals = np.insert(vals, idx + 1, mid_vals)
    raise _OnContour


def _rect_points(region):
    c = region.corners()
    per = 2 * (region.width + region.height)
    n_total = max(region.boundary_samples, int(math.ceil(per / _BASE_SPACING)))
    pieces = []
    for p0, p1 in zip(c, c[1:] + c[:1]):
        n = max(16, int(math.ceil(n_total * abs(p1 - p0) / per)))
        pieces.append(_edge_points(p0, p1, n))
    return np.concatenate(pieces)


def region_winding(x, kind, region, ctl=None):
    """Winding number of B_nu(x) around ``region``; raises BoundaryRootCollision if a root is on it."""
    try:
        return _closed_path_winding(_target(x, kind, ctl), _rect_points(region), region.size)
    except _OnContour:
        raise BoundaryRootCollision(f"root of {BesselKind(kind).value}_nu({x}) on region boundary") from None


def circle_winding(fun, center, radius, n=256):
    """Winding number of ``fun`` around a circle; raises ContourTooClose if a zero is on it."""
    th = 2 * math.pi * np.arange(n) / n
    try:
        return _closed_path_winding(fun, center + radius * np.exp(1j * th), radius)
    except _OnContour:
        raise ContourTooClose("a zero lies on the contour") from None


# --------------------------------------------------------------------------
# root finding
# --------------------------------------------------------------------------


def small_x_root_estimate(n, x, kind):
    """Small-argument estimate of the root of B_nu(x) next to nu = -n (n >= 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lq = 2 * n * math.log(x / 2) - math.lgamma(n + 1) - math.lgamma(n)
    q = math.exp(lq)
    r = 0.0
    if n >= 2:
        r = math.exp(lq + 2 * math.log(x / 2) - math.log(n + 1) - math.log(n - 1))
    if BesselKind(kind) is BesselKind.I:
        return -n + (-1) ** n * (q + r)
    return -n + q - r


def _newton(nu, x, kind, ctl, max_iter=60):
    B, dB = bessel_fn(kind), bessel_dnu(kind)
    nu = complex(nu)
    for _ in range(max_iter):
        try:
            d = complex(dB(nu, x, ctl))
            f = complex(B(nu, x, ctl))
        except (ArithmeticError, ValueError):
            return None
        if d == 0:
            return None
        step = f / d
        nu -= step
        if not (math.isfinite(nu.real) and math.isfinite(nu.imag)):
            return None
        if abs(step) <= 4e-16 * max(1.0, abs(nu)):
            return nu
    return nu if abs(step) <= 1e-12 * max(1.0, abs(nu)) else None


def _snap_real(nu, x, kind, ctl):
    """Move a numerically real root onto the real axis and re-polish there."""
    if nu.imag != 0 and abs(nu.imag) <= 1e-9 * max(1.0, abs(nu)):
        again = _newton(complex(nu.real, 0.0), x, kind, ctl)
        if again is not None and abs(again - nu) < 1e-8 * max(1.0, abs(nu)):
            return complex(again.real, 0.0)
    return nu


def _seeds_for(cell, x, kind):
    seeds = []
    if cell.nu_im_min <= 0 <= cell.nu_im_max:
        lo = max(1, int(math.floor(-cell.nu_re_max)))
        hi = int(math.ceil(-cell.nu_re_min))
        for n in range(lo, hi + 1):
            if n > x + 1:
                s = complex(small_x_root_estimate(n, x, kind))
                if cell.contains(s):
                    seeds.append(s)
    return seeds


def find_order_roots(x, kind, region, ctl=None):
    """All roots of B_nu(x) (B = I or J) inside ``region`` with multiplicities.

    Returns ``(roots, winding, region)``; ``region`` is the possibly nudged
    rectangle actually searched.  Use :func:`order_roots` for the plain list.
    """
    kind = BesselKind(kind)
    if not x > 0:
        raise ValueError("x must be > 0")
    reg = region
    nudge = 1e-7 * max(1.0, region.size)
    for attempt in range(_NUDGE_ATTEMPTS + 1):
        try:
            total = region_winding(x, kind, reg, ctl)
            break
        except BoundaryRootCollision:
            if attempt == _NUDGE_ATTEMPTS:
                raise
            reg = region.expanded(nudge * (attempt + 1) * 1.618)
    roots = []
    _search_cell(x, kind, reg, total, ctl, roots)
    found = sum(m for _, m in roots)
    if found != total:
        raise WindingMismatch(f"boundary winding {total} but {found} roots found")
    roots.sort(key=lambda t: (t[0].real, t[0].imag))
    return roots, total, reg


def order_roots(x, kind, region, ctl=None):
    """List of ``(nu_root, multiplicity)`` pairs; see :func:`find_order_roots`."""
    return find_order_roots(x, kind, region, ctl)[0]


def _cell_winding(x, kind, cell, ctl):
    try:
        return region_winding(x, kind, cell, ctl)
    except BoundaryRootCollision:
        return None


def _search_cell(x, kind, cell, w, ctl, out):
    if w == 0:
        return
    if w == 1:
        for start in _seeds_for(cell, x, kind) + [cell.center]:
            nu = _newton(start, x, kind, ctl)
            if nu is not None and cell.contains(nu, pad=1e-12 * max(1.0, abs(nu))):
                out.append((_snap_real(nu, x, kind, ctl), 1))
                return
    if cell.size < MIN_CELL:
        nu = _newton(cell.center, x, kind, ctl)
        if nu is None or not cell.contains(nu, pad=cell.size):
            nu = cell.center
        out.append((nu, w))
        return
    subs = _split(x, kind, cell, ctl)
    for sub, sw in subs:
        _search_cell(x, kind, sub, sw, ctl, out)


def _split(x, kind, cell, ctl):
    """Quarter ``cell``; retries with shifted split lines if one passes through a root."""
    for shift in (0.0, 0.0311, -0.0437, 0.0597, -0.0713):
        xs = cell.nu_re_min + (_SPLIT_RE + shift) * cell.width
        ys = cell.nu_im_min + (_SPLIT_IM - shift) * cell.height
        s = max(64, cell.boundary_samples // 2)
        subs = [
            SearchRegion(cell.nu_re_min, xs, cell.nu_im_min, ys, s),
            SearchRegion(xs, cell.nu_re_max, cell.nu_im_min, ys, s),
            SearchRegion(cell.nu_re_min, xs, ys, cell.nu_im_max, s),
            SearchRegion(xs, cell.nu_re_max, ys, cell.nu_im_max, s),
        ]
        ws = [_cell_winding(x, kind, c, ctl) for c in subs]
        if all(w is not None for w in ws):
            return list(zip(subs, ws))
    raise BoundaryRootCollision("could not split a search cell away from its roots")


# --------------------------------------------------------------------------
# residues and classification
# --------------------------------------------------------------------------


def redundant_poles(pot, n_max):
    """Features for the redundant poles k = in/(2a), n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return [
        SpectralFeature(FeatureKind.REDUNDANT_POLE, 1j * n / (2 * pot.a), complex(n), redundant_residue(n, pot), 1)
        for n in range(1, n_max + 1)
    ]


def redundant_residue_2pii(n, pot):
    """2 pi i Res_k S at k = in/(2a): (pi/a)(-1)^{n-1} z^n / (n!(n-1)!), z = +-alpha^2/4."""
    if n < 1:
        raise ValueError("n must be >= 1")
    log_mag = 2 * n * math.log(pot.alpha / 2) - math.lgamma(n + 1) - math.lgamma(n) + math.log(math.pi / pot.a)
    if family(pot) is BesselKind.I:
        sign = 1.0 if n % 2 == 1 else -1.0
    else:
        sign = -1.0
    return sign * math.exp(log_mag)


def redundant_residue(n, pot):
    """Res_k S(k) at the redundant pole k = in/(2a)."""
    return complex(redundant_residue_2pii(n, pot)) / (2j * math.pi)


def virtual_residue(nu_root, pot, multiplicity=1, ctl=None):
    """Residue of S(k) at k = i nu0/(2a) for a simple root nu0 of B_nu(alpha).

    Res = B_{-nu0}(alpha) Gamma(1 - nu0)/Gamma(1 + nu0) (alpha/2)^{2 nu0} (i/2a) / dB/dnu(nu0).
    Valid for every simple root, not only virtual states.
    """
    if multiplicity != 1:
        raise MultipleRoot(f"root of multiplicity {multiplicity} has no simple residue")
    nu0 = complex(nu_root)
    kind = family(pot)
    B, dB = bessel_fn(kind), bessel_dnu(kind)
    num = complex(B(-nu0, pot.alpha, ctl))
    gam = complex(np.exp(sf.log_gamma(1 - nu0))) * complex(sf.recip_gamma(1 + nu0))
    pw = complex(np.exp(2 * nu0 * math.log(pot.alpha / 2)))
    return num * gam * pw * (1j / (2 * pot.a)) / complex(dB(nu0, pot.alpha, ctl))


def classify(nu_root, multiplicity, pot, ctl=None):
    """Turn a root of B_nu(alpha) into a SpectralFeature of S(k)."""
    nu = complex(nu_root)
    kind = family(pot)
    k = k_of_nu(nu, pot.a)
    if nu.imag == 0:
        if kind is BesselKind.I:
            if nu.real < -1:
                fk = FeatureKind.VIRTUAL_STATE
            else:
                raise UnclassifiableRoot(f"real root nu = {nu.real} is excluded for the repulsive family")
        elif nu.real < 0:
            fk = FeatureKind.VIRTUAL_STATE
        elif nu.real > 0:
            fk = FeatureKind.BOUND_STATE
        else:
            raise UnclassifiableRoot("root at nu = 0")
    elif nu.real >= 0:
        raise UnclassifiableRoot(f"complex root nu = {nu} lies outside the lower half k-plane")
    elif nu.imag < 0:
        fk = FeatureKind.RESONANCE
    else:
        fk = FeatureKind.ANTI_RESONANCE
    res = virtual_residue(nu, pot, ctl=ctl) if multiplicity == 1 else None
    return SpectralFeature(fk, k, nu, res, multiplicity)


def numeric_residue(k0, pot, radius, ctl=None, nodes=512, tol=1e-10, max_nodes=1 << 17):
    """(1/2 pi i) times the contour integral of S(k) around |k - k0| = radius.

    The circle must enclose at most one singularity: the Gamma poles
    k = in/(2a) are counted directly, Jost zeros by the winding of
    B_nu(alpha) over the image circle in the nu-plane.
    """
    k0 = complex(k0)
    if not radius > 0:
        raise ValueError("radius must be > 0")
    a = pot.a
    n_lo = max(1, int(math.floor(2 * a * (k0.imag - radius))))
    n_hi = int(math.ceil(2 * a * (k0.imag + radius)))
    gamma_inside = 0
    for n in range(n_lo, n_hi + 1):
        d = abs(1j * n / (2 * a) - k0)
        if abs(d - radius) < 1e-6 * radius:
            raise ContourTooClose(f"redundant pole k = {n}i/(2a) is on the contour")
        gamma_inside += d < radius
    target = _target(pot.alpha, family(pot), ctl)
    zeros_inside = circle_winding(target, nu_of_k(k0, a), 2 * a * radius)
    if gamma_inside + zeros_inside > 1:
        raise NotIsolated(f"contour encloses {gamma_inside + zeros_inside} singularities")

    def trap(n):
        th = 2 * math.pi * np.arange(n) / n
        e = radius * np.exp(1j * th)
        s = smatrix_values(k0 + e, pot, ctl)
        if not np.all(np.isfinite(s)):
            raise ContourTooClose("S is singular on the contour")
        return complex(np.mean(s * e))

    prev = trap(nodes)
    n = nodes
    while n < max_nodes:
        n *= 2
        cur = trap(n)
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise ContourTooClose("trapezoid rule did not settle; a singularity is too near the contour")


def smatrix_zeros(pot, window, ctl=None):
    """Zeros of S(k) in ``window``: conjugates of the poles found in the mirrored window."""
    res = search_window(pot, window.mirrored(), ctl=ctl)
    out = []
    for f in res.features:
        kz = f.k_loc.conjugate()
        out.append(SpectralFeature(FeatureKind.SMATRIX_ZERO, kz, nu_of_k(kz, pot.a), None, f.multiplicity))
    return sorted(out, key=feature_sort_key)


def feature_sort_key(f):
    return (-f.k_loc.imag, f.k_loc.real)


def search_window(pot, window, *, include_zeros=False, ctl=None, boundary_samples=256):
    """All poles of S(k) (and optionally zeros) inside a k-window.

    ``winding_total`` is the winding number of B_nu(alpha) over the nu-image
    of the window, i.e. the number of Jost zeros; redundant poles are added
    on top of it.
    """
    if window.empty:
        return SpectrumResult([], None, 0)
    region = window.to_region(pot.a, boundary_samples)
    roots, total, region = find_order_roots(pot.alpha, family(pot), region, ctl)
    feats = [classify(nu, m, pot, ctl) for nu, m in roots]
    if window.re_min <= 0 <= window.re_max:
        n_lo = max(1, int(math.ceil(2 * pot.a * window.im_min - 1e-9)))
        n_hi = int(math.floor(2 * pot.a * window.im_max + 1e-9))
        if n_hi >= n_lo:
            feats += [f for f in redundant_poles(pot, n_hi) if f.nu_loc.real >= n_lo]
    if include_zeros:
        feats += smatrix_zeros(pot, window, ctl)
    feats.sort(key=feature_sort_key)
    nudges = 0 if region == window.to_region(pot.a, boundary_samples) else 1
    return SpectrumResult(feats, region, total, nudges)


def default_residue_radius(feature, pot, others=()):
    """A contour radius that isolates ``feature`` from the other features and Gamma poles."""
    k = feature.k_loc
    d = 0.5 / pot.a
    for o in others:
        if o is not feature and o.kind is not FeatureKind.SMATRIX_ZERO:
            dist = abs(o.k_loc - k)
            if dist > 0:
                d = min(d, dist)
    for n in range(max(1, int(2 * pot.a * (k.imag - 1))), int(2 * pot.a * (k.imag + 1)) + 2):
        dist = abs(1j * n / (2 * pot.a) - k)
        if dist > 1e-9:
            d = min(d, dist)
    return 0.4 * d


def validate_feature(f, a, tol=1e-9):
    """True when ``f`` satisfies its kind/location invariants."""
    k = f.k_loc
    if abs(k - k_of_nu(f.nu_loc, a)) > tol * max(1.0, abs(k)):
        return False
    kind = f.kind
    if kind is FeatureKind.BOUND_STATE:
        return k.real == 0 and k.imag > 0
    if kind is FeatureKind.VIRTUAL_STATE:
        return k.real == 0 and k.imag < 0
    if kind is FeatureKind.RESONANCE:
        return k.real > 0 and k.imag < 0
    if kind is FeatureKind.ANTI_RESONANCE:
        return k.real < 0 and k.imag < 0
    if kind is FeatureKind.REDUNDANT_POLE:
        n = 2 * a * k.imag
        return k.real == 0 and n >= 1 - tol and abs(n - round(n)) < tol
    return True
