"""Annotated matplotlib figures written next to the machine-readable CLI output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from jostlab.spectrum import FeatureKind  # noqa: E402

_MARKERS = {
    FeatureKind.REDUNDANT_POLE: ("o", "black", "redundant pole"),
    FeatureKind.BOUND_STATE: ("*", "gold", "bound state"),
    FeatureKind.VIRTUAL_STATE: ("s", "cyan", "virtual state"),
    FeatureKind.RESONANCE: ("^", "lime", "resonance"),
    FeatureKind.ANTI_RESONANCE: ("v", "lime", "anti-resonance"),
    FeatureKind.SMATRIX_ZERO: ("x", "grey", "S zero"),
}


def domain_figure(buf, spec, features, path, title=""):
    """Domain-coloring raster with feature markers, saved to ``path``."""
    aspect = spec.height / spec.width
    fig, ax = plt.subplots(figsize=(6, 6 * aspect))
    ax.imshow(
        buf.pixels,
        extent=(spec.k_re_min, spec.k_re_max, spec.k_im_min, spec.k_im_max),
        origin="upper",
        interpolation="nearest",
    )
    for kind, (marker, color, label) in _MARKERS.items():
        pts = [f.k_loc for f in features if f.kind is kind]
        if pts:
            style = {"facecolors": "none", "edgecolors": color} if marker in "os" else {"c": color}
            ax.scatter(
                [p.real for p in pts], [p.imag for p in pts], marker=marker, s=40, label=label, linewidths=1.2, **style
            )
    ax.set_xlim(spec.k_re_min, spec.k_re_max)
    ax.set_ylim(spec.k_im_min, spec.k_im_max)
    ax.set_xlabel("Re k")
    ax.set_ylabel("Im k")
    if title:
        ax.set_title(title)
    if features:
        ax.legend(loc="lower left", fontsize=7, framealpha=0.6)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def completeness_figure(rows, ratio_rows, path):
    """Partial sums against the closed form, and the half-integer ratio trend."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    r = [row["r_sum"] for row in rows]
    ax1.plot(r, [row["partial_sum"] for row in rows], "o", label="partial sum")
    ax1.plot(r, [row["closed_form"] for row in rows], "-", label="closed form")
    ax1.set_xlabel("r + r'")
    ax1.set_ylabel("redundant-pole sum")
    ax1.legend()
    n = [row["n"] for row in ratio_rows]
    ax2.plot(n, [row["ratio"] for row in ratio_rows], "o-")
    ax2.axhline(1.0, color="grey", lw=0.8)
    ax2.set_xlabel("n")
    ax2.set_ylabel("|S(i(n+1/2)/2a)| / asymptote")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
