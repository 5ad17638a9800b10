"""Exact s-wave S-matrix of exponentially decaying potentials.

``special_fn`` holds complex-order Bessel functions and ``scattering`` builds
S from the Jost functions. ``spectrum`` locates poles and zeros of S.
``completeness`` sums the redundant poles, ``render`` draws domain-colored
images and ``cli`` wraps it all.
"""

from jostlab.scattering import PotentialSpec, s_matrix
from jostlab.spectrum import KWindow, search_window

__all__ = ["KWindow", "PotentialSpec", "s_matrix", "search_window"]
__version__ = "0.1.0"
