"""Domain-coloring rasters and magnitude grids of S(k), plus PPM/PNG/CSV writers.

Pixel (row r, column c) samples k = (re_min + c dx) + i (im_max - r dy) with
inclusive window edges, so the top-left pixel sits at (re_min, im_max).
"""

from __future__ import annotations

import io
import math
import struct
import zlib
from dataclasses import dataclass

import numpy as np
from matplotlib.colors import hsv_to_rgb

from jostlab.errors import ContourTooClose, SinkWriteError
from jostlab.scattering import PotentialSpec, smatrix_values
from jostlab.spectrum import KWindow

MAGENTA = np.array([255, 0, 255], dtype=np.uint8)
LOG_CLAMP = 12.0
_ROW_CHUNK = 32


@dataclass(frozen=True)
class ImageSpec:
    width: int
    height: int
    k_re_min: float
    k_re_max: float
    k_im_min: float
    k_im_max: float
    white_clip: float = 1e3
    black_clip: float = 1e-3

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise ValueError("width and height must be >= 16 pixels")
        if self.width * self.height > 10**8:
            raise ValueError("image larger than 1e8 pixels")
        bounds = (self.k_re_min, self.k_re_max, self.k_im_min, self.k_im_max)
        if not all(math.isfinite(v) for v in bounds):
            raise ValueError("window bounds must be finite")
        if not (self.k_re_max > self.k_re_min and self.k_im_max > self.k_im_min):
            raise ValueError("window must be nonempty")
        if not self.white_clip > 1:
            raise ValueError("white_clip must be > 1")
        if not 0 < self.black_clip < 1:
            raise ValueError("black_clip must lie in (0, 1)")

    @property
    def dx(self):
        return (self.k_re_max - self.k_re_min) / (self.width - 1)

    @property
    def dy(self):
        return (self.k_im_max - self.k_im_min) / (self.height - 1)

    def columns(self):
        return self.k_re_min + self.dx * np.arange(self.width)

    def rows(self):
        return self.k_im_max - self.dy * np.arange(self.height)

    def k_at(self, row, col):
        return complex(self.k_re_min + self.dx * col, self.k_im_max - self.dy * row)

    def pixel_of(self, k):
        """Fractional (row, col) of a momentum."""
        return (self.k_im_max - k.imag) / self.dy, (k.real - self.k_re_min) / self.dx

    def window(self):
        return KWindow(self.k_re_min, self.k_re_max, self.k_im_min, self.k_im_max)


@dataclass
class ImageBuffer:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, row-major from the top-left
    failures: int = 0

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width, 3) or self.pixels.dtype != np.uint8:
            raise ValueError("pixels must be a (height, width, 3) uint8 array")

    def to_bytes(self):
        return self.pixels.tobytes()


PRESETS = {
    "fig1": (PotentialSpec(5.0, 1.0, "repulsive"), ImageSpec(800, 1000, -4.0, 4.0, -5.0, 5.0)),
    "fig2": (PotentialSpec(5.0, 1.0, "attractive"), ImageSpec(800, 1000, -4.0, 4.0, -5.0, 5.0)),
}


def _eval_rows(pot, spec, r0, r1, ctl):
    """S on rows [r0, r1); returns (values, failed-mask) without raising."""
    k = spec.columns()[None, :] + 1j * spec.rows()[r0:r1, None]
    try:
        return smatrix_values(k, pot, ctl), np.zeros(k.shape, dtype=bool)
    except Exception:  # noqa: BLE001 - fall back to per-pixel isolation
        pass
    vals = np.empty(k.shape, dtype=complex)
    failed = np.zeros(k.shape, dtype=bool)
    for idx in np.ndindex(k.shape):
        try:
            vals[idx] = smatrix_values(k[idx], pot, ctl)
        except Exception:  # noqa: BLE001
            vals[idx] = np.nan
            failed[idx] = True
    return vals, failed


def _ramp(spec, mag):
    t = mag**2 / (1.0 + mag**2)
    tb = spec.black_clip**2 / (1.0 + spec.black_clip**2)
    tw = spec.white_clip**2 / (1.0 + spec.white_clip**2)
    return np.clip((t - tb) / (tw - tb), 0.0, 1.0)


def colorize(values, spec):
    """RGB (float, 0..1) for an array of S values; non-finite entries become white."""
    finite = np.isfinite(values)
    safe = np.where(finite, values, 1.0)
    hue = np.mod(np.angle(safe) / (2 * math.pi), 1.0)
    base = hsv_to_rgb(np.stack([hue, np.ones_like(hue), np.ones_like(hue)], axis=-1))
    v = _ramp(spec, np.abs(safe))[..., None]
    up = base + (1.0 - base) * (2.0 * v - 1.0)
    down = base * (2.0 * v)
    rgb = np.where(v >= 0.5, up, down)
    rgb[~finite] = 1.0
    return rgb


def domain_color(pot, spec, ctl=None):
    """Domain-coloring raster of S(k): hue is arg S, brightness follows |S|."""
    out = np.empty((spec.height, spec.width, 3), dtype=np.uint8)
    failures = 0
    for r0 in range(0, spec.height, _ROW_CHUNK):
        r1 = min(spec.height, r0 + _ROW_CHUNK)
        vals, failed = _eval_rows(pot, spec, r0, r1, ctl)
        rgb = np.rint(255.0 * colorize(vals, spec)).astype(np.uint8)
        rgb[failed] = MAGENTA
        failures += int(failed.sum())
        out[r0:r1] = rgb
    return ImageBuffer(spec.width, spec.height, out, failures)


def magnitude_grid(pot, spec, ctl=None):
    """log10 |S| on the raster lattice, clamped to +-12; failed pixels are NaN."""
    grid = np.empty((spec.height, spec.width))
    for r0 in range(0, spec.height, _ROW_CHUNK):
        r1 = min(spec.height, r0 + _ROW_CHUNK)
        vals, failed = _eval_rows(pot, spec, r0, r1, ctl)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.log10(np.abs(vals))
        g = np.where(np.isinf(vals.real) | np.isinf(vals.imag), LOG_CLAMP, g)
        g = np.clip(g, -LOG_CLAMP, LOG_CLAMP)
        g[failed] = np.nan
        grid[r0:r1] = g
    return grid


def phase_winding(pot, k0, radius, samples=256, ctl=None):
    """Total change of arg S(k) once around |k - k0| = radius, counterclockwise (radians).

    A simple pole gives -2 pi and a simple zero +2 pi.  Arcs whose phase
    step exceeds pi/8 are bisected so the result is an exact multiple of 2 pi
    up to rounding.
    """
    th = 2 * math.pi * np.arange(samples + 1) / samples
    vals = smatrix_values(k0 + radius * np.exp(1j * th), pot, ctl)
    for _ in range(40):
        if not np.all(np.isfinite(vals)) or np.any(vals == 0):
            raise ContourTooClose("S is singular on the probe circle")
        d = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(d) > math.pi / 8)[0]
        if bad.size == 0:
            return float(d.sum())
        mid = 0.5 * (th[bad] + th[bad + 1])
        th = np.insert(th, bad + 1, mid)
        vals = np.insert(vals, bad + 1, smatrix_values(k0 + radius * np.exp(1j * mid), pot, ctl))
    raise ContourTooClose("phase along the probe circle could not be resolved")


def probe_radius(spec, k0, others, pixels=4.0):
    """A few pixels, shrunk below the distance to the nearest other feature."""
    r = pixels * min(spec.dx, spec.dy)
    for k in others:
        d = abs(complex(k) - k0)
        if d > 0:
            r = min(r, 0.4 * d)
    return r


def _open_sink(sink):
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        return open(sink, "wb"), True
    return sink, False


def write_bytes(sink, data):
    """Write ``data`` to a path or binary stream, raising SinkWriteError on failure."""
    try:
        fh, owned = _open_sink(sink)
        try:
            fh.write(data)
        finally:
            if owned:
                fh.close()
    except OSError as exc:
        raise SinkWriteError(str(exc)) from exc


def ppm_bytes(buf):
    return f"P6\n{buf.width} {buf.height}\n255\n".encode("ascii") + buf.to_bytes()


def write_ppm(buf, sink):
    """Binary PPM (P6) to a path or writable binary stream."""
    write_bytes(sink, ppm_bytes(buf))


def _chunk(tag, data):
    body = tag + data
    return struct.pack(">I", len(data)) + body + struct.pack(">I", zlib.crc32(body) & 0xFFFFFFFF)


def png_bytes(buf):
    raw = np.zeros((buf.height, 1 + 3 * buf.width), dtype=np.uint8)  # filter byte 0 per row
    raw[:, 1:] = buf.pixels.reshape(buf.height, -1)
    ihdr = struct.pack(">IIBBBBB", buf.width, buf.height, 8, 2, 0, 0, 0)
    return (
        b"\x89PNG\r\n\x1a\n"
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", zlib.compress(raw.tobytes(), 9))
        + _chunk(b"IEND", b"")
    )


def write_png(buf, sink):
    """8-bit RGB PNG without alpha, pixel-identical to the PPM output."""
    write_bytes(sink, png_bytes(buf))


def read_ppm(data):
    """Parse a P6 byte string back into an :class:`ImageBuffer`."""
    head = io.BytesIO(data)
    fields = []
    while len(fields) < 4:
        tok = b""
        ch = head.read(1)
        while ch.isspace():
            ch = head.read(1)
        while ch and not ch.isspace():
            tok += ch
            ch = head.read(1)
        fields.append(tok)
    if fields[0] != b"P6" or fields[3] != b"255":
        raise ValueError("not an 8-bit binary PPM")
    w, h = int(fields[1]), int(fields[2])
    px = np.frombuffer(head.read(3 * w * h), dtype=np.uint8)
    return ImageBuffer(w, h, px.reshape(h, w, 3).copy())


def magnitude_csv(grid):
    """One line per raster row, 9 significant digits."""
    lines = (",".join(f"{v:.9g}" for v in row) for row in grid)
    return "\n".join(lines) + "\n"


def write_magnitude_csv(grid, sink):
    write_bytes(sink, magnitude_csv(grid).encode("ascii"))
