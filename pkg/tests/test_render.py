import hashlib
import io
import math

import numpy as np
import pytest
from PIL import Image

from conftest import ATT, REP
from jostlab import render
from jostlab.errors import ContourTooClose, SinkWriteError
from jostlab.render import (
    PRESETS,
    ImageBuffer,
    ImageSpec,
    colorize,
    domain_color,
    magnitude_csv,
    magnitude_grid,
    phase_winding,
    png_bytes,
    ppm_bytes,
    probe_radius,
    read_ppm,
    write_magnitude_csv,
    write_png,
    write_ppm,
)
from jostlab.scattering import s_matrix

FIG1_SHA256 = "d9279971ea0f20b43d8b372d87ee931a7bd48385ba0e02c6fd155beb136a30e6"

# small symmetric lattice: column 8 of 17 sits on Re k = 0
SMALL = ImageSpec(17, 21, -2.0, 2.0, -2.5, 2.5)


@pytest.fixture(scope="module")
def fig1_buffer():
    pot, spec = PRESETS["fig1"]
    return domain_color(pot, spec)


def red_buffer(w, h):
    px = np.zeros((h, w, 3), dtype=np.uint8)
    px[..., 0] = 255
    return ImageBuffer(w, h, px)


# ---------------------------------------------------------------- spec and lattice


def test_image_spec_validation():
    with pytest.raises(ValueError):
        ImageSpec(8, 100, -1, 1, -1, 1)
    with pytest.raises(ValueError):
        ImageSpec(100, 100, 1, -1, -1, 1)
    with pytest.raises(ValueError):
        ImageSpec(100, 100, -1, 1, -1, 1, white_clip=0.5)
    with pytest.raises(ValueError):
        ImageSpec(100, 100, -1, 1, -1, 1, black_clip=1.0)
    with pytest.raises(ValueError):
        ImageSpec(20000, 10000, -1, 1, -1, 1)


def test_lattice_corners():
    assert SMALL.k_at(0, 0) == complex(-2.0, 2.5)
    assert SMALL.k_at(20, 16) == pytest.approx(complex(2.0, -2.5))
    assert SMALL.k_at(10, 8) == pytest.approx(0.0)
    assert SMALL.pixel_of(SMALL.k_at(3, 5)) == pytest.approx((3, 5))


def test_buffer_shape_checked():
    with pytest.raises(ValueError):
        ImageBuffer(4, 2, np.zeros((4, 2, 3), dtype=np.uint8))


# ---------------------------------------------------------------- colour


def test_colour_at_origin_is_mid_red():
    rgb = colorize(np.array([1.0 + 0j]), SMALL)[0]
    assert rgb[0] == pytest.approx(1.0)
    # |S| = 1 sits exactly in the middle of the ramp
    assert rgb[1] == pytest.approx(rgb[2], abs=1e-12)
    assert 0.0 <= rgb[1] < 0.05


def test_colour_saturation_limits():
    white, black, pole, nan = colorize(np.array([1e4, 1e-4, np.inf, np.nan], dtype=complex), SMALL)
    assert np.allclose(white, 1.0)
    assert np.allclose(black, 0.0)
    assert np.allclose(pole, 1.0)
    assert np.allclose(nan, 1.0)


def test_hue_follows_phase():
    rgb = colorize(np.exp(1j * np.array([0.0, 2 * math.pi / 3, -2 * math.pi / 3])), SMALL)
    assert np.argmax(rgb[0]) == 0
    assert np.argmax(rgb[1]) == 1
    assert np.argmax(rgb[2]) == 2


def test_real_axis_row_is_unit_magnitude():
    spec = ImageSpec(33, 21, -3, 3, -1, 1)
    grid = magnitude_grid(REP, spec)
    assert np.max(np.abs(grid[10])) < 1e-12


def test_pole_pixel_is_white_and_clamped():
    spec = ImageSpec(17, 17, -1, 1, -0.5, 1.5)  # row 4 col 8 is k = 1.0i
    assert spec.k_at(4, 8) == pytest.approx(1.0j)
    buf = domain_color(REP, spec)
    assert tuple(buf.pixels[4, 8]) == (255, 255, 255)
    assert magnitude_grid(REP, spec)[4, 8] == render.LOG_CLAMP
    assert buf.failures == 0


def test_failures_become_magenta(monkeypatch):
    real = render.smatrix_values

    def flaky(k, pot, ctl=None):
        k_arr = np.asarray(k)
        if k_arr.ndim and k_arr.size > 1:
            raise RuntimeError("vector path down")
        if abs(complex(k_arr) - SMALL.k_at(0, 0)) < 1e-12:
            raise RuntimeError("bad pixel")
        return real(k, pot, ctl)

    monkeypatch.setattr(render, "smatrix_values", flaky)
    buf = domain_color(REP, SMALL)
    assert buf.failures == 1
    assert tuple(buf.pixels[0, 0]) == (255, 0, 255)
    assert np.isnan(magnitude_grid(REP, SMALL)[0, 0])


# ---------------------------------------------------------------- magnitude grid


def test_magnitude_grid_shape_and_values():
    grid = magnitude_grid(ATT, SMALL)
    assert grid.shape == (21, 17)
    k = SMALL.k_at(3, 11)
    assert grid[3, 11] == pytest.approx(math.log10(abs(s_matrix(k, ATT))), abs=1e-12)


@pytest.mark.parametrize("pot", [REP, ATT])
def test_magnitude_mirror_symmetry(pot):
    # |S(-conj k)| = |S(k)|, so log|S| is even under Re k -> -Re k
    grid = magnitude_grid(pot, SMALL)
    finite = np.isfinite(grid)
    diff = np.abs(grid - grid[:, ::-1])[finite & finite[:, ::-1]]
    assert diff.max() < 1e-9


def test_magnitude_csv():
    grid = np.array([[0.0, 1.23456789012, -12.0], [12.0, np.nan, 1e-20]])
    text = magnitude_csv(grid)
    assert text == "0,1.23456789,-12\n12,nan,1e-20\n"
    sink = io.BytesIO()
    write_magnitude_csv(grid, sink)
    assert sink.getvalue().decode() == text


# ---------------------------------------------------------------- writers


def test_ppm_two_red_pixels():
    data = ppm_bytes(red_buffer(2, 1))
    assert data == b"P6\n2 1\n255\n" + bytes([255, 0, 0, 255, 0, 0])
    assert len(b"P6\n2 1\n255\n") == 11


def test_ppm_round_trip(tmp_path):
    buf = domain_color(ATT, SMALL)
    path = tmp_path / "x.ppm"
    write_ppm(buf, path)
    data = path.read_bytes()
    assert len(data) == len(b"P6\n17 21\n255\n") + 3 * 17 * 21
    back = read_ppm(data)
    assert (back.width, back.height) == (17, 21)
    assert np.array_equal(back.pixels, buf.pixels)


def test_read_ppm_rejects_other_formats():
    with pytest.raises(ValueError):
        read_ppm(b"P3\n1 1\n255\n0 0 0\n")


def test_png_round_trip(tmp_path):
    buf = domain_color(REP, SMALL)
    path = tmp_path / "x.png"
    write_png(buf, path)
    img = Image.open(path)
    assert img.mode == "RGB"
    assert img.size == (17, 21)
    assert np.array_equal(np.asarray(img), buf.pixels)
    assert np.array_equal(np.asarray(Image.open(io.BytesIO(png_bytes(buf)))), read_ppm(ppm_bytes(buf)).pixels)


def test_sink_write_error(tmp_path):
    buf = red_buffer(16, 16)
    with pytest.raises(SinkWriteError):
        write_ppm(buf, tmp_path / "missing" / "x.ppm")

    class Full(io.RawIOBase):
        def write(self, b):
            raise OSError("disk full")

    with pytest.raises(SinkWriteError):
        write_png(buf, Full())


# ---------------------------------------------------------------- determinism and winding


def test_fig1_golden_hash(fig1_buffer):
    assert fig1_buffer.failures == 0
    assert hashlib.sha256(ppm_bytes(fig1_buffer)).hexdigest() == FIG1_SHA256


def test_render_is_deterministic():
    a = ppm_bytes(domain_color(ATT, SMALL))
    b = ppm_bytes(domain_color(ATT, SMALL))
    assert a == b


def test_fig1_dimensions(fig1_buffer):
    assert fig1_buffer.pixels.shape == (1000, 800, 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_redundant_pole_phase_winding_is_negative(n):
    assert phase_winding(REP, 1j * n / 2, 0.05) == pytest.approx(-2 * math.pi, abs=1e-9)


def test_zero_phase_winding_is_positive():
    assert phase_winding(REP, -0.5j, 0.05) == pytest.approx(2 * math.pi, abs=1e-9)
    assert phase_winding(REP, 0.3 + 0.2j, 0.05) == pytest.approx(0.0, abs=1e-9)


def test_winding_guard():
    with pytest.raises(ContourTooClose):
        phase_winding(REP, 0.45j, 0.05)


def test_probe_radius_shrinks_near_neighbours():
    _, spec = PRESETS["fig1"]
    assert probe_radius(spec, 0.5j, []) == pytest.approx(4 * min(spec.dx, spec.dy))
    assert probe_radius(spec, 5j, [4.99988j]) == pytest.approx(0.4 * 1.2e-4, rel=0.05)
