import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from risscatter.core import RisPanel
from risscatter.errors import DomainError
from risscatter.modulation import (
    Mode,
    ModulationProfile,
    constant_mode,
    focus_profile,
    gamma,
    gradient_profile,
    multimode_profile,
    read_gamma_table,
    table_mode,
)

coord = st.floats(-1.0, 1.0)


def test_constant_profiles():
    assert gamma(ModulationProfile((constant_mode(1.0),)), 0.3, -0.2) == pytest.approx(1.0)
    assert gamma(ModulationProfile((constant_mode(1.0, np.pi),)), 0.3, -0.2) == pytest.approx(-1.0)
    two = ModulationProfile((constant_mode(0.25), constant_mode(0.25, np.pi)))
    assert abs(gamma(two, 0.1, 0.1)) < 1e-15


def test_gamma_domain_is_the_panel():
    p = ModulationProfile((constant_mode(1.0),), half_extents=(0.5, 0.5))
    p.gamma(0.5, -0.5)
    with pytest.raises(DomainError):
        p.gamma(0.6, 0.0)


def test_gradient_examples(wave):
    k = wave.wavenumber
    assert np.all(gradient_profile(0.3, 0.3, k).phase(np.linspace(-1, 1, 5), 0.0) == 0)
    g = gradient_profile(0.0, np.radians(60), k)
    # k(0 - sin 60) at 3 GHz, high-precision value
    assert g.params["slope_rad_per_m"] == pytest.approx(-54.451650942159327622, rel=1e-13)
    assert gradient_profile(0.0, np.radians(-60), k).params["slope_rad_per_m"] == pytest.approx(54.451650942159327622)
    with pytest.raises(DomainError):
        gradient_profile(np.pi / 2, 0.0, k)


@given(coord)
def test_gradient_phase_is_odd_at_normal_incidence(x):
    g = gradient_profile(0.0, 0.7, 62.8)
    c = g.phase(0.0, 0.0)
    assert g.phase(x, 0.3) - c == pytest.approx(-(g.phase(-x, 0.3) - c), abs=1e-12)


def test_focus_examples(wave):
    k = wave.wavenumber
    f = focus_profile(np.radians(60), -10.0, k)
    assert f.phase(0.0, 0.0) == pytest.approx(k * 10.0)
    assert f.phase(1.0, 0.0) == pytest.approx(577.43780281063419702, rel=1e-13)
    sym = focus_profile(0.0, -5.0, k)
    assert sym.phase(0.3, 0.4) == pytest.approx(sym.phase(0.5, 0.0))
    with pytest.raises(DomainError):
        focus_profile(0.2, 0.0, k)


@given(coord, coord, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_single_plane_wave_mode_magnitude(x, y, m, r, th):
    p = ModulationProfile((gradient_profile(0.0, th, 60.0, m),), r)
    assert abs(p.gamma(x, y)) ** 2 == pytest.approx(r * r * m, abs=1e-12)


@given(coord, coord, st.lists(st.tuples(st.floats(0, 1), st.floats(-1.4, 1.4)), max_size=4), st.floats(0, 1))
def test_gamma_triangle_bound(x, y, entries, r):
    p = multimode_profile(entries, 0.2, 60.0, r)
    bound = r * sum(np.sqrt(m) for m, _ in entries)
    assert abs(p.gamma(x, y)) <= bound + 1e-12


def test_multimode(wave):
    k = wave.wavenumber
    one = multimode_profile([(1.0, 0.5)], 0.0, k)
    ref = ModulationProfile((gradient_profile(0.0, 0.5, k),))
    assert one.gamma(0.2, 0.1) == ref.gamma(0.2, 0.1)
    empty = multimode_profile([], 0.0, k)
    assert empty.gamma(0.3, 0.3) == 0
    prof = multimode_profile([(0.76, np.radians(70)), (0.17, np.radians(-70))], 0.0, k)
    assert [m.weight for m in prof.modes] == [0.76, 0.17]
    with pytest.raises(DomainError):
        multimode_profile([(-0.1, 0.0)], 0.0, k)


def test_mode_normalisation(lam):
    panel = RisPanel.from_size(10 * lam, 10 * lam, 0.5 * lam)
    assert gradient_profile(0.0, 1.0, 60.0).mean_square_amplitude(panel) == pytest.approx(1.0, abs=1e-3)
    taper = Mode(1.0, lambda x, y: np.sqrt(2) * np.cos(np.pi * x / (10 * lam)) * np.sqrt(2) * np.cos(np.pi * y / (10 * lam)))
    assert taper.mean_square_amplitude(panel) == pytest.approx(1.0, abs=1e-2)


def test_samples_are_cached_and_read_only(lam):
    panel = RisPanel.from_size(4 * lam, 4 * lam, 0.5 * lam)
    p = multimode_profile([(0.5, 0.3), (0.5, -0.3)], 0.0, 60.0)
    s = p.samples(panel)
    assert s.shape == (2, panel.n_tiles)
    assert p.samples(panel) is s
    with pytest.raises(ValueError):
        s[0, 0] = 0
    assert np.allclose(p.tile_gamma(panel), p.gamma(panel.tile_local[:, 0], panel.tile_local[:, 1]))


def test_custom_table(tmp_path):
    xs, ys = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(-1, 1, 5))
    vals = np.exp(1j * 2.0 * xs)
    path = tmp_path / "gamma.csv"
    lines = ["x,y,re,im"] + [f"{a},{b},{v.real},{v.imag}" for a, b, v in zip(xs.ravel(), ys.ravel(), vals.ravel())]
    path.write_text("\n".join(lines) + "\n")
    pts, v = read_gamma_table(path)
    assert pts.shape == (25, 2) and np.allclose(v, vals.ravel())
    m = table_mode(pts, v)
    assert m.shape(0.5, 0.5) == pytest.approx(np.exp(1j * 1.0))
    assert np.isfinite(m.shape(2.0, 0.0))  # nearest neighbour outside the hull
    (tmp_path / "empty.csv").write_text("x,y,re,im\n")
    with pytest.raises(DomainError):
        read_gamma_table(tmp_path / "empty.csv")
