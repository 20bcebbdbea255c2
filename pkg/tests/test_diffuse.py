import numpy as np
import pytest

from risscatter.core import RisPanel
from risscatter.diffuse import DiffuseConfig, diffuse_intensity
from risscatter.errors import DomainError, WrongHalfSpaceError
from risscatter.incident import PlaneWave


def hemisphere_power(panel, inc, s2, r, nt=300, nphi=72):
    # midpoint quadrature of |E_s|^2 r^2 over the front hemisphere (eta cancels)
    t = (np.arange(nt) + 0.5) * (np.pi / 2) / nt
    p = (np.arange(nphi) + 0.5) * 2 * np.pi / nphi
    T, P = np.meshgrid(t, p, indexing="ij")
    dirs = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1).reshape(-1, 3)
    e2 = diffuse_intensity(panel, inc, s2, panel.origin + r * dirs).reshape(nt, nphi)
    return np.sum(e2 * r ** 2 * np.sin(T)) * (np.pi / 2 / nt) * (2 * np.pi / nphi)


def test_zero_roughness(normal_wave, small_panel):
    assert np.all(diffuse_intensity(small_panel, normal_wave, 0.0, np.array([[0, 0, 1.0], [1, 1, 2.0]])) == 0)


@pytest.mark.parametrize("theta", [0.0, 40.0])
def test_single_tile_energy(wave, lam, theta):
    inc = PlaneWave.from_angles(wave, 2.0, np.radians(theta), (0, 1, 0))
    tile = RisPanel.from_size(0.5 * lam, 0.5 * lam, 0.5 * lam)
    got = hemisphere_power(tile, inc, 0.3, 500 * lam)
    expected = 0.3 * 4.0 * np.cos(np.radians(theta)) * tile.tile_area
    assert got == pytest.approx(expected, rel=1e-3)


def test_panel_energy(wave, lam):
    inc = PlaneWave.from_angles(wave, 1.0, np.radians(20), (0, 1, 0))
    panel = RisPanel.from_size(4 * lam, 4 * lam, 0.5 * lam)
    got = hemisphere_power(panel, inc, 0.5, 200 * lam)
    expected = 0.5 * np.cos(np.radians(20)) * (4 * lam) ** 2
    assert got == pytest.approx(expected, rel=1e-2)


def test_grazing_incidence(wave, lam):
    inc = PlaneWave.from_angles(wave, 1.0, np.pi / 2, (0, 1, 0))
    tile = RisPanel.from_size(lam, lam, 0.5 * lam)
    normal = PlaneWave.from_angles(wave, 1.0, 0.0, (0, 1, 0))
    ref = diffuse_intensity(tile, normal, 0.8, np.array([0, 0, 3.0]))
    assert diffuse_intensity(tile, inc, 0.8, np.array([0, 0, 3.0])) < 1e-14 * ref


def test_refinement(wave, lam, normal_wave):
    pts = np.array([[0.2, 0.1, 1.0], [1.5, -0.5, 2.0]])
    coarse = diffuse_intensity(RisPanel.from_size(10 * lam, 10 * lam, lam / 4), normal_wave, 0.4, pts)
    fine = diffuse_intensity(RisPanel.from_size(10 * lam, 10 * lam, lam / 8), normal_wave, 0.4, pts)
    assert np.max(np.abs(coarse - fine) / fine) < 5e-3


def test_scales_with_s_squared(normal_wave, small_panel):
    p = np.array([0.3, 0.0, 2.0])
    assert diffuse_intensity(small_panel, normal_wave, 0.8, p) == pytest.approx(
        2 * diffuse_intensity(small_panel, normal_wave, 0.4, p), rel=1e-14)


def test_errors(normal_wave, small_panel):
    with pytest.raises(WrongHalfSpaceError):
        diffuse_intensity(small_panel, normal_wave, 0.5, np.array([0, 0, -1.0]))
    with pytest.raises(DomainError):
        DiffuseConfig(1.5)
    with pytest.raises(DomainError):
        DiffuseConfig(0.5, lobe="gaussian")
