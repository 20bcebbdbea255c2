import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from risscatter.core import (
    ETA_0,
    AngularCut,
    Complex3,
    PlanarGrid,
    RisPanel,
    WaveSpec,
    check_front,
    far_green,
    green,
    reactive_mask,
    tangential_project,
)
from risscatter.errors import ContractError, DomainError, WrongHalfSpaceError

finite = st.floats(-1e3, 1e3, allow_nan=False)
cplx = st.builds(complex, finite, finite)


def test_complex3_algebra():
    a = Complex3(1 + 1j, 2, 0)
    b = Complex3(0, 1j, 3)
    assert a.dot(b) == pytest.approx((1 + 1j) * 0 + 2 * 1j + 0)
    assert np.allclose(a.cross(b).to_array(), np.cross(a.to_array(), b.to_array()))
    assert (a + b).to_array() == pytest.approx(np.array([1 + 1j, 2 + 1j, 3]))
    assert a.magnitude() == pytest.approx(np.sqrt(2 + 4))
    assert Complex3(1, 0, 0).cross(Complex3(0, 1, 0)).to_array() == pytest.approx(np.array([0, 0, 1]))


@given(st.lists(cplx, min_size=3, max_size=3), st.lists(cplx, min_size=3, max_size=3))
def test_cross_is_antisymmetric_and_orthogonal(u, v):
    a, b = Complex3(*u), Complex3(*v)
    c = a.cross(b).to_array()
    assert np.allclose(c, -b.cross(a).to_array())
    scale = max(1.0, a.magnitude() * b.magnitude()) ** 2
    assert abs(np.sum(c * a.to_array())) <= 1e-9 * scale
    assert a.magnitude() >= 0


def test_wavespec_constants(wave):
    assert wave.wavenumber * wave.wavelength == pytest.approx(2 * np.pi, rel=1e-15)
    assert wave.eta == pytest.approx(ETA_0)
    assert WaveSpec(3e9).wavelength == pytest.approx(299792458.0 / 3e9)


@pytest.mark.parametrize("v, n, expected", [
    ((0, 0, 5), (0, 0, 1), (0, 0, 0)),
    ((1, 2, 3), (0, 0, 1), (1, 2, 0)),
    ((1 + 1j, 0, 1 - 1j), (1, 0, 0), (0, 0, 1 - 1j)),
])
def test_tangential_project_examples(v, n, expected):
    assert np.allclose(tangential_project(np.array(v, dtype=complex), np.array(n, float)), expected, atol=1e-15)


def test_tangential_project_rejects_non_unit_normal():
    with pytest.raises(ContractError):
        tangential_project(np.ones(3), np.array([0, 0, 2.0]))


@given(st.lists(cplx, min_size=3, max_size=3), st.floats(0, np.pi), st.floats(0, 2 * np.pi))
def test_tangential_project_idempotent_and_orthogonal(v, th, ph):
    n = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
    n /= np.linalg.norm(n)
    v = np.array(v)
    t = tangential_project(v, n)
    scale = max(1.0, np.linalg.norm(v))
    assert abs(t @ n) < 1e-12 * scale
    assert np.allclose(tangential_project(t, n), t, atol=1e-12 * scale)


def test_green_examples(wave):
    lam, k = wave.wavelength, wave.wavenumber
    assert green(lam, k) == pytest.approx(1 / (4 * np.pi * lam), rel=1e-12)
    assert green(lam / 2, k) == pytest.approx(-1 / (2 * np.pi * lam), rel=1e-12)
    # independent high-precision evaluation at 0.35 m, 3 GHz
    assert green(0.35, k) == pytest.approx(-0.22733785626728672958 + 0.0034612942618061552646j, rel=1e-12)
    with pytest.raises(DomainError):
        green(0.0, k)


@given(st.floats(1e-3, 1e4))
def test_green_magnitude(r):
    assert abs(green(r, 20.0)) * 4 * np.pi * r == pytest.approx(1.0, rel=1e-12)


def test_far_green(wave):
    k = wave.wavenumber
    r = np.array([0, 0, 1000.0])
    assert far_green(r, np.zeros(3), k) == pytest.approx(green(1000.0, k), rel=1e-13)
    v = far_green(r, np.array([1.0, 0, 0]), k)
    assert abs(v) == pytest.approx(1 / (4 * np.pi * 1000), rel=1e-12)
    assert np.angle(v) == pytest.approx(np.angle(np.exp(-1j * k * 1000)), abs=1e-9)
    src = np.array([0.03, -0.02, 0.0])  # sub-wavelength offset keeps k|r'|^2/|r| small
    obs = 100 * np.linalg.norm(src) * np.array([0.6, 0.0, 0.8])
    ref = green(np.linalg.norm(obs - src), k)
    assert abs(far_green(obs, src, k) - ref) / abs(ref) < 1e-2
    with pytest.raises(DomainError):
        far_green(np.zeros(3), src, k)


def test_panel_triad_and_tiles(lam):
    p = RisPanel.from_size(2.0, 1.0, 0.49 * lam, normal=(0, 1, 1), x_axis=(1, 0.1, 0))
    x, y, n = p.x_hat, p.y_hat, p.n_hat
    for a in (x, y, n):
        assert abs(np.linalg.norm(a) - 1) < 1e-12
    assert abs(x @ y) < 1e-12 and abs(x @ n) < 1e-12 and abs(y @ n) < 1e-12
    assert np.allclose(np.cross(x, y), n)
    nx, ny = p.counts
    assert (nx, ny) == (round(2.0 / (0.49 * lam)), round(1.0 / (0.49 * lam)))
    assert p.n_tiles == nx * ny == len(p.tile_centers)
    assert np.allclose(p.height(p.tile_centers), 0, atol=1e-12)
    # tiles cover the panel exactly with the actual pitch
    assert p.pitch[0] * nx == pytest.approx(2.0)
    assert p.tile_local[:, 0].max() == pytest.approx(1.0 - p.pitch[0] / 2)
    assert p.fraunhofer_distance(lam) == pytest.approx(2 * 4.0 / lam)


def test_panel_x_index_is_outermost(lam):
    p = RisPanel.from_size(3 * lam, 2 * lam, lam)
    uv = p.tile_local
    assert np.allclose(uv[:2, 0], uv[0, 0]) and uv[0, 1] < uv[1, 1]


def test_small_panel_keeps_one_tile(lam):
    assert RisPanel.from_size(0.1 * lam, 0.1 * lam, 0.5 * lam).counts == (1, 1)
    assert RisPanel((0.0, 0.0), lam).n_tiles == 0


def test_local_global_round_trip(lam):
    p = RisPanel.from_size(1.0, 1.0, 0.5 * lam, center=(1, 2, 3), normal=(1, 0, 0), x_axis=(0, 1, 0))
    pts = np.random.default_rng(1).normal(size=(10, 3))
    assert np.allclose(p.to_global(p.to_local(pts)), pts)


def test_front_half_space_and_reactive_flags(lam):
    p = RisPanel.from_size(1.0, 1.0, 0.5 * lam)
    with pytest.raises(WrongHalfSpaceError):
        check_front(p, np.array([[0, 0, -1.0]]))
    with pytest.raises(WrongHalfSpaceError):
        check_front(p, np.array([[0, 0, 0.0]]))
    flags = reactive_mask(p, np.array([[0, 0, 2 * lam], [0, 0, 4 * lam]]), lam)
    assert flags.tolist() == [True, False]


def test_grid_kinds_agree(lam):
    p = RisPanel.from_size(1.0, 1.0, 0.5 * lam)
    th = np.radians([-30.0, 0.0, 45.0])
    cut = AngularCut.in_panel_plane(p, 5.0, th)
    assert np.allclose(cut.points, np.column_stack([5 * np.sin(th), 0 * th, 5 * np.cos(th)]))
    g = PlanarGrid.from_ranges((-1, 1), (2, 4), (3, 5))
    assert g.points.shape == (15, 3) and g.size == 15
    assert np.allclose(g.points[0], [-1, 0, 2]) and np.allclose(g.points[-1], [1, 0, 4])
    assert np.allclose(g.points[1], [-1, 0, 2.5])  # second axis fastest
    yz = AngularCut.in_panel_plane(p, 5.0, th, plane="yz")
    assert np.allclose(yz.points[:, 0], 0)
    with pytest.raises(DomainError):
        AngularCut.in_panel_plane(p, 5.0, th, plane="xy")
