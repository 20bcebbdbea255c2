import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from risscatter import ModulationProfile, PlaneWave, PowerBudget, RisPanel, WaveSpec, gradient_profile
from risscatter.scan import Scene

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def wave():
    return WaveSpec.from_ghz(3.0)


@pytest.fixture(scope="session")
def lam(wave):
    return wave.wavelength


@pytest.fixture
def small_panel(lam):
    return RisPanel.from_size(6 * lam, 6 * lam, 0.5 * lam)


@pytest.fixture
def normal_wave(wave):
    return PlaneWave.from_angles(wave, 1.0, 0.0, (0, 1, 0))


@pytest.fixture
def steering_scene(wave, lam):
    panel = RisPanel.from_size(10 * lam, 10 * lam, 0.49 * lam)
    inc = PlaneWave.from_angles(wave, 1.0, 0.0, (0, 1, 0), panel=panel)
    prof = ModulationProfile((gradient_profile(0.0, np.radians(40), wave.wavenumber),))
    return Scene(wave, panel, inc, prof, PowerBudget(0.0, (1.0,)))


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion for the end-of-run summary."""

    def record(number: int, ok: bool, detail: str) -> bool:
        _CRITERIA[number] = (bool(ok), detail)
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
