import numpy as np
import pytest

from coexlink.presets import IDLE_MIXTURES, exponential_scenario, preset_scenario

# Seed shared by the statistical tests.  KS/chi-square/3-sigma checks are
# exact-tolerance assertions on a fixed stream, so any seed that is not a
# ~2-sigma outlier works; this one was verified to have comfortable margin
# on every scenario.
SUITE_SEED = 20260815

ALL_PRESET_NAMES = sorted(IDLE_MIXTURES) + ["exp_alpha_0.0361", "exp_alpha_0.1575"]

_acceptance_lines: list[tuple[int, str, bool, str]] = []


def record_criterion(number: int, title: str, passed: bool, detail: str) -> None:
    _acceptance_lines.append((number, title, passed, detail))


@pytest.fixture
def scenario_exp_0p1575():
    return exponential_scenario(0.1575)


@pytest.fixture
def scenario_exp_0p0361():
    return exponential_scenario(0.0361)


@pytest.fixture(params=ALL_PRESET_NAMES)
def any_scenario(request):
    return preset_scenario(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(SUITE_SEED)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_acceptance_lines):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number} [{status}] {title}: {detail}")
