import numpy as np
import pytest

from effmass import ConstantMass, ExponentialMass, RationalSquaredMass, UserDefinedMass


def _gauss_bump():
    # m = 1 + 0.5 exp(-z^2)
    return UserDefinedMass(
        lambda z: 1.0 + 0.5 * np.exp(-z * z),
        lambda z: -z * np.exp(-z * z),
        lambda z: (2 * z * z - 1) * np.exp(-z * z),
        name="bump",
    )


SHIPPED_PROFILES = {
    "constant": ConstantMass(1.3),
    "exponential": ExponentialMass(1.0, 1.0),
    "exponential_neg": ExponentialMass(0.7, -0.8),
    "rational": RationalSquaredMass(1.0, 2.0, 1.0),
    "rational_small_a": RationalSquaredMass(1.0, 0.4, 1.5),
}


@pytest.fixture(params=sorted(SHIPPED_PROFILES))
def profile(request):
    return SHIPPED_PROFILES[request.param]


@pytest.fixture
def bump():
    return _gauss_bump()


# --------------------------------------------------------------------------- acceptance summary

_CRITERIA = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome == "failed":
        entry = _CRITERIA.setdefault(marker, [True, []])
        if report.outcome != "passed":
            entry[0] = False
            entry[1].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), (ok, failed) in sorted(_CRITERIA.items()):
        tail = "" if ok else f"  (failing: {', '.join(failed)})"
        terminalreporter.write_line(f"criterion {num} {title}: {'PASS' if ok else 'FAIL'}{tail}")
