import pytest

from xlsparse import SPEED_OF_LIGHT, Kind, MultiSubarraySpec, gen_dua, gen_multi_subarray, gen_wsms

LAM_100GHZ = SPEED_OF_LIGHT / 100e9

_acceptance: dict[str, str] = {}


@pytest.fixture(scope="session")
def lam():
    return LAM_100GHZ


@pytest.fixture(scope="session")
def xl_layouts():
    """The five 512-element layouts of the 100 GHz experiments (8 subarrays x 64)."""
    lam = LAM_100GHZ
    return {
        "DUA": gen_dua(512, lam),
        "WSMS": gen_wsms(8, 64, 128, lam),
        "NMS": gen_multi_subarray(MultiSubarraySpec(Kind.NA, 8, 64), lam),
        "CMS": gen_multi_subarray(MultiSubarraySpec(Kind.CA, 8, 64, coprime_pair=(2, 5)), lam),
        "NRMS": gen_multi_subarray(MultiSubarraySpec(Kind.NRA, 8, 64), lam),
    }


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {name}")
