import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # oracle/corpus/dap_client helpers

DATA = Path(__file__).parent / "data"

LIA_SOLVER = f"{sys.executable} -m verdap.liasolver"
MISSING_SOLVER = "verdap-no-such-solver-zz"


def fast_lia_command() -> tuple[str, ...]:
    """The bundled solver as a plain script with site-imports skipped: the
    module is stdlib-only, and this halves per-query spawn cost."""
    import verdap.liasolver

    return (sys.executable, "-S", verdap.liasolver.__file__)


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def lia_solver_cmd() -> str:
    return LIA_SOLVER


@pytest.fixture
def abs_source() -> str:
    return (DATA / "abs.mv").read_text()


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        print(f"\n[acceptance] {name}: {outcome}", flush=True)
