import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from brandtrank import affine, brandt  # noqa: E402

# the cache-isolation fixture is function scoped but never touched by property tests
settings.register_profile("default", suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("default")

# (criterion number, description, passed) collected by test_acceptance
ACCEPTANCE_LINES: list[tuple[int, str, bool]] = []


@pytest.fixture(scope="session")
def aplus1():
    return affine.build_cayley(1, "aplus")


@pytest.fixture(scope="session")
def aplus2():
    return affine.build_cayley(2, "aplus")


@pytest.fixture(scope="session")
def aplus3():
    return affine.build_cayley(3, "aplus")


@pytest.fixture(scope="session")
def aff2():
    return affine.build_cayley(2, "aff")


@pytest.fixture(scope="session")
def aff3():
    return affine.build_cayley(3, "aff")


@pytest.fixture(scope="session")
def brandt_s3():
    return brandt.build_brandt(brandt.symmetric_group(3), 3)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("BRANDTRANK_CACHE_DIR", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, ok in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {text}")
