import os
from pathlib import Path

import pytest

from capkit.catalog import catalog_build, catalog_load


@pytest.fixture(scope="session")
def catalog_dir(tmp_path_factory):
    """A T2 catalog, built once per session (or reused from $CAPKIT_TEST_CATALOG)."""
    pre = os.environ.get("CAPKIT_TEST_CATALOG")
    if pre and (Path(pre) / "tiers.txt").exists():
        return Path(pre)
    root = Path(pre) if pre else tmp_path_factory.mktemp("catalog")
    catalog_build(root, "T2")
    return root


@pytest.fixture(scope="session")
def catalog(catalog_dir):
    return catalog_load(catalog_dir, deep=True)


@pytest.fixture(scope="session")
def reps4(catalog):
    return catalog.reps(4)


@pytest.fixture(scope="session")
def t0_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("catalog_t0")
    catalog_build(root, "T0")
    return root


CRITERIA: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
