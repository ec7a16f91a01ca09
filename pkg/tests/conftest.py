from functools import lru_cache

import pytest

from cartan_odd.contact import build


@lru_cache(maxsize=None)
def algebra(kind, n, p, kappa=None):
  return build(kind, n, p, kappa)


@pytest.fixture(scope="session")
def m15():
  return algebra("m", 1, 5)


@pytest.fixture(scope="session")
def m25():
  return algebra("m", 2, 5)


# acceptance summary: one line per criterion, printed after the run
ACCEPTANCE = []


def record(criterion, status: str, detail: str = ""):
  ACCEPTANCE.append(f"criterion {criterion}: {status.upper()}" + (f"  {detail}" if detail else ""))


def pytest_terminal_summary(terminalreporter):
  if ACCEPTANCE:
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
      terminalreporter.write_line(line)
