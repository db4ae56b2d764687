import os
from pathlib import Path

import pytest

from zeta0.pipeline import Options, read_jobs, run_table

DATA = Path(__file__).resolve().parent.parent / "src" / "zeta0" / "data"
TABLE_INPUT = DATA / "k0_table.input"

# lines printed at the end of the run, one per acceptance criterion
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def table_reports(tmp_path_factory):
    """The full 28-row table, computed once per session with a cold cache."""
    cache = tmp_path_factory.mktemp("cache")
    jobs = read_jobs(TABLE_INPUT)
    reports = run_table(jobs, Options(cache_dir=str(cache)))
    return {"reports": reports, "cache": str(cache), "jobs": jobs}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
