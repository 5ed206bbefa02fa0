import csv
import importlib.resources
import math

import numpy as np
import pytest

from negacopula import estimation

_ACCEPTANCE = {}


def _data_path():
    return importlib.resources.files("negacopula") / "data" / "airquality.csv"


@pytest.fixture(scope="session")
def airquality_path(tmp_path_factory):
    # a real filesystem path, usable by the CLI
    return str(_data_path())


@pytest.fixture(scope="session")
def airquality():
    """Complete (Wind, Ozone) pairs from the bundled fixture."""
    wind, ozone = [], []
    with open(_data_path(), newline="") as fh:
        for row in csv.DictReader(fh):
            def cell(col):
                raw = row[col].strip()
                return math.nan if raw in ("", "NA") else float(raw)

            wind.append(cell("Wind"))
            ozone.append(cell("Ozone"))
    return estimation.PairedData.from_columns(np.array(wind), np.array(ozone))


@pytest.fixture(scope="session")
def acceptance():
    """Record one pass/fail line per acceptance criterion for the summary."""

    def record(number, description, passed, detail=""):
        _ACCEPTANCE[number] = (description, bool(passed), detail)
        status = "PASS" if passed else "FAIL"
        print(f"acceptance criterion {number} [{status}] {description}: {detail}")
        assert passed, f"criterion {number} ({description}): {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for number in sorted(_ACCEPTANCE):
        description, passed, detail = _ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        line = f"  {number:2d} [{status}] {description}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
