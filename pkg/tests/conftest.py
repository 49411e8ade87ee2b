import json
from pathlib import Path

import pytest

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def desk_config(tmp_path):
    """Desk two-target scene shortened to 6 frames, written to a temp file."""
    doc = json.loads((CONFIGS / "desk_two_targets.json").read_text())
    doc["num_frames"] = 6
    path = tmp_path / "desk.json"
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def configs_dir():
    return CONFIGS


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
