import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from config import ConfigManager  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_config():
    ConfigManager.reset()
    yield
    ConfigManager.reset()
