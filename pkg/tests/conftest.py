import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from casbridge.kernel import Environment, load_prelude


@pytest.fixture(scope="session")
def env() -> Environment:
    return load_prelude()
