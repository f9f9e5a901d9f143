import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mpa360.geometry import ProjectionConfig


@pytest.fixture
def cfg():
    return ProjectionConfig(512, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
