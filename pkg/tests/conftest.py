import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from causalcalc.types import enum  # noqa: E402

X2 = enum("X", 2)
Y2 = enum("Y", 2)
X3 = enum("X", 3)
BIT = enum("Bit", 2)


@pytest.fixture
def rng():
    return random.Random(1234)
