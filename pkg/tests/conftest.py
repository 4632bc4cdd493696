import os

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")


@pytest.fixture
def rng():
    seed = int(os.environ.get("RANKFORGE_SEED", "0"))
    return np.random.default_rng(seed)
