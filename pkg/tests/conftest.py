import os

import hypothesis
import numpy as np
import pytest

from fields import abc_flow, poloidal_field, rigid_rotation, swirl_bump

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=25, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))

AXIS = np.array([0.3, -0.5, 0.8]) / np.linalg.norm([0.3, -0.5, 0.8])


@pytest.fixture
def axis():
    return AXIS.copy()


@pytest.fixture
def abc16():
    return abc_flow(1.0, 1.0, 1.0, 16)


@pytest.fixture
def rotation32():
    return rigid_rotation(AXIS, 32)


@pytest.fixture
def swirl32():
    return swirl_bump(AXIS, 32)


@pytest.fixture
def poloidal32():
    return poloidal_field(AXIS, 32)
