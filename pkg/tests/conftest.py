import math

import pytest

from fraciter import superlog


@pytest.fixture(scope="session")
def env_e30():
    return superlog.prepare(math.e, 30)


@pytest.fixture(scope="session")
def env_2_30():
    return superlog.prepare(2.0, 30)
