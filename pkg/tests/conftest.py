import pytest

from orbitsieve import default_group, enumerate_ball, sample_forms


@pytest.fixture(scope="session")
def group():
    return default_group()


@pytest.fixture(scope="session")
def ball60(group):
    return enumerate_ball(group, 60.0)


@pytest.fixture(scope="session")
def forms10(group):
    return sample_forms(group, 10, seed=7)
