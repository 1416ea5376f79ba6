import pytest
from hypothesis import HealthCheck, settings

from carlitz_prolong.special_fn import SpecialFnConfig

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def cfg2():
    return SpecialFnConfig.create(2)


@pytest.fixture(scope="session")
def cfg3():
    return SpecialFnConfig.create(3)


@pytest.fixture(scope="session")
def cfg4():
    return SpecialFnConfig.create(2, 2)
