import math

import pytest

from singrev.config import fixture_names, load_config


@pytest.fixture(scope="session")
def configs():
    return {name: load_config(name) for name in fixture_names()}


def spec_of(name: str):
    return load_config(name).spec()


PI = math.pi
