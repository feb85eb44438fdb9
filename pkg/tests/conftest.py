import pytest

from toriq.example import build_example


@pytest.fixture(scope="session")
def ex():
    return build_example()
