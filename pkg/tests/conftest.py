import pytest

from archmat.dataset import embedded_dataset


@pytest.fixture(scope="session")
def data():
    return embedded_dataset()
