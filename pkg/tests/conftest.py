import pytest

from ghostcoal.instances import checkerboard, worked_instance


@pytest.fixture(scope="session")
def worked():
    return worked_instance()


@pytest.fixture(scope="session")
def three():
    return checkerboard(4, (0, 2, 4))
