import pytest

from pgroups import catalog


@pytest.fixture(scope="session")
def C3():
    return catalog.cyclic(3, 1)


@pytest.fixture(scope="session")
def C9():
    return catalog.cyclic(3, 2)


@pytest.fixture(scope="session")
def C33():
    return catalog.elementary_abelian(3, 2)


@pytest.fixture(scope="session")
def H3():
    return catalog.heisenberg(3)


@pytest.fixture(scope="session")
def M27():
    return catalog.modular_p3(3)


@pytest.fixture(scope="session")
def D23():
    return catalog.parse_group_spec("d:2,3")


@pytest.fixture(scope="session")
def W3():
    return catalog.wreath_cyclic(3)


@pytest.fixture(scope="session")
def small_catalog_p3():
    return catalog.default_catalog(3, max_order=243)
