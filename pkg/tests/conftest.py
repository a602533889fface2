import pytest

from apvar import build_factor_table, sieve_dk


@pytest.fixture(scope="session")
def spf_table_1e7():
    return build_factor_table(10**7)


@pytest.fixture(scope="session")
def table_k2_1e4():
    return sieve_dk(10**4, 2)


@pytest.fixture(scope="session")
def table_k3_1e4():
    return sieve_dk(10**4, 3)


@pytest.fixture(scope="session")
def table_k2_1e6():
    return sieve_dk(10**6, 2)


@pytest.fixture(scope="session")
def table_k3_1e6():
    return sieve_dk(10**6, 3)


@pytest.fixture(scope="session")
def table_k4_1e6():
    return sieve_dk(10**6, 4)
