"""Shared fixtures: fast chains (scrypt n=16), fixed salts and a temp store"""

import pytest

from src.chains import (
    FB2014_VERSION,
    SHA256_V1_VERSION,
    Pepper,
    SaltSet,
    facebook2014_chain,
    sha256_v1_chain,
    with_scrypt_cost,
)
from src.credstore import CredentialStore

FAST_N = 16
TEST_PEPPER_HEX = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff"


@pytest.fixture
def fast_fb2014():
    return with_scrypt_cost(facebook2014_chain(), FAST_N)


@pytest.fixture
def sha256_v1():
    return sha256_v1_chain()


@pytest.fixture
def zero_salts():
    return SaltSet.zeros()


@pytest.fixture
def zero_pepper():
    return Pepper.zeros()


@pytest.fixture
def pepper():
    return Pepper.from_hex(TEST_PEPPER_HEX)


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "store.txt"


@pytest.fixture
def store(store_path, fast_fb2014, sha256_v1):
    return CredentialStore.open(
        store_path,
        create=True,
        chains={FB2014_VERSION: fast_fb2014, SHA256_V1_VERSION: sha256_v1},
        default_chain=FB2014_VERSION,
    )


@pytest.fixture
def pepper_env(monkeypatch):
    monkeypatch.setenv("ONIONHASH_PEPPER", TEST_PEPPER_HEX)
    for var in ("ONIONHASH_STORE", "ONIONHASH_CHAIN", "ONIONHASH_BIND"):
        monkeypatch.delenv(var, raising=False)
    return TEST_PEPPER_HEX
