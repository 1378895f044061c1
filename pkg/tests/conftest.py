from pathlib import Path

import pytest

from lexsim import Parameters, build_network, load_lexicon, table1_path

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def table1():
    return load_lexicon(table1_path())


@pytest.fixture(scope="session")
def homograph_lexicon():
    return load_lexicon(FIXTURES / "table1_homographs.csv")


@pytest.fixture(scope="session")
def balanced_lexicon():
    return load_lexicon(FIXTURES / "balanced.csv")


@pytest.fixture(scope="session")
def hermit_lexicon():
    return load_lexicon(FIXTURES / "hermits.csv")


@pytest.fixture(scope="session")
def params():
    return Parameters()


@pytest.fixture(scope="session")
def table1_network(table1, params):
    return build_network(table1, params)


@pytest.fixture(scope="session")
def homograph_network(homograph_lexicon, params):
    return build_network(homograph_lexicon, params)
