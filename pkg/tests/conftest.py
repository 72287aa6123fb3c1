import pytest

from apseq import generators as G

# Session-scoped fixtures: sequences memoize their prefixes, so sharing
# one instance across tests keeps the suite fast.


@pytest.fixture(scope="session")
def tm():
    return G.thue_morse()


@pytest.fixture(scope="session")
def fib():
    return G.fibonacci()


@pytest.fixture(scope="session")
def p01():
    return G.periodic("01")


@pytest.fixture(scope="session")
def kolak():
    return G.kolakoski()


@pytest.fixture(scope="session")
def x5():
    return G.aperiodicity_witness(5)


@pytest.fixture(scope="session")
def scheme_seq():
    """Pair-scheme output with a scheme-derived certified bound."""
    return G.scheme_generate(G.pair_alternation_scheme())


@pytest.fixture(scope="session")
def branching_seq():
    """Aperiodic pair-scheme output (ratio-4 forced-chain scheme)."""
    return G.scheme_generate(G.aperiodic_scheme())
