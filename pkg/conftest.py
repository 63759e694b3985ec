# conftest.py
from itertools import combinations
from pathlib import Path
from random import Random

import pytest

from models.documents import ComplexDocument
from models.ring import PolynomialRing, VariableLayout
from services.basis_cache import basis_cache

DOCUMENTS = Path(__file__).parent / "documents"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run full Groebner verifications of the larger worked examples")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full Groebner verification, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def diagonal_initial(m: int, n: int) -> list:
    """Lex-initial monomials of the maximal minors of a generic m x n matrix, largest first"""
    layout = VariableLayout(m, n)
    gens = []
    for cols in combinations(range(1, n + 1), m):
        exps = [0] * layout.nvars
        for i, j in enumerate(cols, start=1):
            exps[layout.index(i, j)] = 1
        gens.append(tuple(exps))
    return sorted(gens, reverse=True)


def block_chain(sizes, rows: int = 3, start: int = 1):
    """Sub-block segments of the given sizes, consecutive ones sharing rows-1 labels, and their facets"""
    blocks = []
    first = start
    for size in sizes:
        blocks.append((first, first + size - 1))
        first = first + size - (rows - 1)
    facets = sorted({F for s, e in blocks for F in combinations(range(s, e + 1), rows)})
    return blocks, [list(F) for F in facets]


@pytest.fixture(autouse=True)
def fresh_basis_cache():
    basis_cache.clear()
    yield


@pytest.fixture
def load_document():
    def load(name: str) -> ComplexDocument:
        return ComplexDocument.load(DOCUMENTS / f"{name}.json")
    return load


@pytest.fixture
def document_path():
    def path(name: str) -> str:
        return str(DOCUMENTS / f"{name}.json")
    return path


@pytest.fixture
def ring_2x3():
    return PolynomialRing(VariableLayout(2, 3))


@pytest.fixture
def rng():
    return Random(7)
