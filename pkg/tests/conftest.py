"""Shared fixtures: canonical shapes and corpus slices used across tests."""
import pytest

from coverplan.geometry import Polygon
from coverplan.corpus import seeded_corpus

CORPUS_SEED = 42
CORPUS_SIZE = 200


@pytest.fixture
def unit_square():
    return Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def rect_10x2():
    return Polygon([(0, 0), (10, 0), (10, 2), (0, 2)])


@pytest.fixture
def l_shape():
    return Polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture
def room_10x10():
    return Polygon([(0, 0), (10, 0), (10, 10), (0, 10)])


@pytest.fixture(scope="session")
def corpus():
    return seeded_corpus(CORPUS_SEED, CORPUS_SIZE)


@pytest.fixture(scope="session")
def corpus_small():
    """First 30 corpus polygons, for the slower property checks."""
    return seeded_corpus(CORPUS_SEED, CORPUS_SIZE)[:30]
