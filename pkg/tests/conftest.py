import pytest

from drawext import drawing_from_rotation
from tests.strategies import k4_crossing, plane, square


@pytest.fixture
def triangle():
    return drawing_from_rotation({'a': ['b', 'c'], 'b': ['c', 'a'], 'c': ['a', 'b']})


@pytest.fixture
def c4():
    return square()


@pytest.fixture
def k4x():
    return k4_crossing()


@pytest.fixture
def star():
    """Two crossing edges ac and bd, nothing else."""
    return drawing_from_rotation({'a': ['x0'], 'b': ['x0'], 'c': ['x0'], 'd': ['x0'], 'x0': ['a', 'b', 'c', 'd']},
                                 {'x0': (('a', 'c'), ('b', 'd'))})


@pytest.fixture
def path3():
    return plane([('a', 'b'), ('b', 'c')])
