import pytest

from qrl import make_formula


@pytest.fixture
def f_a():
    """exists x1 : (x1) -- TRUE in one step, size 3."""
    return make_formula([("e", 1)], [[1]])


@pytest.fixture
def f_b():
    """forall x1 : (x1) -- FALSE; the reduction empties the clause."""
    return make_formula([("a", 1)], [[1]])


@pytest.fixture
def f_c():
    """exists x1 : (x1)(~x1) -- reduced and FALSE with zero steps."""
    return make_formula([("e", 1)], [[1], [-1]])


@pytest.fixture
def f_d():
    """forall x1 exists x2 : (x1 v x2)(~x1 v ~x2) -- TRUE."""
    return make_formula([("a", 1), ("e", 2)], [[1, 2], [-1, -2]])


@pytest.fixture
def f_e():
    """f_d plus (x1 v ~x2) -- FALSE."""
    return make_formula([("a", 1), ("e", 2)], [[1, 2], [-1, -2], [1, -2]])
