import pytest

from rhconj.engine import Context
from rhconj.groups import bundled


def reduced_words(n_letters, max_len):
    """All freely reduced words of length <= max_len, shortlex order."""
    out = [()]
    layer = [()]
    for _ in range(max_len):
        layer = [w + (x,) for w in layer for x in range(n_letters) if not w or w[-1] != x ^ 1]
        out += layer
    return out


@pytest.fixture(scope="session")
def f2():
    return bundled("f2")


@pytest.fixture(scope="session")
def f2a():
    return bundled("f2_rel_a")


@pytest.fixture(scope="session")
def z23():
    return bundled("z2_star_z3")


@pytest.fixture(scope="session")
def ctx_f2(f2):
    return Context(f2)


@pytest.fixture(scope="session")
def ctx_f2a(f2a):
    return Context(f2a)


@pytest.fixture(scope="session")
def ctx_z23(z23):
    return Context(z23)
