import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from quantcat.builders import chain_quantale, free_parallel_pair, two_quantale, LUKASIEWICZ  # noqa: E402
from quantcat.enriched import VCategory  # noqa: E402

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def preorder(objects, leq_pairs, base=None):
    """A category over the 2-quantale from an order relation (reflexive closure added)."""
    base = base or two_quantale()
    hom = {(x, y): "1" if x == y or (x, y) in leq_pairs else "0" for x in objects for y in objects}
    return VCategory(base, list(objects), {x: "*" for x in objects}, hom)


@pytest.fixture
def two():
    return two_quantale()


@pytest.fixture
def luk3():
    return chain_quantale(3, LUKASIEWICZ)


@pytest.fixture
def parallel():
    return free_parallel_pair()


@pytest.fixture
def discrete_pair():
    return preorder(["a", "b"], set())


@pytest.fixture
def chain3():
    # hom(x, y) = [x <= y]
    return preorder(["a", "b", "c"], {("a", "b"), ("b", "c"), ("a", "c")})
