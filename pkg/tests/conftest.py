"""Shared fixtures: model ambients and builtin immersions."""

import numpy as np
import pytest

from kaehlerlab.geometry.ambient import make_ambient
from kaehlerlab.geometry.submanifold import make_immersion


@pytest.fixture(scope="session")
def flat2():
    return make_ambient("flat", 2)


@pytest.fixture(scope="session")
def fs2():
    return make_ambient("fubini_study", 2)


@pytest.fixture(scope="session")
def ch2():
    return make_ambient("complex_hyperbolic", 2)


@pytest.fixture(params=["flat", "fubini_study", "complex_hyperbolic"])
def ambient2(request):
    return make_ambient(request.param, 2)


@pytest.fixture(
    params=[
        ("flat", 2),
        ("fubini_study", 2),
        ("complex_hyperbolic", 2),
        ("fubini_study", 3),
        ("complex_hyperbolic", 3),
    ],
    ids=lambda p: f"{p[0]}-{p[1]}",
)
def any_ambient(request):
    kind, m = request.param
    return make_ambient(kind, m)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def sphere(flat2):
    return make_immersion(flat2, "SPH3")


@pytest.fixture(scope="session")
def crw(flat2):
    return make_immersion(flat2, "CRW")


@pytest.fixture(scope="session")
def lagr2(flat2):
    return make_immersion(flat2, "LAGR2")


@pytest.fixture(scope="session")
def fs_line(fs2):
    return make_immersion(fs2, "CLINE")

