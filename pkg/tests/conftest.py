import numpy as np
import pytest

from hypcurves.corpus import generate_corpus
from hypcurves.spine import build_spine
from hypcurves.surface import (SurfaceTopology, build_pants_graph, four_holed_sphere, genus_two,
                               one_holed_torus, standard_decomposition)


@pytest.fixture(scope="session")
def torus():
    return build_pants_graph(one_holed_torus())


@pytest.fixture(scope="session")
def sphere4():
    return build_pants_graph(four_holed_sphere())


@pytest.fixture(scope="session")
def genus2():
    return build_pants_graph(genus_two())


@pytest.fixture(scope="session")
def pants():
    return build_pants_graph(standard_decomposition(SurfaceTopology(0, 3, 0)))


@pytest.fixture(scope="session")
def punctured_torus():
    return build_pants_graph(standard_decomposition(SurfaceTopology(1, 0, 1)))


@pytest.fixture(scope="session")
def small_corpora(torus, sphere4, genus2):
    """A few short curves per surface, k in [1, 12]."""
    return {name: (g, generate_corpus(g, 11, 12, 1, 12, max_steps=16))
            for name, g in [("torus", torus), ("sphere4", sphere4), ("genus2", genus2)]}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def word_cycle(g, w):
    return build_spine(g).word_cycle(w)
