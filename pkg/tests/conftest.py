import itertools
import random

import pytest
from hypothesis import strategies as st

from ordercraft.elimination import Ordering
from ordercraft.graph import Graph


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def graph_and_ordering(draw, min_n=0, max_n=8):
    g = draw(graphs(min_n, max_n))
    perm = draw(st.permutations(range(g.n)))
    return g, Ordering(tuple(perm))


@pytest.fixture
def rng():
    return random.Random(1234)
