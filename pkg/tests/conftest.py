import random
from fractions import Fraction

import pytest

from lewalk.network import DirectedNetwork

HALF = Fraction(1, 2)


@pytest.fixture
def three_cycle():
    """Three-cycle a -> b -> c -> a with weights 1/2."""
    return DirectedNetwork.build(
        3, [(0, 1, HALF), (1, 2, HALF), (2, 0, HALF)]
    )


LEGGED_CYCLE_EDGES = [
    (0, 6, HALF),  # a1 -> w   (q4)
    (6, 2, HALF),  # w  -> b1  (q5)
    (1, 4, HALF),  # a2 -> u   (q6)
    (4, 5, HALF),  # u  -> v   (q1)
    (5, 3, HALF),  # v  -> b2  (q7)
    (5, 6, HALF),  # v  -> w   (q2)
    (6, 4, HALF),  # w  -> u   (q3)
]
A1, A2, B1, B2, U, V, W = range(7)


@pytest.fixture
def legged_cycle():
    """Three-cycle with legs: a1, a2 feed the cycle u, v, w which exits to
    the boundary b1, b2."""
    return DirectedNetwork.build(7, LEGGED_CYCLE_EDGES, boundary={B1, B2})


def random_network(
    rng: random.Random,
    max_vertices: int = 5,
    max_edges: int = 8,
    with_boundary: bool = False,
    positive: bool = False,
) -> DirectedNetwork:
    """Random small network: distinct ordered pairs (loops allowed), nonzero
    rational weights."""
    nv = rng.randint(3, max_vertices)
    ne = rng.randint(4, max_edges)
    pairs = [(a, b) for a in range(nv) for b in range(nv)]
    rng.shuffle(pairs)
    triples = []
    for a, b in pairs[:ne]:
        while True:
            num = rng.randint(1 if positive else -3, 3)
            if num != 0:
                break
        triples.append((a, b, Fraction(num, rng.randint(1, 4))))
    triples.sort()
    boundary = set()
    if with_boundary:
        boundary = set(rng.sample(range(nv), rng.randint(1, nv - 1)))
    return DirectedNetwork.build(nv, triples, boundary)
