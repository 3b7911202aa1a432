import random

import pytest

from gordian.bing import build_link, hopf
from gordian.diagram import parse_pd
from gordian.families import WHITEHEAD_PD
from gordian.moves import r1_add, unlink
from gordian.trees import parse_tree

HOPF_TEXT = "X[1,3,2,4] X[3,1,4,2] ; sites: a={1,2} b={3,4}"
TREFOIL_TEXT = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2] ; sites: k={1,2,3,4,5,6}"

EDGE = parse_tree("tree { edges: e1=a-b }")
TRIPOD = parse_tree("tree { edges: a-n, b-n, c-n }")
HTREE = parse_tree("tree { edges: a-x, b-x, mid=x-y, c-y, d-y }")
SNOWFLAKE = parse_tree("tree { edges: c-p, c-q, c-r, p-a1, p-a2, q-b1, q-b2, r-d1, r-d2 }")


@pytest.fixture
def hopf_diagram():
    return parse_pd(HOPF_TEXT)


def kinked_unknot(*variants):
    D = unlink(["a"])
    for v in variants:
        D = r1_add(D, D.arcs[0], v)
    return D


def sample_diagrams():
    """Small diagrams with varied structure, for properties quantified over test diagrams."""
    return {
        "hopf": hopf(),
        "trefoil": parse_pd(TREFOIL_TEXT),
        "whitehead": parse_pd(WHITEHEAD_PD),
        "tripod": build_link(TRIPOD, "a-n").diagram,
        "htree": build_link(HTREE, "mid").diagram,
        "kinks": kinked_unknot(0, 1, 3),
    }


def walk(D, seed: int, steps: int, cap: int = 12):
    """Random Reidemeister walk that stays near ``cap`` crossings."""
    from gordian.moves import random_move

    rng = random.Random(seed)
    for _ in range(steps):
        D, rec = random_move(D, rng, 0.6 if len(D.crossings) < cap else 0.2)
        yield D, rec
