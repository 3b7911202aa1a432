import pytest

from gordian.bing import bing_double, build_link, designated_crossings, hopf
from gordian.diagram import DiagramError, parse_pd, serialize_pd, validate, writhe
from gordian.moves import canonical_code, linking_matrix, simplify_greedy, unlink
from gordian.trees import TreeError, enumerate_trees, parse_tree

from conftest import EDGE, HTREE, TREFOIL_TEXT, TRIPOD


def _zero(D):
    _, M = linking_matrix(D)
    return all(v == 0 for row in M for v in row)


def test_bing_double_of_hopf():
    res = bing_double(hopf(), "a", ("a0", "a1"))
    D = res.diagram
    assert D.labels == ["a0", "a1", "b"]
    assert set(res.children) == {"a0", "a1"} and res.replaced == "a"
    assert set(res.tile_provenance) == set(range(len(D.crossings)))
    assert _zero(D)
    S, _ = simplify_greedy(D, detour=2)
    assert len(S.crossings) == 6 and _zero(S)


def test_bing_double_of_split_circle_is_split():
    res = bing_double(unlink(["c"]), "c", ("c0", "c1"))
    assert len(res.diagram.crossings) == 4
    S, _ = simplify_greedy(res.diagram)
    assert S.crossings == () and len(S.circles) == 2


def test_children_of_untwisted_companion_have_zero_writhe():
    D = bing_double(hopf(), "a", ("a0", "a1")).diagram
    assert writhe(D, "a0") == writhe(D, "a1") == 0


def test_clasp_on_a_kinked_circle():
    from gordian.moves import r1_add

    c = r1_add(r1_add(unlink(["c"]), 1, 0), 2, 1)
    assert writhe(c, "c") == 0
    res = bing_double(c, "c", ("x", "y"))
    for lab in ("x", "y"):
        assert writhe(res.diagram, lab) == 0
    S, _ = simplify_greedy(res.diagram)
    assert S.crossings == () and len(S.circles) == 2


def test_twisted_companion_gets_framing_tiles():
    K = parse_pd(TREFOIL_TEXT)
    res = bing_double(K, "k", ("p", "q"))
    assert validate(res.diagram) == []
    twists = [i for i, t in res.tile_provenance.items() if t == "twist"]
    # one full twist per unit of writhe; the cabled self-crossings cancel in pairs
    assert len(twists) == 2 * writhe(K, "k")
    assert writhe(res.diagram, "q") == 0
    assert writhe(res.diagram, "p") == sum(res.diagram.crossings[i].sign for i in twists)


def test_bing_double_errors(hopf_diagram):
    with pytest.raises(DiagramError):
        bing_double(hopf_diagram, "z")
    with pytest.raises(DiagramError):
        bing_double(hopf_diagram, "a", ("b", "c"))
    with pytest.raises(DiagramError):
        bing_double(hopf_diagram, "a", arc=3)


def test_build_link_base_case():
    TL = build_link(EDGE, "e1")
    assert serialize_pd(TL.diagram) == serialize_pd(hopf("a", "b"))
    assert TL.leaf_map == {"a": "a", "b": "b"}


@pytest.mark.parametrize("tree,edge,k", [(TRIPOD, "a-n", 3), (HTREE, "mid", 4), (HTREE, "a-x", 4)])
def test_build_link_components_unlinked(tree, edge, k):
    D = build_link(tree, edge).diagram
    assert len(D.strands) == k == len(tree.leaves)
    assert _zero(D)
    assert validate(D) == []


def test_build_link_errors():
    with pytest.raises(TreeError):
        build_link(TRIPOD, "a-b")
    with pytest.raises(TreeError):
        build_link(parse_tree("tree { edges: a-b, b-c }"), "a-b")


@pytest.mark.parametrize("tree,pair,size", [(EDGE, ("a", "b"), 1), (TRIPOD, ("a", "c"), 2), (HTREE, ("a", "d"), 4), (HTREE, ("a", "b"), 2)])
def test_designated_sizes(tree, pair, size):
    TL = designated_crossings(tree, *pair)
    assert len(TL.designated) == size
    for cid in TL.designated:
        assert set(TL.diagram.label_of_crossing(cid)) == set(pair)


def test_designated_respects_a_chosen_path_edge():
    TL = designated_crossings(HTREE, "a", "d", "a-x")
    assert TL.defining_edge == ("a", "x") and len(TL.designated) == 4
    with pytest.raises(TreeError):
        designated_crossings(HTREE, "a", "b", "mid")


def test_all_defining_edges_give_same_invariants():
    for T in enumerate_trees(5):
        seen = set()
        for e in T.edges:
            D = build_link(T, e).diagram
            seen.add((len(D.strands), str(linking_matrix(D))))
        assert len(seen) == 1


def test_flip_changes_the_clasp():
    a = build_link(TRIPOD, "a-n").diagram
    b = build_link(TRIPOD, "a-n", flip=True).diagram
    assert canonical_code(a) != canonical_code(b)
