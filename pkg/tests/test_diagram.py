import pytest
from hypothesis import given, settings, strategies as st

from gordian.bing import build_link
from gordian.diagram import (
    Diagram,
    DiagramError,
    components,
    gauss_code,
    mirror,
    parse_pd,
    parse_site_set,
    relabel_arcs,
    serialize_pd,
    validate,
    writhe,
)
from gordian.moves import canonical_code

from conftest import HOPF_TEXT, TREFOIL_TEXT, TRIPOD, kinked_unknot, sample_diagrams


def test_parse_hopf(hopf_diagram):
    assert len(hopf_diagram.crossings) == 2
    assert hopf_diagram.labels == ["a", "b"]
    assert validate(hopf_diagram) == []


def test_parse_crossingless_unknot():
    D = parse_pd("O[1]; sites: a={1}")
    assert D.crossings == ()
    assert components(D) == [("a", (1,))]


def test_arc_used_once_is_rejected():
    with pytest.raises(DiagramError, match="arc-count"):
        parse_pd("X[1,2,3,4]")


def test_nonplanar_code_is_rejected():
    # every arc occurs twice, yet the rotation system is not planar
    with pytest.raises(DiagramError, match="planarity"):
        parse_pd("X[1,2,3,4] X[3,4,1,2] ; sites: a={1,3} b={2,4}")


def test_inconsistent_sites_rejected():
    with pytest.raises(DiagramError, match="site-consistency"):
        parse_pd("X[1,3,2,4] X[3,1,4,2] ; sites: a={1,3} b={2,4}")


def test_malformed_token():
    with pytest.raises(DiagramError):
        parse_pd("X[1,2,3] O[4]")


def test_validate_reports_site_change(hopf_diagram):
    D = Diagram.build(hopf_diagram.crossings, (), (), {1: "a", 2: "b", 3: "b", 4: "b"})
    kinds = {v.kind for v in validate(D)}
    assert "site-consistency" in kinds


def test_validate_reports_dangling_arc(hopf_diagram):
    D = Diagram.build(hopf_diagram.crossings[:1], (), (), {1: "a", 2: "a", 3: "b", 4: "b"})
    assert {v.kind for v in validate(D)} == {"arc-count"}


def test_components():
    assert [len(a) for _, a in components(parse_pd(HOPF_TEXT))] == [2, 2]
    three = parse_pd("O[1] O[2] O[3] ; sites: a={1} b={2} c={3}")
    assert [len(a) for _, a in components(three)] == [1, 1, 1]
    assert len(components(build_link(TRIPOD, "a-n").diagram)) == 3


def test_writhe_values(hopf_diagram):
    assert writhe(hopf_diagram, "a") == writhe(hopf_diagram, "b") == 0
    assert writhe(kinked_unknot(1), "a") == 1
    assert writhe(kinked_unknot(0, 3), "a") == -2
    assert writhe(parse_pd(TREFOIL_TEXT), "k") == 3
    with pytest.raises(DiagramError):
        writhe(hopf_diagram, "zz")


def test_gauss_code_lists_each_crossing_twice(hopf_diagram):
    code = gauss_code(hopf_diagram)
    assert code.startswith("a: ")
    body = code.split(" | signs")[0]
    assert sorted(body.replace("a:", "").replace("| b:", "").split()) == ["+1", "+2", "-1", "-2"]


def test_site_set_parsing():
    assert parse_site_set("a-b, b-a ,a-a") == {("a", "b"), ("a", "a")}
    assert parse_site_set("all", ["a", "b"]) == {("a", "a"), ("a", "b"), ("b", "b")}
    with pytest.raises(DiagramError):
        parse_site_set("a-b-c")


@pytest.mark.parametrize("name", sorted(sample_diagrams()))
def test_serialize_parse_roundtrip(name):
    D = sample_diagrams()[name]
    again = parse_pd(serialize_pd(D))
    assert canonical_code(again) == canonical_code(D)
    assert serialize_pd(again) == serialize_pd(D)


@pytest.mark.parametrize("name", sorted(sample_diagrams()))
def test_mirror_flips_every_sign(name):
    D = sample_diagrams()[name]
    M = mirror(D)
    assert [x.sign for x in M.crossings] == [-x.sign for x in D.crossings]
    assert validate(M) == []


@pytest.mark.parametrize("name", sorted(sample_diagrams()))
def test_component_labels_are_the_sites(name):
    D = sample_diagrams()[name]
    assert {lab for lab, _ in components(D)} == set(D.sites.values())


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from(sorted(sample_diagrams())))
def test_relabelling_keeps_canonical_code(rng, name):
    D = sample_diagrams()[name]
    arcs = D.arcs
    image = rng.sample(range(1, 10 * len(arcs) + 1), len(arcs))
    E = relabel_arcs(D, dict(zip(arcs, image)))
    assert canonical_code(E) == canonical_code(D)
