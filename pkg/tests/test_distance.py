import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from gordian.bing import build_link, hopf
from gordian.distance import (
    INF,
    RecurrenceCert,
    Step,
    bfs_upper,
    budgets,
    distance_report,
    formula_lemma_pq,
    formula_milnor,
    formula_theorem1,
    formula_theorem2,
    lk_obstruction,
    verify_designated,
)
from gordian.diagram import DiagramError
from gordian.moves import canonical_code, replay, reverse_component, simplify_greedy, unlink
from gordian.trees import distance, enumerate_trees, path, reduce

from conftest import EDGE, HTREE, TRIPOD

TREES = list(enumerate_trees(7))


def test_doubling_formula_values():
    assert [formula_theorem1(n).value for n in (1, 2, 3)] == [2, 4, 8]
    with pytest.raises(ValueError):
        formula_theorem1(0)


def test_geometric_sum_formula_values():
    assert [formula_theorem2(n).value for n in (2, 3, 4)] == [2, 6, 14]
    assert formula_theorem2(4).cert.params["sum"] == "2+4+8"
    with pytest.raises(ValueError):
        formula_theorem2(1)


def test_lemma_pq_values():
    assert formula_lemma_pq(1, 5).value == 2
    assert formula_lemma_pq(2, 2).value == 4
    assert formula_lemma_pq(3, 3).value == 8
    for p, q in [(3, 2), (0, 1)]:
        with pytest.raises(ValueError):
            formula_lemma_pq(p, q)


def test_milnor_values():
    assert formula_milnor(EDGE, "a", "b").value == 1
    assert formula_milnor(TRIPOD, "a", "b").value == 2
    assert formula_milnor(HTREE, "a", "d").value == 4


def test_certificates_recompute_and_catch_tampering():
    cert = formula_theorem2(5).cert
    assert cert.check() and cert.to_json()["checked"]
    bad = dataclasses.replace(cert, value=cert.value + 1)
    assert not bad.check()
    steps = list(cert.trace)
    steps[1] = steps[1]._replace(value=steps[1].value + 2)
    assert not dataclasses.replace(cert, trace=tuple(steps)).check()
    assert not RecurrenceCert("x", {}, (Step("double", 0, 2, ""),), 2).check()


@pytest.mark.parametrize("n", range(2, 16))
def test_induction_identities(n):
    assert formula_theorem1(n).value == 2 * formula_theorem1(n - 1).value
    if n >= 3:
        assert formula_theorem2(n).value == formula_theorem2(n - 1).value + formula_lemma_pq(n - 1, n - 1).value


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([T for T in TREES if len(T.leaves) >= 3]), st.data())
def test_milnor_recurrence_under_reduce(T, data):
    v, w = data.draw(st.lists(st.sampled_from(T.leaves), min_size=2, max_size=2, unique=True))
    x = data.draw(st.sampled_from([l for l in T.leaves if l not in (v, w)]))
    (y,) = T.adjacency[x]
    T2, _ = reduce(T, x)
    factor = 2 if y in path(T, v, w) else 1
    assert formula_milnor(T, v, w).value == factor * formula_milnor(T2, v, w).value
    assert formula_milnor(T, v, w).value == 2 ** (distance(T, v, w) - 1)


def test_obstruction_examples():
    H, U = hopf(), unlink(["a", "b"])
    (o,) = lk_obstruction(H, U, [("a", "b")])
    assert o.implied == "bound" and o.lower == 1 and o.parity == 1
    (o,) = lk_obstruction(H, U, [("a", "a"), ("b", "b")])
    assert o.implied == "infinity" and o.lower == INF
    D = build_link(TRIPOD, "a-n").diagram
    obs = lk_obstruction(D, unlink(D.labels), [("a", "b")])
    ab = [o for o in obs if o.pair == ("a", "b")]
    assert ab[0].parity == 0 and ab[0].lower == 0
    with pytest.raises(DiagramError):
        lk_obstruction(H, unlink(["a", "c"]), [("a", "b")])


def test_bfs_examples():
    H, U = hopf(), unlink(["a", "b"])
    assert bfs_upper(H, U, [("a", "b")], 2).upper == 1
    assert bfs_upper(H, H, [("a", "a")], 0).upper == 0
    D = build_link(TRIPOD, "a-n").diagram
    res = bfs_upper(D, unlink(D.labels), [("a", "b")], 3)
    assert res.upper == 2


def test_bfs_budget_exhaustion_is_not_a_bound():
    D = build_link(HTREE, "mid").diagram
    res = bfs_upper(D, unlink(D.labels), [("a", "b")], 6, state_budget=2)
    assert res.upper is None and res.exhausted


def _goal_codes(tgt):
    codes = set()
    S, _ = simplify_greedy(tgt)
    for flips in range(2 ** len(S.labels)):
        E = S
        for i, lab in enumerate(S.labels):
            if flips >> i & 1:
                E = reverse_component(E, lab)
        codes.add(canonical_code(E))
    return codes


@pytest.mark.parametrize(
    "tree,edge,pair",
    [(EDGE, "e1", ("a", "b")), (TRIPOD, "a-n", ("a", "b")), (TRIPOD, "a-n", ("b", "c")), (HTREE, "mid", ("a", "b"))],
)
def test_bfs_sequences_replay_and_respect_lower_bounds(tree, edge, pair):
    D = build_link(tree, edge).diagram
    U = unlink(D.labels)
    res = bfs_upper(D, U, [pair], 4)
    assert res.upper is not None
    end, _ = simplify_greedy(replay(D, res.moves))
    assert canonical_code(end) in _goal_codes(U)
    changes = [m for m in res.moves if m.kind == "CrossingChange"]
    assert len(changes) == res.upper
    assert all(m.site_pair == tuple(sorted(pair)) for m in changes)
    lower = sum(o.lower for o in lk_obstruction(D, U, [pair]))
    assert res.upper >= lower
    assert res.upper == formula_milnor(tree, *pair).value


@pytest.mark.parametrize("tree,pair,flips", [(EDGE, ("a", "b"), 1), (TRIPOD, ("a", "b"), 2), (HTREE, ("a", "d"), 4)])
def test_verify_examples(tree, pair, flips):
    r = verify_designated(tree, *pair)
    assert r.status == "true" and r.flips == flips
    assert r.to_json()["flips"] == flips


def test_verify_budget_gives_indeterminate(monkeypatch):
    import gordian.distance as dist
    from gordian.moves import SimplifyResult

    # flipped diagrams of small trees reduce by R1/R2 alone, so stub a stuck simplifier
    monkeypatch.setattr(dist, "simplify", lambda D, budget: SimplifyResult(D, [], True))
    assert verify_designated(HTREE, "a", "d").status == "indeterminate"
    monkeypatch.setattr(dist, "simplify", lambda D, budget: SimplifyResult(D, [], False))
    assert verify_designated(HTREE, "a", "d").status == "false"


def test_report_examples():
    H, U = hopf(), unlink(["a", "b"])
    r = distance_report(H, U, [("a", "b")])
    assert r.exact and r.lower == r.upper == 1
    assert r.to_json()["exact"] is True
    r = distance_report(H, U, [("a", "a")])
    assert r.lower == INF and r.to_json()["lower"] == "inf"
    D = build_link(TRIPOD, "a-n").diagram
    r = distance_report(D, unlink(D.labels), [("a", "b")], 3, family={"kind": "milnor", "tree": TRIPOD, "pair": ("a", "b")})
    assert r.upper == 2 and r.lower == 2 and r.lower_certified == 0
    kinds = [c["type"] for c in r.certificates]
    assert "published_bound" in kinds and "recurrence" in kinds


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([T for T in TREES if 3 <= len(T.leaves) <= 5]), st.data())
def test_obstruction_parity_matches_formula(T, data):
    v, w = data.draw(st.lists(st.sampled_from(T.leaves), min_size=2, max_size=2, unique=True))
    D = build_link(T, T.edges[0]).diagram
    for o in lk_obstruction(D, unlink(D.labels), [(v, w)]):
        assert o.delta_lk == 0
    assert formula_milnor(T, v, w).value % 2 == 0


def test_budget_override(monkeypatch):
    monkeypatch.setenv("GORDIAN_BUDGET", "77")
    assert budgets()["states"] == 77 and budgets()["simplify"] == 77
    monkeypatch.setenv("GORDIAN_BUDGET", "lots")
    with pytest.raises(ValueError):
        budgets()
