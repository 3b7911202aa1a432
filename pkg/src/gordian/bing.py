"""Bing doubling of link components and the tree-driven link builder.

A component ``c`` is replaced by two children. The *hairpin* child is a
band following ``c``: its left copy runs forward, its right copy runs
back, and the two are joined by U-turns at a gap on one arc of ``c``. The
*small* child is a circle clasping both U-turns (four crossings). Every
crossing of ``c`` with another strand is doubled and every self-crossing of
``c`` becomes a 2x2 grid. When ``c`` has non-zero writhe, full-twist tiles
on the band restore the zero framing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .diagram import Crossing, Diagram, DiagramError, check, writhe
from .moves import _make_crossing
from .trees import TreeError, UniTrivalentTree, distance, growth_sequence, path, validate_tree

__all__ = ["BingResult", "TreeLink", "HOPF_PD", "hopf", "bing_double", "build_link", "designated_crossings"]

HOPF_PD = "X[1,3,2,4] X[3,1,4,2]"


def hopf(a: str = "a", b: str = "b") -> Diagram:
    """The positive two-crossing Hopf link with components a and b."""
    xs = (Crossing((1, 3, 2, 4), 3), Crossing((3, 1, 4, 2), 3))
    return check(Diagram.build(xs, (), (), {1: a, 2: a, 3: b, 4: b}))


@dataclass(frozen=True)
class BingResult:
    diagram: Diagram
    replaced: str
    children: tuple[str, str]
    tile_provenance: dict[int, str]
    # old crossing id -> new crossing ids it became
    crossing_map: dict[int, tuple[int, ...]] = field(default_factory=dict)
    # child label -> arc next to this clasp, where a later double of that child keeps tiles together
    gap_hint: dict[str, int] = field(default_factory=dict)


class _Ids:
    def __init__(self, start: int):
        self.next = start

    def __call__(self) -> int:
        self.next += 1
        return self.next


def _cable_crossing(x: Crossing, is_c: Sequence[bool], cab_at, fresh, mids: dict) -> list[Crossing]:
    """Replace one crossing by its cable: one line per plain strand, two per cabled.

    Picture: the under strand runs south to north, slot 1 is east. Left
    copies sit on the left of the travel direction. New arcs on plain
    strands are recorded in ``mids`` against the original arc.
    """
    u_c, o_c = is_c[0], is_c[1]
    west_flow = x.over_in == 1
    # vertical lines: (x offset, copy); copy None means the plain strand
    vlines = [(-1, 0), (1, 1)] if u_c else [(0, None)]
    if o_c:
        hlines = [(-1, 0), (1, 1)] if west_flow else [(1, 0), (-1, 1)]
        hlines.sort()
    else:
        hlines = [(0, None)]

    def copy_of(slot: int, copy):
        a = x.arcs[slot]
        return cab_at(a, x.is_head(slot))[copy] if copy is not None else a

    vseg = {}
    for xo, cp in vlines:
        inner = [fresh() for _ in hlines[1:]]
        if cp is None:
            mids.update(dict.fromkeys(inner, x.arcs[0]))
        segs = [copy_of(0, cp)] + inner + [copy_of(2, cp)]
        vseg[xo] = (segs, cp != 1)  # (segments south to north, flows north)
    hseg = {}
    for yo, cp in hlines:
        inner = [fresh() for _ in vlines[1:]]
        if cp is None:
            mids.update(dict.fromkeys(inner, x.arcs[1]))
        segs = [copy_of(3, cp)] + inner + [copy_of(1, cp)]
        hseg[yo] = (segs, west_flow != (cp == 1))  # (segments west to east, flows west)
    out = []
    for j, (yo, _) in enumerate(hlines):
        for i, (xo, _) in enumerate(vlines):
            vs, north = vseg[xo]
            hs, west = hseg[yo]
            out.append(
                _make_crossing(
                    [(vs[j], north, "V"), (hs[i + 1], west, "H"), (vs[j + 1], not north, "V"), (hs[i], not west, "H")],
                    "V",
                )
            )
    return out


def _twist_tile(La: int, Ra: int, Lm: int, Rm: int, Lb: int, Rb: int, sign: int) -> list[Crossing]:
    """A full twist of the band; L flows north, R flows south."""
    for under1, under2 in (("R", "L"), ("L", "R")):
        t1 = _make_crossing([(Ra, False, "R"), (Lm, False, "L"), (Rm, True, "R"), (La, True, "L")], under1)
        t2 = _make_crossing([(Lm, True, "L"), (Rb, True, "R"), (Lb, False, "L"), (Rm, False, "R")], under2)
        if t1.sign == sign:
            return [t1, t2]
    raise AssertionError("unreachable")


def _clasp_tile(L_bot, R_bot, L_top, R_top, u_mid, w_mid, k, flip: bool) -> list[Crossing]:
    k_left, k_bot, k_right, k_top = k
    # U-turns over at the outer crossings, small circle over at the inner ones
    a, b = ("K", "U") if not flip else ("U", "K")
    p1 = _make_crossing([(u_mid, False, "U"), (k_left, True, "K"), (L_bot, True, "U"), (k_bot, False, "K")], a)
    p2 = _make_crossing([(R_bot, False, "U"), (k_right, False, "K"), (u_mid, True, "U"), (k_bot, True, "K")], b)
    p3 = _make_crossing([(R_top, True, "U"), (k_top, False, "K"), (w_mid, False, "U"), (k_right, True, "K")], b)
    p4 = _make_crossing([(w_mid, True, "U"), (k_top, True, "K"), (L_top, False, "U"), (k_left, False, "K")], a)
    return [p1, p2, p3, p4]


def bing_double(
    D: Diagram,
    c: str,
    naming: tuple[str, str] | None = None,
    hairpin: int = 0,
    arc: int | None = None,
    flip: bool = False,
) -> BingResult:
    """Replace closed component ``c`` by its untwisted Bing double.

    ``naming`` gives the two child labels (default ``c/0``, ``c/1``);
    ``hairpin`` selects which of them follows ``c`` (the other is the small
    clasp circle). ``arc`` picks the arc of ``c`` carrying the clasp and
    ``flip`` mirrors the clasp.
    """
    strand = next((s for s in D.strands if s.label == c), None)
    if strand is None:
        raise DiagramError(f"{c!r} is not a component")
    if not strand.closed:
        raise DiagramError(f"{c!r} is a graph edge, not a closed component")
    names = tuple(naming) if naming else (f"{c}/0", f"{c}/1")
    if len(set(names)) != 2 or set(names) & (set(D.labels) - {c}):
        raise DiagramError(f"child names {names} clash with existing labels")
    big, small = names[hairpin], names[1 - hairpin]
    w = writhe(D, c)
    c_arcs = set(strand.arcs)
    gap = strand.arcs[0] if arc is None else arc
    if gap not in c_arcs:
        raise DiagramError(f"arc {gap} does not belong to {c!r}")

    fresh = _Ids(max(D.arcs))
    sites = {a: s for a, s in D.sites.items() if a not in c_arcs}
    copies = {a: (fresh(), fresh()) for a in c_arcs if a != gap}
    # the gap arc: head side copies lead to the upper U-turn, tail side to the lower one
    top = (fresh(), fresh())
    bottom0 = top if gap in D.circles else (fresh(), fresh())

    def cab_at(a: int, head: bool):
        if a != gap:
            return copies[a]
        return top if head else bottom0

    new_x: list[Crossing] = []
    prov: dict[int, str] = {}
    cmap: dict[int, tuple[int, ...]] = {}
    mids: dict[int, int] = {}
    for cid, x in enumerate(D.crossings):
        flags = [D.sites[x.arcs[0]] == c, D.sites[x.arcs[1]] == c]
        if not any(flags):
            cmap[cid] = (len(new_x),)
            prov[len(new_x)] = f"original:{cid}"
            new_x.append(x)
            continue
        made = _cable_crossing(x, flags, cab_at, fresh, mids)
        cmap[cid] = tuple(range(len(new_x), len(new_x) + len(made)))
        for i in cmap[cid]:
            prov[i] = f"cable:{cid}"
        new_x.extend(made)

    L, R = bottom0
    for _ in range(abs(w)):
        Lm, Rm, Lb, Rb = fresh(), fresh(), fresh(), fresh()
        for t in _twist_tile(L, R, Lm, Rm, Lb, Rb, 1 if w > 0 else -1):
            prov[len(new_x)] = "twist"
            new_x.append(t)
        L, R = Lb, Rb
    u_mid, w_mid = fresh(), fresh()
    k = tuple(fresh() for _ in range(4))
    for t in _clasp_tile(L, R, top[0], top[1], u_mid, w_mid, k, flip):
        prov[len(new_x)] = "clasp"
        new_x.append(t)

    sites.update({a: D.sites[o] for a, o in mids.items()})
    for x in new_x:
        for a in x.arcs:
            if a not in sites:
                sites[a] = small if a in k else big
    circles = [a for a in D.circles if a not in c_arcs]
    result = check(Diagram.build(new_x, D.vertices, circles, sites))
    return BingResult(result, c, names, prov, cmap, {big: top[0], small: k[0]})


@dataclass(frozen=True)
class TreeLink:
    diagram: Diagram
    leaf_map: dict[str, str]
    defining_edge: tuple[str, str]
    tree: UniTrivalentTree
    designated: tuple[int, ...] | None = None
    pair: tuple[str, str] | None = None

    def to_json(self) -> dict:
        from .diagram import serialize_pd

        return {
            "pd": serialize_pd(self.diagram, renumber=False),
            "leaf_map": dict(sorted(self.leaf_map.items())),
            "defining_edge": list(self.defining_edge),
            "designated": list(self.designated) if self.designated is not None else None,
            "pair": list(self.pair) if self.pair else None,
        }


def _build(T: UniTrivalentTree, e, on_path: set[str] | None, flip: bool = False):
    bad = validate_tree(T)
    if bad:
        raise TreeError("; ".join(map(str, bad)))
    seq = growth_sequence(T, e)
    u, v = seq.defining_edge
    D = hopf(u, v)
    tracked = {0} if on_path is not None else set()
    current = {u, v}
    hints: dict[str, int] = {}
    for step in seq.doubled:
        for p in step:
            kids = sorted(n for n in T.adjacency[p] if n not in current)
            hairpin = 0
            if on_path is not None and kids[1] in on_path:
                hairpin = 1
            res = bing_double(D, p, (kids[0], kids[1]), hairpin=hairpin, arc=hints.get(p), flip=flip)
            D = res.diagram
            hints.update(res.gap_hint)
            tracked = {n for cid in tracked for n in res.crossing_map[cid]}
            current |= set(kids)
    return D, seq.defining_edge, tuple(sorted(tracked))


def build_link(T: UniTrivalentTree, e, flip: bool = False) -> TreeLink:
    """The link of ``T`` grown from defining edge ``e``; components are named by leaves."""
    D, edge, _ = _build(T, e, None, flip)
    return TreeLink(D, {x: x for x in T.leaves}, edge, T)


def designated_crossings(T: UniTrivalentTree, v: str, w: str, e=None, flip: bool = False) -> TreeLink:
    """Build the link around an edge of the v-w path, tracking one Hopf crossing.

    Along the path the off-path child is always the small clasp circle, so
    the tracked crossing is cabled once per interior path vertex.
    """
    d = distance(T, v, w)
    p = path(T, v, w)
    if e is None:
        m = (len(p) - 1) // 2
        e = (p[m], p[m + 1])
    edge = T.edge(e)
    if not (edge[0] in p and edge[1] in p):
        raise TreeError(f"defining edge {edge} is not on the path from {v} to {w}")
    D, edge, tracked = _build(T, edge, set(p), flip)
    assert len(tracked) == 2 ** (d - 1)
    return TreeLink(D, {x: x for x in T.leaves}, edge, T, tracked, (v, w))
