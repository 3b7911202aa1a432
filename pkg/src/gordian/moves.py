"""Reidemeister moves, crossing changes, linking numbers and greedy simplification.

Moves are located through the face structure of the diagram. A face is listed
as its corners ``(kind, node, slot)``; the corner sits between ``slot`` and
``slot + 1`` and the face edge leaving it is the arc at ``slot + 1``. Faces
are traversed clockwise (the face lies to the right).
"""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .diagram import Crossing, Diagram, DiagramError, GraphVertex, _faces, check, site_pair

__all__ = [
    "MoveRecord",
    "faces",
    "linking_number",
    "linking_matrix",
    "crossing_change",
    "enumerate_site_crossings",
    "r1_candidates",
    "r2_candidates",
    "r3_candidates",
    "r1_remove",
    "r2_remove",
    "r3_move",
    "r1_add",
    "r2_add",
    "apply_move",
    "replay",
    "simplify",
    "simplify_greedy",
    "SimplifyResult",
    "canonical_code",
    "random_move",
    "reverse_component",
    "delete_component",
    "unlink",
    "split_union",
    "band_sum",
    "DEFAULT_SIMPLIFY_BUDGET",
]

DEFAULT_SIMPLIFY_BUDGET = 10_000

Corner = tuple  # (kind, node, slot)


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    location: tuple
    site_pair: tuple[str, str] | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "location": list(self.location),
            "site_pair": list(self.site_pair) if self.site_pair else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MoveRecord":
        sp = d.get("site_pair")
        return cls(d["kind"], tuple(d["location"]), tuple(sp) if sp else None)

    @classmethod
    def from_json(cls, line: str) -> "MoveRecord":
        return cls.from_dict(json.loads(line))


def faces(D: Diagram) -> list[list[Corner]]:
    return _faces(D)


# -- invariants -------------------------------------------------------------


def _closed_labels(D: Diagram) -> set[str]:
    return {s.label for s in D.strands if s.closed}


def linking_number(D: Diagram, a: str, b: str) -> int:
    if a == b:
        raise DiagramError("linking number needs two distinct components")
    closed = _closed_labels(D)
    for c in (a, b):
        if c not in closed:
            raise DiagramError(f"{c!r} is not a closed component")
    total = 0
    for x in D.crossings:
        if {D.sites[x.arcs[0]], D.sites[x.arcs[1]]} == {a, b}:
            total += x.sign
    if total % 2:
        raise DiagramError("odd signed count between components; diagram is not planar")
    return total // 2


def linking_matrix(D: Diagram) -> tuple[list[str], list[list[int]]]:
    labels = sorted(_closed_labels(D))
    m = [[0 if a == b else linking_number(D, a, b) for b in labels] for a in labels]
    return labels, m


def crossing_change(D: Diagram, cid: int) -> Diagram:
    if not 0 <= cid < len(D.crossings):
        raise DiagramError(f"unknown crossing {cid}")
    xs = list(D.crossings)
    xs[cid] = xs[cid].flipped()
    return Diagram(tuple(xs), D.vertices, D.circles, D.site_items)


def enumerate_site_crossings(D: Diagram, F: Iterable[tuple[str, str]]) -> list[int]:
    F = {site_pair(*p) for p in F}
    return [i for i, x in enumerate(D.crossings) if site_pair(D.sites[x.arcs[0]], D.sites[x.arcs[1]]) in F]


# -- rewriting helpers ------------------------------------------------------


def _smooth(D: Diagram, remove: set[int]) -> Diagram:
    """Delete crossings, joining each strand straight through them."""
    parent = {a: a for a in D.arcs}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for cid in remove:
        a, b, c, d = D.crossings[cid].arcs
        parent[find(a)] = find(c)
        parent[find(b)] = find(d)
    rep: dict[int, int] = {}
    for a in D.arcs:
        r = find(a)
        rep[r] = min(rep.get(r, a), a)
    rep = {a: rep[find(a)] for a in D.arcs}
    xs = tuple(x.renamed(rep) for i, x in enumerate(D.crossings) if i not in remove)
    vs = tuple(v.renamed(rep) for v in D.vertices)
    used = {a for x in xs for a in x.arcs} | {a for v in vs for a in v.arcs}
    circles = {rep[a] for a in D.arcs} - used
    sites = {rep[a]: s for a, s in D.site_items}
    return Diagram.build(xs, vs, circles, sites)


def _make_crossing(slots: Sequence[tuple[int, bool, str]], under: str) -> Crossing:
    """Crossing from CCW (arc, is_head, strand tag) entries and the under tag."""
    for p, (arc, head, tag) in enumerate(slots):
        if tag == under and head:
            break
    else:
        raise DiagramError("under strand has no incoming arc")
    rot = [slots[(p + k) % 4] for k in range(4)]
    if rot[2][2] != under or rot[2][1]:
        raise DiagramError("inconsistent under strand")
    over_in = 1 if rot[1][1] else 3
    if rot[4 - over_in][1]:
        raise DiagramError("inconsistent over strand")
    return Crossing(tuple(s[0] for s in rot), over_in)


def _fresh(D: Diagram, k: int) -> list[int]:
    top = max(D.arcs, default=0)
    return list(range(top + 1, top + 1 + k))


class _Patch:
    """Mutable copy of a diagram's nodes for slot-level surgery."""

    def __init__(self, D: Diagram):
        self.D = D
        self.xs = [list(x.arcs) for x in D.crossings]
        self.over = [x.over_in for x in D.crossings]
        self.vs = [list(v.arcs) for v in D.vertices]
        self.circles = set(D.circles)
        self.sites = dict(D.sites)
        self.extra: list[Crossing] = []

    def set(self, kind: str, node: int, slot: int, arc: int) -> None:
        (self.xs if kind == "X" else self.vs)[node][slot] = arc

    def done(self) -> Diagram:
        xs = [Crossing(tuple(a), o) for a, o in zip(self.xs, self.over)] + self.extra
        vs = [GraphVertex(tuple(a), v.outgoing) for a, v in zip(self.vs, self.D.vertices)]
        used = {a for x in xs for a in x.arcs} | {a for v in vs for a in v.arcs} | self.circles
        sites = {a: s for a, s in self.sites.items() if a in used}
        return Diagram.build(xs, vs, self.circles, sites)


def _edge(D: Diagram, corner: Corner) -> tuple[int, End_, End_]:
    kind, n, s = corner
    deg = len(D.node(kind, n).arcs)
    start = (kind, n, (s + 1) % deg)
    arc = D.node(kind, n).arcs[start[2]]
    e = D.other_end(*start)
    return arc, start, (e.kind, e.node, e.slot)


End_ = tuple


# -- reducing moves ---------------------------------------------------------


def r1_candidates(D: Diagram) -> list[int]:
    out = []
    for i, x in enumerate(D.crossings):
        a = x.arcs
        if any(a[s] == a[(s + 1) % 4] for s in range(4)):
            out.append(i)
    return out


def r1_remove(D: Diagram, cid: int) -> Diagram:
    a = D.crossings[cid].arcs
    if not any(a[s] == a[(s + 1) % 4] for s in range(4)):
        raise DiagramError(f"crossing {cid} is not a kink")
    return _smooth(D, {cid})


def _same_parity(D: Diagram, corner: Corner) -> bool:
    _, start, end = _edge(D, corner)
    return start[2] % 2 == end[2] % 2


def r2_candidates(D: Diagram) -> list[tuple[int, int, int, int]]:
    out = []
    for f in faces(D):
        if len(f) != 2 or f[0][0] != "X" or f[1][0] != "X" or f[0][1] == f[1][1]:
            continue
        if _same_parity(D, f[0]):
            (_, x, i), (_, y, j) = sorted(f, key=lambda c: c[1])
            out.append((x, i, y, j))
    return sorted(set(out))


def r2_remove(D: Diagram, loc: Sequence[int]) -> Diagram:
    x, i, y, j = loc
    if (x, i, y, j) not in r2_candidates(D):
        raise DiagramError(f"no reducible bigon at {tuple(loc)}")
    return _smooth(D, {x, y})


def r3_candidates(D: Diagram) -> list[tuple[int, ...]]:
    out = []
    for f in faces(D):
        if len(f) != 3 or any(c[0] != "X" for c in f) or len({c[1] for c in f}) != 3:
            continue
        if any(_same_parity(D, c) for c in f):
            k = min(range(3), key=lambda t: f[t][1])
            f = f[k:] + f[:k]
            out.append(tuple(v for c in f for v in c[1:]))
    return sorted(set(out))


def r3_move(D: Diagram, loc: Sequence[int]) -> Diagram:
    X, i, Y, j, Z, k = loc
    if tuple(loc) not in r3_candidates(D):
        raise DiagramError(f"no R3 triangle at {tuple(loc)}")
    cx, cy, cz = D.crossings[X], D.crossings[Y], D.crossings[Z]
    ax, ay, az = cx.arcs, cy.arcs, cz.arcs
    A_x, C_x = ax[(i + 3) % 4], ax[(i + 2) % 4]
    A_y, B_y = ay[(j + 2) % 4], ay[(j + 3) % 4]
    B_z, C_z = az[(k + 2) % 4], az[(k + 3) % 4]
    Ax_h = cx.is_head((i + 3) % 4)
    Cx_h = cx.is_head((i + 2) % 4)
    Ay_h = cy.is_head((j + 2) % 4)
    By_h = cy.is_head((j + 3) % 4)
    Bz_h = cz.is_head((k + 2) % 4)
    Cz_h = cz.is_head((k + 3) % 4)
    under_x = "A" if (i + 1) % 2 == 0 else "C"
    under_y = "A" if j % 2 == 0 else "B"
    under_z = "B" if k % 2 == 0 else "C"
    a_, b_, c_ = _fresh(D, 3)
    new_y = _make_crossing([(b_, not Bz_h, "B"), (A_x, Ax_h, "A"), (B_z, Bz_h, "B"), (a_, not Ax_h, "A")], under_y)
    new_x = _make_crossing([(c_, not Cz_h, "C"), (a_, Ax_h, "A"), (C_z, Cz_h, "C"), (A_y, Ay_h, "A")], under_x)
    new_z = _make_crossing([(B_y, By_h, "B"), (C_x, Cx_h, "C"), (b_, Bz_h, "B"), (c_, Cz_h, "C")], under_z)
    xs = list(D.crossings)
    xs[X], xs[Y], xs[Z] = new_x, new_y, new_z
    sites = dict(D.sites)
    old_a, old_b, old_c = ax[(i + 1) % 4], ay[(j + 1) % 4], az[(k + 1) % 4]
    sites[a_], sites[b_], sites[c_] = sites[old_a], sites[old_b], sites[old_c]
    for o in (old_a, old_b, old_c):
        del sites[o]
    return Diagram.build(xs, D.vertices, D.circles, sites)


# -- crossing-creating moves ------------------------------------------------

_KINKS = {
    # variant -> (slots as names, over_in)
    0: (("x", "l", "l", "x2"), 1),
    1: (("x", "x2", "l", "l"), 3),
    2: (("l", "l", "x2", "x"), 3),
    3: (("l", "x", "x2", "l"), 1),
}


def r1_add(D: Diagram, arc: int, variant: int = 0) -> Diagram:
    """Insert a kink on ``arc``; ``variant`` picks side and crossing sign."""
    if arc not in D.ends:
        raise DiagramError(f"unknown arc {arc}")
    P = _Patch(D)
    loop, x2 = _fresh(D, 2)
    if arc in D.circles:
        P.circles.discard(arc)
        x2 = arc
    else:
        h = D.head(arc)
        P.set(h.kind, h.node, h.slot, x2)
    names, over_in = _KINKS[variant]
    ids = {"x": arc, "l": loop, "x2": x2}
    P.extra.append(Crossing(tuple(ids[n] for n in names), over_in))
    P.sites[loop] = P.sites[x2] = D.sites[arc]
    return P.done()


def r2_candidates_add(D: Diagram, ordered: bool = True) -> list[tuple]:
    """Pairs of face corners whose leaving edges can be pushed across each other."""
    out = []
    for f in faces(D):
        for p in range(len(f)):
            for q in range(len(f) if ordered else p + 1):
                if p != q and _edge(D, f[p])[0] != _edge(D, f[q])[0]:
                    out.append(f[p] + f[q])
    return out


def r2_add(D: Diagram, loc: Sequence, e_over: bool = True) -> Diagram:
    """Push face edge ``e`` across face edge ``f`` creating two crossings.

    ``loc`` is the two face corners ``(kind, node, slot)`` whose leaving
    edges are ``e`` and ``f``.
    """
    ce, cf = tuple(loc[:3]), tuple(loc[3:6])
    e, e_start, e_end = _edge(D, ce)
    f, f_start, f_end = _edge(D, cf)
    if e == f:
        raise DiagramError("R2 needs two distinct arcs")
    if not any(ce in face and cf in face for face in faces(D)):
        raise DiagramError("edges do not share a face")
    e_fwd = not D.node(*e_start[:2]).is_head(e_start[2])
    f_fwd = not D.node(*f_start[:2]).is_head(f_start[2])
    e_mid, e2, f_mid, f2 = _fresh(D, 4)
    P = _Patch(D)
    P.set(*e_end, e2)
    P.set(*f_end, f2)
    under = "F" if e_over else "E"
    p = _make_crossing([(f_mid, f_fwd, "F"), (e, e_fwd, "E"), (f2, not f_fwd, "F"), (e_mid, not e_fwd, "E")], under)
    q = _make_crossing([(f, f_fwd, "F"), (e2, not e_fwd, "E"), (f_mid, not f_fwd, "F"), (e_mid, e_fwd, "E")], under)
    P.extra += [p, q]
    P.sites[e_mid] = P.sites[e2] = D.sites[e]
    P.sites[f_mid] = P.sites[f2] = D.sites[f]
    return P.done()


# -- replay -----------------------------------------------------------------


def apply_move(D: Diagram, rec: MoveRecord) -> Diagram:
    loc = rec.location
    if rec.kind == "CrossingChange":
        return crossing_change(D, loc[0])
    if rec.kind == "R1-":
        return r1_remove(D, loc[0])
    if rec.kind == "R2-":
        return r2_remove(D, loc)
    if rec.kind == "R3":
        return r3_move(D, loc)
    if rec.kind == "R1+":
        return r1_add(D, loc[0], loc[1])
    if rec.kind == "R2+":
        return r2_add(D, loc[:6], bool(loc[6]))
    raise DiagramError(f"unknown move kind {rec.kind!r}")


def replay(D: Diagram, log: Iterable[MoveRecord]) -> Diagram:
    for rec in log:
        D = apply_move(D, rec)
    return D


# -- simplification ---------------------------------------------------------


def _reducing_move(D: Diagram) -> MoveRecord | None:
    r1 = r1_candidates(D)
    if r1:
        return MoveRecord("R1-", (r1[0],))
    r2 = r2_candidates(D)
    if r2:
        return MoveRecord("R2-", r2[0])
    return None


def _r3_search(D: Diagram, budget: int) -> tuple[list[MoveRecord] | None, int]:
    """Breadth-first R3 exploration until some state admits a reducing move."""
    seen = {canonical_code(D)}
    queue = deque([(D, [])])
    spent = 0
    while queue and spent < budget:
        cur, path = queue.popleft()
        for loc in r3_candidates(cur):
            rec = MoveRecord("R3", loc)
            nxt = r3_move(cur, loc)
            spent += 1
            code = canonical_code(nxt)
            if code in seen:
                continue
            seen.add(code)
            if _reducing_move(nxt) is not None:
                return path + [rec], spent
            queue.append((nxt, path + [rec]))
            if spent >= budget:
                break
    return None, spent


def _detour_search(D: Diagram, budget: int, extra: int) -> tuple[list[MoveRecord] | None, int]:
    """Breadth-first search over all moves, R2+ included while at most ``extra``
    crossings above the start, until the crossing count drops."""
    n0 = len(D.crossings)
    seen = {canonical_code(D)}
    queue = deque([(D, [])])
    spent = 0
    while queue and spent < budget:
        cur, path = queue.popleft()
        recs = [MoveRecord("R1-", (c,)) for c in r1_candidates(cur)]
        recs += [MoveRecord("R2-", loc) for loc in r2_candidates(cur)]
        recs += [MoveRecord("R3", loc) for loc in r3_candidates(cur)]
        if len(cur.crossings) + 2 <= n0 + extra:
            for loc in r2_candidates_add(cur, ordered=False):
                recs += [MoveRecord("R2+", tuple(loc) + (o,)) for o in (True, False)]
        for rec in recs:
            nxt = apply_move(cur, rec)
            spent += 1
            code = canonical_code(nxt)
            if code in seen:
                continue
            seen.add(code)
            if len(nxt.crossings) < n0:
                return path + [rec], spent
            queue.append((nxt, path + [rec]))
            if spent >= budget:
                break
    return None, spent


class SimplifyResult(NamedTuple):
    diagram: Diagram
    moves: list
    exhausted: bool


def simplify(D: Diagram, budget: int = DEFAULT_SIMPLIFY_BUDGET, detour: int = 0) -> SimplifyResult:
    """Greedy simplification that also reports whether the search budget ran out.

    When no reduction applies, a breadth-first R3 search looks for one. With
    ``detour > 0`` a second search may also add crossings, up to ``detour``
    above the current count, if that leads to a net reduction. ``budget``
    caps the states examined by both searches over the whole run.
    """
    log: list[MoveRecord] = []
    spent = 0
    while True:
        rec = _reducing_move(D)
        if rec is not None:
            D = apply_move(D, rec)
            log.append(rec)
            continue
        if not D.crossings:
            return SimplifyResult(D, log, False)
        if spent >= budget:
            return SimplifyResult(D, log, True)
        path, used = _r3_search(D, budget - spent)
        spent += used
        if not path and detour > 0 and spent < budget:
            path, used = _detour_search(D, budget - spent, detour)
            spent += used
        if not path:
            return SimplifyResult(D, log, spent >= budget)
        for rec in path:
            D = apply_move(D, rec)
            log.append(rec)


def simplify_greedy(
    D: Diagram, budget: int = DEFAULT_SIMPLIFY_BUDGET, detour: int = 0
) -> tuple[Diagram, list[MoveRecord]]:
    """Apply R1/R2 reductions (lowest crossing first), using bounded search when stuck."""
    res = simplify(D, budget, detour)
    return res.diagram, res.moves


# -- canonical form ---------------------------------------------------------


def canonical_code(D: Diagram) -> str:
    """Text code equal for diagrams that differ only by arc renaming.

    Crossing order is forgotten as well. This is a dedup key, not a link
    invariant.
    """
    parent: dict = {}

    def find(u):
        while parent.setdefault(u, u) != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for a, ends in D.ends.items():
        if len(ends) == 2:
            parent[find(ends[0][:2])] = find(ends[1][:2])
    pieces: dict = {}
    for a, ends in D.ends.items():
        if ends:
            pieces.setdefault(find(ends[0][:2]), []).append(a)
    codes = [f"O:{D.sites[a]}" for a in D.circles]
    for arcs in pieces.values():
        codes.append(_piece_code(D, arcs))
    return "|".join(sorted(codes))


def _arc_signature(D: Diagram, a: int) -> tuple:
    out = [D.sites[a]]
    for e in (D.tail(a), D.head(a)):
        node = D.node(e.kind, e.node)
        out.append((e.kind, e.slot, node.over_in if e.kind == "X" else len(node.arcs)))
    return tuple(out)


def _piece_code(D: Diagram, arcs: list[int]) -> str:
    # only arcs with the least local signature can start the minimal numbering
    sigs = {a: _arc_signature(D, a) for a in arcs}
    low = min(sigs.values())
    starts = [a for a in arcs if sigs[a] == low]
    best = None
    for s in starts:
        code = _numbered_code(D, s)
        if best is None or code < best:
            best = code
    return best


def _numbered_code(D: Diagram, start: int) -> str:
    num = {start: 0}
    order = [start]
    k = 0
    while k < len(order):
        arc = order[k]
        k += 1
        for e in (D.tail(arc), D.head(arc)):
            node = D.node(e.kind, e.node)
            deg = len(node.arcs)
            for t in range(deg):
                b = node.arcs[(e.slot + t) % deg]
                if b not in num:
                    num[b] = len(order)
                    order.append(b)
    nodes = set()
    for arc in order:
        for e in D.ends[arc]:
            nodes.add(e[:2])
    desc = []
    for kind, n in nodes:
        node = D.node(kind, n)
        if kind == "X":
            desc.append(("X", tuple(num[a] for a in node.arcs), node.over_in))
        else:
            items = [(num[a], o) for a, o in zip(node.arcs, node.outgoing)]
            rots = [tuple(items[t:] + items[:t]) for t in range(len(items))]
            desc.append(("V", min(rots), 0))
    desc.sort()
    labels = ",".join(D.sites[a] for a in order)
    return repr(desc) + "/" + labels


# -- random moves for property tests ----------------------------------------


def random_move(D: Diagram, rng: random.Random, grow: float = 0.5) -> tuple[Diagram, MoveRecord]:
    """One uniformly chosen applicable Reidemeister move (never a crossing change)."""
    options: list[MoveRecord] = []
    if rng.random() < grow or not D.crossings:
        arcs = D.arcs
        if arcs:
            options.append(MoveRecord("R1+", (rng.choice(arcs), rng.randrange(4))))
        adds = r2_candidates_add(D)
        if adds:
            loc = rng.choice(adds)
            options.append(MoveRecord("R2+", tuple(loc) + (rng.random() < 0.5,)))
    else:
        options += [MoveRecord("R1-", (c,)) for c in r1_candidates(D)]
        options += [MoveRecord("R2-", loc) for loc in r2_candidates(D)]
        options += [MoveRecord("R3", loc) for loc in r3_candidates(D)]
        if not options:
            return random_move(D, rng, grow=1.0)
    rec = rng.choice(options)
    return apply_move(D, rec), rec


# -- component surgery ------------------------------------------------------


def reverse_component(D: Diagram, label: str) -> Diagram:
    """Reverse the orientation of closed component ``label``."""
    if label not in {s.label for s in D.strands if s.closed}:
        raise DiagramError(f"{label!r} is not a closed component")
    xs = []
    for x in D.crossings:
        arcs, over_in = x.arcs, x.over_in
        if D.sites[arcs[0]] == label:
            arcs = arcs[2:] + arcs[:2]
            over_in = 4 - over_in
        if D.sites[arcs[1]] == label:
            over_in = 4 - over_in
        xs.append(Crossing(arcs, over_in))
    return Diagram(tuple(xs), D.vertices, D.circles, D.site_items)


def delete_component(D: Diagram, label: str) -> Diagram:
    """Remove closed component ``label``; the strands it crossed run straight through."""
    if label not in {s.label for s in D.strands if s.closed}:
        raise DiagramError(f"{label!r} is not a closed component")
    keep = [i for i, x in enumerate(D.crossings) if label not in (D.sites[x.arcs[0]], D.sites[x.arcs[1]])]
    mixed = {i for i, x in enumerate(D.crossings) if i not in keep and D.sites[x.arcs[0]] != D.sites[x.arcs[1]]}
    # smooth mixed crossings, then drop the component's own crossings and arcs
    E = _smooth(D, mixed)
    own = {a for a, s in E.sites.items() if s == label}
    xs = [x for x in E.crossings if not own & set(x.arcs)]
    circles = [a for a in E.circles if a not in own]
    sites = {a: s for a, s in E.sites.items() if a not in own}
    return Diagram.build(xs, E.vertices, circles, sites)


def unlink(labels: Iterable[str]) -> Diagram:
    """The crossingless trivial link with one circle per label."""
    labels = list(labels)
    return Diagram.build((), (), range(1, len(labels) + 1), {i + 1: s for i, s in enumerate(labels)})


def split_union(D: Diagram, E: Diagram) -> Diagram:
    """Disjoint union, E drawn beside D; E's arcs are shifted past D's."""
    off = max(D.arcs, default=0)
    m = {a: a + off for a in E.arcs}
    if set(D.labels) & set(E.labels):
        raise DiagramError("split union needs disjoint site labels")
    sites = dict(D.sites)
    sites.update({m[a]: s for a, s in E.sites.items()})
    return Diagram.build(
        D.crossings + tuple(x.renamed(m) for x in E.crossings),
        D.vertices + tuple(v.renamed(m) for v in E.vertices),
        D.circles + tuple(m[a] for a in E.circles),
        sites,
    )


def band_sum(D: Diagram, a: int, b: int, label: str | None = None) -> Diagram:
    """Join the components through arcs ``a`` and ``b`` by a band inside a shared face.

    Both arcs must bound one face and run the same way around it, so the
    result is oriented. The merged component takes ``label`` (default: the
    site of ``a``).
    """
    for face in faces(D):
        hits = {}
        for corner in face:
            arc, start, end = _edge(D, corner)
            if arc in (a, b) and arc not in hits:
                hits[arc] = not D.node(*start[:2]).is_head(start[2])
        if len(hits) == 2 and hits[a] == hits[b]:
            break
    else:
        raise DiagramError(f"arcs {a} and {b} do not run the same way around a common face")
    sa, sb = D.sites[a], D.sites[b]
    if sa == sb:
        raise DiagramError("band sum needs two different components")
    ha, hb = D.head(a), D.head(b)
    if ha is None or hb is None:
        raise DiagramError("band sum on a crossingless circle is not supported")
    P = _Patch(D)
    P.set(ha.kind, ha.node, ha.slot, b)
    P.set(hb.kind, hb.node, hb.slot, a)
    new = label or sa
    P.sites = {x: (new if s in (sa, sb) else s) for x, s in P.sites.items()}
    return check(P.done())
