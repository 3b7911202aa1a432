"""Planar diagrams of links and spatial graphs with site labels.

A diagram is a combinatorial map. Every crossing lists its four arcs
counterclockwise, starting from the incoming under-arc, and records which of
slot 1 or slot 3 holds the incoming over-arc. Graph vertices list their arcs
counterclockwise together with an outgoing flag per arc. Crossingless closed
components are stored as bare circles.

Orientation is implicit at crossings: slot 0 is always the head of its arc,
slot 2 the tail, and of the over slots ``over_in`` is a head and the other a
tail.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

__all__ = [
    "Crossing",
    "GraphVertex",
    "Diagram",
    "DiagramError",
    "Violation",
    "End",
    "Strand",
    "parse_pd",
    "serialize_pd",
    "validate",
    "components",
    "writhe",
    "mirror",
    "gauss_code",
    "site_pair",
    "parse_site_set",
    "renumbered",
    "relabel_arcs",
    "check",
]


class DiagramError(ValueError):
    """Raised when a diagram cannot be built or fails validation."""

    def __init__(self, message: str, violations: "list[Violation] | None" = None):
        super().__init__(message)
        self.violations = violations or []


class Violation(NamedTuple):
    kind: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: {self.message}"


@dataclass(frozen=True)
class Crossing:
    arcs: tuple[int, int, int, int]
    over_in: int = 3

    def __post_init__(self):
        if len(self.arcs) != 4:
            raise DiagramError(f"crossing needs 4 arcs, got {self.arcs}")
        if self.over_in not in (1, 3):
            raise DiagramError("over_in must be slot 1 or 3")

    @property
    def under_in(self) -> int:
        return self.arcs[0]

    @property
    def under_out(self) -> int:
        return self.arcs[2]

    @property
    def over_in_arc(self) -> int:
        return self.arcs[self.over_in]

    @property
    def over_out_arc(self) -> int:
        return self.arcs[4 - self.over_in]

    @property
    def sign(self) -> int:
        # right-handed crossings are +1: over strand runs from slot 3 to slot 1
        return 1 if self.over_in == 3 else -1

    def is_head(self, slot: int) -> bool:
        return slot == 0 or slot == self.over_in

    def flipped(self) -> "Crossing":
        """The same crossing with over and under exchanged."""
        a, b, c, d = self.arcs
        if self.over_in == 3:
            return Crossing((d, a, b, c), over_in=1)
        return Crossing((b, c, d, a), over_in=3)

    def renamed(self, mapping: Mapping[int, int]) -> "Crossing":
        return Crossing(tuple(mapping[a] for a in self.arcs), self.over_in)


@dataclass(frozen=True)
class GraphVertex:
    arcs: tuple[int, ...]
    outgoing: tuple[bool, ...]

    def __post_init__(self):
        if len(self.arcs) != len(self.outgoing) or not self.arcs:
            raise DiagramError("vertex needs degree >= 1 and one direction per arc")

    def is_head(self, slot: int) -> bool:
        return not self.outgoing[slot]

    def renamed(self, mapping: Mapping[int, int]) -> "GraphVertex":
        return GraphVertex(tuple(mapping[a] for a in self.arcs), self.outgoing)


class End(NamedTuple):
    """One end of an arc: node kind ('X' or 'V'), node index, slot, head flag."""

    kind: str
    node: int
    slot: int
    head: bool


class Strand(NamedTuple):
    label: str
    arcs: tuple[int, ...]
    closed: bool


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...] = ()
    vertices: tuple[GraphVertex, ...] = ()
    circles: tuple[int, ...] = ()
    site_items: tuple[tuple[int, str], ...] = field(default=())

    @classmethod
    def build(cls, crossings=(), vertices=(), circles=(), sites: Mapping[int, str] | None = None) -> "Diagram":
        return cls(
            tuple(crossings),
            tuple(vertices),
            tuple(sorted(circles)),
            tuple(sorted((sites or {}).items())),
        )

    @cached_property
    def sites(self) -> dict[int, str]:
        return dict(self.site_items)

    @cached_property
    def ends(self) -> dict[int, list[End]]:
        out: dict[int, list[End]] = {}
        for i, x in enumerate(self.crossings):
            for s, a in enumerate(x.arcs):
                out.setdefault(a, []).append(End("X", i, s, x.is_head(s)))
        for i, v in enumerate(self.vertices):
            for s, a in enumerate(v.arcs):
                out.setdefault(a, []).append(End("V", i, s, v.is_head(s)))
        for a in self.circles:
            out.setdefault(a, [])
        return out

    @property
    def arcs(self) -> list[int]:
        return sorted(self.ends)

    def node(self, kind: str, index: int):
        return self.crossings[index] if kind == "X" else self.vertices[index]

    def head(self, arc: int) -> End | None:
        for e in self.ends[arc]:
            if e.head:
                return e
        return None

    def tail(self, arc: int) -> End | None:
        for e in self.ends[arc]:
            if not e.head:
                return e
        return None

    def other_end(self, kind: str, node: int, slot: int) -> End:
        arc = self.node(kind, node).arcs[slot]
        ends = self.ends[arc]
        if ends[0][:3] == (kind, node, slot):
            return ends[1]
        return ends[0]

    @cached_property
    def strands(self) -> list[Strand]:
        """Maximal strands: closed components and vertex-to-vertex edges."""
        seen: set[int] = set()
        out: list[Strand] = []

        def walk(start: int) -> tuple[list[int], bool]:
            path, arc = [start], start
            while True:
                h = self.head(arc)
                if h is None or h.kind == "V":
                    return path, False
                arc = self.crossings[h.node].arcs[(h.slot + 2) % 4]
                if arc == start:
                    return path, True
                path.append(arc)

        for a in self.arcs:
            t = self.tail(a)
            if a in seen or (t is not None and t.kind == "X"):
                continue
            if a in self.circles:
                path, closed = [a], True
            else:
                path, closed = walk(a)
            seen.update(path)
            out.append(Strand(self.sites.get(a, ""), tuple(path), closed))
        for a in self.arcs:
            if a in seen:
                continue
            path, closed = walk(a)
            seen.update(path)
            out.append(Strand(self.sites.get(a, ""), tuple(path), closed))
        return out

    @cached_property
    def strand_of(self) -> dict[int, int]:
        return {a: i for i, s in enumerate(self.strands) for a in s.arcs}

    @property
    def labels(self) -> list[str]:
        return sorted({s.label for s in self.strands})

    def label_of_crossing(self, cid: int) -> tuple[str, str]:
        """Sites of (under strand, over strand) at a crossing."""
        x = self.crossings[cid]
        return self.sites[x.arcs[0]], self.sites[x.arcs[1]]

    def abstract_graph(self) -> dict[str, tuple[int | None, int | None]]:
        """Abstract edges with their (tail vertex, head vertex); None for loops of L_mu."""
        out = {}
        for s in self.strands:
            if s.closed:
                out[s.label] = (None, None)
            else:
                t, h = self.tail(s.arcs[0]), self.head(s.arcs[-1])
                out[s.label] = (t.node if t else None, h.node if h else None)
        return out

    def is_link(self) -> bool:
        return not self.vertices

    def __len__(self) -> int:
        return len(self.crossings)

    def __str__(self) -> str:
        return serialize_pd(self, renumber=False)


def site_pair(x: str, y: str) -> tuple[str, str]:
    """Unordered pair [x, y] as a sorted tuple."""
    return (x, y) if x <= y else (y, x)


def parse_site_set(text: str, labels: Iterable[str] | None = None) -> frozenset[tuple[str, str]]:
    """Parse ``"a-b,a-a"``; the keyword ``all`` expands to every pair over ``labels``."""
    text = text.strip()
    if text == "all":
        if labels is None:
            raise DiagramError("site set 'all' needs the diagram's labels")
        ls = sorted(labels)
        return frozenset(site_pair(x, y) for i, x in enumerate(ls) for y in ls[i:])
    pairs = set()
    for tok in filter(None, (t.strip() for t in text.split(","))):
        parts = tok.split("-")
        if len(parts) != 2 or not all(parts):
            raise DiagramError(f"bad site pair {tok!r}; expected x-y")
        pairs.add(site_pair(*parts))
    return frozenset(pairs)


# -- validation -------------------------------------------------------------


def _faces(D: Diagram) -> list[list[tuple[str, int, int]]]:
    seen = set()
    faces = []
    for kind, nodes in (("X", D.crossings), ("V", D.vertices)):
        for n, node in enumerate(nodes):
            for s in range(len(node.arcs)):
                if (kind, n, s) in seen:
                    continue
                face = []
                cur = (kind, n, s)
                while cur not in seen:
                    seen.add(cur)
                    face.append(cur)
                    k, i, sl = cur
                    deg = len(D.node(k, i).arcs)
                    e = D.other_end(k, i, (sl + 1) % deg)
                    cur = (e.kind, e.node, e.slot)
                faces.append(face)
    return faces


def validate(D: Diagram) -> list[Violation]:
    """Return every violated invariant; an empty list means valid."""
    out: list[Violation] = []
    counts: dict[int, int] = {}
    for x in D.crossings:
        for a in x.arcs:
            counts[a] = counts.get(a, 0) + 1
    for v in D.vertices:
        for a in v.arcs:
            counts[a] = counts.get(a, 0) + 1
    for a in D.circles:
        counts[a] = counts.get(a, 0) + 2
    for a, c in sorted(counts.items()):
        if c != 2:
            out.append(Violation("arc-count", f"arc {a}", f"used {c} times"))
    if out:
        return out

    for a, ends in D.ends.items():
        if len(ends) == 2 and ends[0].head == ends[1].head:
            role = "heads" if ends[0].head else "tails"
            out.append(Violation("orientation", f"arc {a}", f"both ends are {role}"))
    if out:
        return out

    sites = D.sites
    missing = [a for a in D.arcs if a not in sites]
    if missing:
        out.append(Violation("site-consistency", f"arcs {missing}", "no site label"))
        return out
    for i, x in enumerate(D.crossings):
        a, b, c, d = x.arcs
        if sites[a] != sites[c]:
            out.append(Violation("site-consistency", f"crossing {i}", f"under strand changes site {sites[a]}->{sites[c]}"))
        if sites[b] != sites[d]:
            out.append(Violation("site-consistency", f"crossing {i}", f"over strand changes site {sites[b]}->{sites[d]}"))
    by_label: dict[str, int] = {}
    for s in D.strands:
        for a in s.arcs:
            if sites[a] != s.label:
                out.append(Violation("site-consistency", f"arc {a}", f"site {sites[a]} differs from strand site {s.label}"))
        by_label[s.label] = by_label.get(s.label, 0) + 1
    for lab, n in sorted(by_label.items()):
        if n != 1:
            out.append(Violation("site-partition", f"site {lab}", f"labels {n} strands"))

    # Euler characteristic per connected piece certifies a planar map
    parent = {}

    def find(u):
        while parent.setdefault(u, u) != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for a, ends in D.ends.items():
        if len(ends) == 2:
            parent[find((ends[0].kind, ends[0].node))] = find((ends[1].kind, ends[1].node))
    nodes = [("X", i) for i in range(len(D.crossings))] + [("V", i) for i in range(len(D.vertices))]
    pieces: dict = {}
    for nd in nodes:
        pieces.setdefault(find(nd), [0, 0, 0])[0] += 1
    for a, ends in D.ends.items():
        if ends:
            pieces[find((ends[0].kind, ends[0].node))][1] += 1
    for face in _faces(D):
        k, i, _ = face[0]
        pieces[find((k, i))][2] += 1
    for root, (nv, ne, nf) in pieces.items():
        if nv - ne + nf != 2:
            out.append(Violation("planarity", f"piece at {root}", f"V-E+F = {nv - ne + nf}"))
    return out


def check(D: Diagram) -> Diagram:
    bad = validate(D)
    if bad:
        raise DiagramError("; ".join(map(str, bad)), bad)
    return D


# -- queries ----------------------------------------------------------------


def components(D: Diagram) -> list[tuple[str, tuple[int, ...]]]:
    """Strands as (site, arcs in traversal order); closed ones start at their least arc."""
    out = []
    for s in D.strands:
        arcs = s.arcs
        if s.closed:
            k = arcs.index(min(arcs))
            arcs = arcs[k:] + arcs[:k]
        out.append((s.label, arcs))
    return sorted(out)


def _closed_label(D: Diagram, c: str) -> None:
    for s in D.strands:
        if s.label == c:
            if not s.closed:
                raise DiagramError(f"site {c!r} is a graph edge, not a closed component")
            return
    raise DiagramError(f"no component labelled {c!r}")


def writhe(D: Diagram, c: str) -> int:
    _closed_label(D, c)
    return sum(
        x.sign for x in D.crossings if D.sites[x.arcs[0]] == c and D.sites[x.arcs[1]] == c
    )


def mirror(D: Diagram) -> Diagram:
    return Diagram(tuple(x.flipped() for x in D.crossings), D.vertices, D.circles, D.site_items)


def gauss_code(D: Diagram) -> str:
    """Signed Gauss code per component, e.g. ``a: -1 +2 | b: +1 -2 | signs: + +``."""
    if not D.is_link():
        raise DiagramError("Gauss code export is for links only")
    passes: dict[int, list[tuple[int, bool]]] = {}
    for i, x in enumerate(D.crossings):
        passes.setdefault(x.arcs[0], []).append((i, False))
        passes.setdefault(x.arcs[x.over_in], []).append((i, True))
    parts = []
    for label, arcs in components(D):
        seq = []
        for a in arcs:
            for i, over in passes.get(a, []):
                seq.append(f"{'+' if over else '-'}{i + 1}")
        parts.append(f"{label}: {' '.join(seq)}".rstrip())
    signs = " ".join("+" if x.sign > 0 else "-" for x in D.crossings)
    parts.append(f"signs: {signs}".rstrip())
    return " | ".join(parts)


# -- text format ------------------------------------------------------------

_TERM = re.compile(r"([XVO])\[([^\]]*)\]")
_SITE = re.compile(r"([^\s={}]+)\s*=\s*\{([^}]*)\}")


def parse_pd(text: str) -> Diagram:
    """Parse extended PD text into a validated :class:`Diagram`.

    Site lists give arcs in traversal order. That order fixes the direction of
    strands that only ever pass over; for a two-arc such strand the first
    listed arc enters the first crossing it passes.
    """
    body, _, site_text = text.partition(";")
    site_text = site_text.strip()
    if site_text:
        if not site_text.startswith("sites:"):
            raise DiagramError(f"expected 'sites:' section, got {site_text[:20]!r}")
        site_text = site_text[len("sites:"):]

    raw_x: list[tuple[int, ...]] = []
    verts: list[GraphVertex] = []
    circles: list[int] = []
    pos = 0
    for m in _TERM.finditer(body):
        junk = body[pos:m.start()].strip()
        if junk:
            raise DiagramError(f"malformed token {junk!r}")
        pos = m.end()
        kind, inner = m.group(1), m.group(2)
        toks = [t.strip() for t in inner.split(",") if t.strip()]
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise DiagramError(f"malformed token {m.group(0)!r}") from None
        if kind == "X":
            if len(nums) != 4 or any(n < 0 for n in nums):
                raise DiagramError(f"malformed token {m.group(0)!r}")
            raw_x.append(tuple(nums))
        elif kind == "V":
            if not nums:
                raise DiagramError(f"malformed token {m.group(0)!r}")
            verts.append(GraphVertex(tuple(abs(n) for n in nums), tuple(not t.startswith("-") for t in toks)))
        else:
            if len(nums) != 1:
                raise DiagramError(f"malformed token {m.group(0)!r}")
            circles.append(nums[0])
    if body[pos:].strip():
        raise DiagramError(f"malformed token {body[pos:].strip()!r}")

    site_lists: dict[str, list[int]] = {}
    spos = 0
    for m in _SITE.finditer(site_text):
        if site_text[spos:m.start()].strip():
            raise DiagramError(f"malformed site entry {site_text[spos:m.start()].strip()!r}")
        spos = m.end()
        try:
            site_lists[m.group(1)] = [int(t) for t in m.group(2).replace(",", " ").split()]
        except ValueError:
            raise DiagramError(f"malformed site entry {m.group(0)!r}") from None
    if site_text[spos:].strip():
        raise DiagramError(f"malformed site entry {site_text[spos:].strip()!r}")

    counts: dict[int, int] = {}
    for t in raw_x:
        for a in t:
            counts[a] = counts.get(a, 0) + 1
    for v in verts:
        for a in v.arcs:
            counts[a] = counts.get(a, 0) + 1
    for a in circles:
        counts[a] = counts.get(a, 0) + 2
    bad = [Violation("arc-count", f"arc {a}", f"used {c} times") for a, c in sorted(counts.items()) if c != 2]
    if bad:
        raise DiagramError("; ".join(map(str, bad)), bad)

    over_in = _orient_over(raw_x, verts, site_lists)
    crossings = [Crossing(t, o) for t, o in zip(raw_x, over_in)]

    sites: dict[int, str] = {}
    for name, arcs in site_lists.items():
        for a in arcs:
            if a in sites:
                raise DiagramError(f"arc {a} listed under two sites")
            sites[a] = name
    D = Diagram.build(crossings, verts, circles, sites)
    if not site_lists:
        D = _autolabel(D)
    return check(D)


def _orient_over(raw_x, verts, site_lists) -> list[int]:
    ends: dict[int, list[tuple[str, int, int]]] = {}
    for i, t in enumerate(raw_x):
        for s, a in enumerate(t):
            ends.setdefault(a, []).append(("X", i, s))
    for i, v in enumerate(verts):
        for s, a in enumerate(v.arcs):
            ends.setdefault(a, []).append(("V", i, s))
    role: dict[tuple[str, int, int], bool] = {}  # True = head
    queue = []
    for i in range(len(raw_x)):
        queue += [(("X", i, 0), True), (("X", i, 2), False)]
    for i, v in enumerate(verts):
        for s in range(len(v.arcs)):
            queue.append((("V", i, s), not v.outgoing[s]))
    over_in: list[int | None] = [None] * len(raw_x)
    order = {name: arcs for name, arcs in site_lists.items()}

    def assign(key, head):
        if key in role:
            if role[key] != head:
                raise DiagramError(f"non-orientable strand through {key[0]}{key[1]} slot {key[2]}")
            return
        role[key] = head
        kind, n, s = key
        arc = (raw_x[n] if kind == "X" else verts[n].arcs)[s]
        for e in ends[arc]:
            if e != key:
                queue.append((e, not head))
        if kind == "X" and s in (1, 3):
            queue.append((("X", n, 4 - s), not head))
            over_in[n] = s if head else 4 - s

    def drain():
        while queue:
            assign(*queue.pop())

    drain()
    for i, t in enumerate(raw_x):
        if over_in[i] is not None:
            continue
        x, y = t[1], t[3]
        slot = 3
        lst = next((arcs for arcs in order.values() if x in arcs), None)
        if lst and y in lst:
            n = len(lst)
            y_after_x = lst[(lst.index(x) + 1) % n] == y
            x_after_y = lst[(lst.index(y) + 1) % n] == x
            if y_after_x and not x_after_y:
                slot = 1
            elif x_after_y and not y_after_x:
                slot = 3
            else:
                slot = 1 if lst.index(x) < lst.index(y) else 3
        elif y == x + 1:
            slot = 1
        queue.append((("X", i, slot), True))
        drain()
    return over_in  # type: ignore[return-value]


def _autolabel(D: Diagram) -> Diagram:
    sites = {}
    strands = sorted(D.strands, key=lambda s: min(s.arcs))
    for k, s in enumerate(strands, 1):
        for a in s.arcs:
            sites[a] = f"c{k}"
    return Diagram(D.crossings, D.vertices, D.circles, tuple(sorted(sites.items())))


def renumbered(D: Diagram) -> tuple[Diagram, dict[int, int]]:
    """Number arcs 1.. consecutively along strands, strands ordered by site."""
    mapping: dict[int, int] = {}
    nxt = 1
    for label, arcs in components(D):
        for a in arcs:
            mapping[a] = nxt
            nxt += 1
    return relabel_arcs(D, mapping), mapping


def relabel_arcs(D: Diagram, mapping: Mapping[int, int]) -> Diagram:
    return Diagram(
        tuple(x.renamed(mapping) for x in D.crossings),
        tuple(v.renamed(mapping) for v in D.vertices),
        tuple(sorted(mapping[a] for a in D.circles)),
        tuple(sorted((mapping[a], s) for a, s in D.site_items)),
    )


def serialize_pd(D: Diagram, renumber: bool = True) -> str:
    if renumber:
        D, _ = renumbered(D)
    terms = [f"X[{','.join(map(str, x.arcs))}]" for x in D.crossings]
    for v in D.vertices:
        terms.append("V[" + ",".join(f"{'+' if o else '-'}{a}" for a, o in zip(v.arcs, v.outgoing)) + "]")
    terms += [f"O[{a}]" for a in D.circles]
    site_parts = []
    for label, arcs in components(D):
        arcs = _listing_order(D, arcs)
        site_parts.append(f"{label}={{{','.join(map(str, arcs))}}}")
    return " ".join(terms) + " ; sites: " + " ".join(site_parts)


def _listing_order(D: Diagram, arcs: tuple[int, ...]) -> tuple[int, ...]:
    # rotate so the strand's first over passage (in crossing order) enters on arcs[0]
    aset = set(arcs)
    if any(x.arcs[0] in aset for x in D.crossings) or len(arcs) < 2:
        return arcs
    for x in D.crossings:
        a = x.over_in_arc
        if a in aset:
            k = arcs.index(a)
            return arcs[k:] + arcs[:k]
    return arcs
