"""Uni-trivalent trees: parsing, validation, path distance, growth and leaf surgery."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

__all__ = [
    "TreeError",
    "UniTrivalentTree",
    "GrowthSequence",
    "parse_tree",
    "format_tree",
    "validate_tree",
    "distance",
    "path",
    "growth_sequence",
    "reduce",
    "is_milnor_tree",
    "enumerate_trees",
]


class TreeError(ValueError):
    pass


class TreeViolation(NamedTuple):
    kind: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: {self.message}"


Edge = tuple[str, str]


def _edge(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class UniTrivalentTree:
    edges: tuple[Edge, ...]
    names: tuple[tuple[str, Edge], ...] = field(default=())

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], names: dict[str, Edge] | None = None) -> "UniTrivalentTree":
        es = tuple(sorted({_edge(u, v) for u, v in edges}))
        nm = tuple(sorted((k, _edge(*e)) for k, e in (names or {}).items()))
        return cls(es, nm)

    @cached_property
    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {}
        for u, v in self.edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        return {k: sorted(vs) for k, vs in adj.items()}

    @property
    def vertices(self) -> list[str]:
        return sorted(self.adjacency)

    @property
    def leaves(self) -> list[str]:
        return [v for v, n in sorted(self.adjacency.items()) if len(n) == 1]

    @property
    def trivalent(self) -> list[str]:
        return [v for v, n in sorted(self.adjacency.items()) if len(n) == 3]

    def degree(self, v: str) -> int:
        return len(self.adjacency.get(v, ()))

    def edge(self, spec) -> Edge:
        """Resolve an edge given as a name, "u-v" text or a pair."""
        if isinstance(spec, str):
            named = dict(self.names)
            if spec in named:
                return named[spec]
            if "-" in spec:
                spec = tuple(p.strip() for p in spec.split("-", 1))
        if isinstance(spec, (tuple, list)) and len(spec) == 2:
            e = _edge(*spec)
            if e in self.edges:
                return e
        raise TreeError(f"{spec!r} is not an edge of the tree")

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "edges": [list(e) for e in self.edges], "leaves": self.leaves}


_TREE = re.compile(r"^\s*tree\s*\{\s*edges\s*:(.*)\}\s*$", re.S)


def parse_tree(text: str) -> UniTrivalentTree:
    """Parse ``tree { edges: a-b, b-c, mid=b-d }``; ``#`` starts a comment."""
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    m = _TREE.match(text)
    if not m:
        raise TreeError("expected 'tree { edges: u-v, ... }'")
    edges, names = [], {}
    for item in m.group(1).split(","):
        item = item.strip()
        if not item:
            continue
        name = None
        if "=" in item:
            name, item = (s.strip() for s in item.split("=", 1))
        parts = [p.strip() for p in item.split("-")]
        if len(parts) != 2 or not all(parts):
            raise TreeError(f"malformed edge {item!r}")
        if parts[0] == parts[1]:
            raise TreeError(f"loop edge {item!r}")
        edges.append(tuple(parts))
        if name:
            if name in names:
                raise TreeError(f"duplicate edge name {name!r}")
            names[name] = tuple(parts)
    if not edges:
        raise TreeError("tree has no edges")
    return UniTrivalentTree.from_edges(edges, names)


def format_tree(T: UniTrivalentTree) -> str:
    rev = {e: k for k, e in T.names}
    items = [f"{rev[e]}={e[0]}-{e[1]}" if e in rev else f"{e[0]}-{e[1]}" for e in T.edges]
    return "tree { edges: " + ", ".join(items) + " }"


def validate_tree(T: UniTrivalentTree) -> list[TreeViolation]:
    out = []
    adj = T.adjacency
    if not adj:
        return [TreeViolation("empty", "tree", "no edges")]
    for v, ns in adj.items():
        if len(ns) not in (1, 3):
            out.append(TreeViolation("degree", v, f"degree {len(ns)} not in {{1, 3}}"))
    start = next(iter(adj))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(adj):
        out.append(TreeViolation("connectivity", ",".join(sorted(set(adj) - seen)), "unreachable vertices"))
    if len(T.edges) != len(adj) - 1:
        out.append(TreeViolation("acyclicity", "tree", f"{len(T.edges)} edges on {len(adj)} vertices"))
    return out


def _check(T: UniTrivalentTree) -> None:
    bad = validate_tree(T)
    if bad:
        raise TreeError("; ".join(map(str, bad)))


def path(T: UniTrivalentTree, v: str, w: str) -> list[str]:
    """Vertices of the unique path from v to w."""
    adj = T.adjacency
    if v not in adj or w not in adj:
        raise TreeError(f"unknown vertex {v if v not in adj else w!r}")
    prev = {v: None}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for x in adj[u]:
            if x not in prev:
                prev[x] = u
                queue.append(x)
    out = [w]
    while out[-1] != v:
        out.append(prev[out[-1]])
    return out[::-1]


def distance(T: UniTrivalentTree, v: str, w: str, leaves_only: bool = True) -> int:
    if v == w:
        raise TreeError("distance needs two distinct vertices")
    if leaves_only:
        for x in (v, w):
            if T.degree(x) != 1:
                raise TreeError(f"{x!r} is not a leaf")
    return len(path(T, v, w)) - 1


@dataclass(frozen=True)
class GrowthSequence:
    """Nested subtrees around a defining edge, with the leaves doubled at each step."""

    defining_edge: Edge
    stages: tuple[tuple[Edge, ...], ...]
    doubled: tuple[tuple[str, ...], ...]

    @property
    def n(self) -> int:
        return len(self.stages)


def growth_sequence(T: UniTrivalentTree, e) -> GrowthSequence:
    _check(T)
    e = T.edge(e)
    stage = {e}
    verts = set(e)
    stages, doubled = [tuple(sorted(stage))], []
    while len(stage) < len(T.edges):
        new = {_edge(u, x) for u in verts for x in T.adjacency[u]} - stage
        grow = sorted({u for u in verts for x in T.adjacency[u] if _edge(u, x) in new})
        stage |= new
        verts = {x for ed in stage for x in ed}
        stages.append(tuple(sorted(stage)))
        doubled.append(tuple(grow))
    assert stages[-1] == T.edges
    return GrowthSequence(e, tuple(stages), tuple(doubled))


def reduce(T: UniTrivalentTree, x: str) -> tuple[UniTrivalentTree, Edge]:
    """Delete leaf x and its trivalent neighbour y, joining y's other neighbours."""
    _check(T)
    if T.degree(x) != 1:
        raise TreeError(f"{x!r} is not a leaf")
    if len(T.edges) < 3:
        raise TreeError("a single edge cannot be reduced")
    (y,) = T.adjacency[x]
    s, t = (n for n in T.adjacency[y] if n != x)
    edges = [ed for ed in T.edges if y not in ed] + [(s, t)]
    names = {k: ed for k, ed in T.names if y not in ed}
    T2 = UniTrivalentTree.from_edges(edges, names)
    return T2, _edge(s, t)


def is_milnor_tree(T: UniTrivalentTree) -> bool:
    _check(T)
    return all(any(T.degree(n) == 1 for n in T.adjacency[v]) for v in T.trivalent)


def _shape_key(T: UniTrivalentTree) -> str:
    """Isomorphism key: minimum over roots of the nested-parentheses encoding."""
    adj = T.adjacency

    def enc(u, parent):
        return "(" + "".join(sorted(enc(x, u) for x in adj[u] if x != parent)) + ")"

    return min(enc(r, None) for r in adj)


def _relabel(edges: list[Edge]) -> UniTrivalentTree:
    T = UniTrivalentTree.from_edges(edges)
    leaves = T.leaves
    inner = T.trivalent
    names = {v: chr(ord("a") + i) for i, v in enumerate(leaves)}
    names.update({v: f"n{i + 1}" for i, v in enumerate(inner)})
    return UniTrivalentTree.from_edges([(names[u], names[v]) for u, v in edges])


def enumerate_trees(max_leaves: int) -> Iterator[UniTrivalentTree]:
    """Every uni-trivalent tree shape with 2..max_leaves leaves, once each.

    Leaves are labelled a, b, c, ... and trivalent vertices n1, n2, ...
    """
    level = [[("L0", "L1")]]
    k = 2
    while k <= max_leaves:
        for edges in level:
            yield _relabel(edges)
        k += 1
        seen, nxt = set(), []
        for edges in level:
            for i, (u, v) in enumerate(edges):
                m, leaf = f"M{k}", f"L{k}"
                cand = edges[:i] + edges[i + 1:] + [(u, m), (m, v), (m, leaf)]
                key = _shape_key(UniTrivalentTree.from_edges(cand))
                if key not in seen:
                    seen.add(key)
                    nxt.append(cand)
        level = nxt
