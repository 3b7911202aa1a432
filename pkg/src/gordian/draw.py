"""Straight-line SVG drawings of diagrams from their rotation system."""
from __future__ import annotations

import math

import networkx as nx

from .diagram import Diagram

__all__ = ["layout", "to_svg"]

_COLOURS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"]


def _rotation(D: Diagram) -> dict:
    """Neighbours in slot order; crossings and vertices keep theirs, every arc gets two bends."""
    nbrs: dict = {}
    for kind, nodes in (("X", D.crossings), ("V", D.vertices)):
        for i, node in enumerate(nodes):
            nbrs[(kind, i)] = [(a, "h" if node.is_head(s) else "t") for s, a in enumerate(node.arcs)]
    for a in D.arcs:
        if a in D.circles:
            continue
        t, h = D.tail(a), D.head(a)
        ends = {"t": (t.kind, t.node), "h": (h.kind, h.node)}
        nbrs[(a, "t")] = [ends["t"], (a, "h")]
        nbrs[(a, "h")] = [(a, "t"), ends["h"]]
    return nbrs


def _embedding(nbrs: dict) -> nx.PlanarEmbedding:
    E = nx.PlanarEmbedding()
    for v, ns in nbrs.items():
        E.add_node(v)
        prev = None
        for w in ns:
            if prev is None:
                E.add_half_edge(v, w)
            else:
                E.add_half_edge(v, w, ccw=prev)
            prev = w
    E.check_structure()
    return E


def layout(D: Diagram) -> dict:
    """Positions for crossings, vertices and arc bends, piece by piece in a row."""
    if not D.crossings and not D.vertices:
        return {}
    nbrs = _rotation(D)
    G = nx.Graph((v, w) for v, ns in nbrs.items() for w in ns)
    pos: dict = {}
    x0 = 0.0
    for piece in sorted(nx.connected_components(G), key=lambda c: min(map(str, c))):
        sub = _embedding({v: nbrs[v] for v in piece})
        p = nx.combinatorial_embedding_to_pos(sub)
        xs = [q[0] for q in p.values()]
        ys = [q[1] for q in p.values()]
        # the drawing must turn counterclockwise at crossings, else reflect it
        if _mirrored(D, sub, p):
            p = {v: (max(xs) - q[0], q[1]) for v, q in p.items()}
        for v, (x, y) in p.items():
            pos[v] = (x0 + x - min(xs), y - min(ys))
        x0 += max(xs) - min(xs) + 2
    return pos


def _mirrored(D: Diagram, E: nx.PlanarEmbedding, p: dict) -> bool:
    """True when the slots of a crossing appear clockwise in the drawing."""
    for v in E.nodes:
        if v[0] == "X":
            x = D.crossings[v[1]]
            cx, cy = p[v]
            angles = []
            for s, a in enumerate(x.arcs):
                qx, qy = p[(a, "h" if x.is_head(s) else "t")]
                angles.append(math.atan2(qy - cy, qx - cx))
            turn = sum((angles[(k + 1) % 4] - angles[k]) % (2 * math.pi) for k in range(4))
            return turn > 3 * math.pi
    return False


def to_svg(D: Diagram, scale: float = 40.0, gap: float = 0.3) -> str:
    """SVG text: components coloured by site, under strands broken at crossings."""
    pos = layout(D)
    colour = {s: _COLOURS[i % len(_COLOURS)] for i, s in enumerate(D.labels)}
    lines = []
    width = max((x for x, _ in pos.values()), default=0) + 2
    height = max((y for _, y in pos.values()), default=0) + 2

    def pt(v):
        x, y = pos[v]
        return (x + 1) * scale, (height - 1 - y) * scale

    def cut(p, q, frac):
        return p[0] + (q[0] - p[0]) * frac, p[1] + (q[1] - p[1]) * frac

    for a in D.arcs:
        if a in D.circles:
            continue
        t, h = D.tail(a), D.head(a)
        seq = [pt((t.kind, t.node)), pt((a, "t")), pt((a, "h")), pt((h.kind, h.node))]
        # an arc leaving or entering a crossing in an under slot stops short of it
        if t.kind == "X" and t.slot % 2 == 0:
            seq[0] = cut(seq[0], seq[1], gap)
        if h.kind == "X" and h.slot % 2 == 0:
            seq[3] = cut(seq[3], seq[2], gap)
        path = " ".join(f"{x:.1f},{y:.1f}" for x, y in seq)
        lines.append(f'<polyline points="{path}" fill="none" stroke="{colour[D.sites[a]]}" stroke-width="3"/>')
    for i, v in enumerate(D.vertices):
        x, y = pt(("V", i))
        lines.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="5" fill="black"/>')
    cx = (width + 1) * scale
    for a in D.circles:
        lines.append(f'<circle cx="{cx:.1f}" cy="{scale:.1f}" r="{scale * 0.6:.1f}" fill="none" stroke="{colour[D.sites[a]]}" stroke-width="3"/>')
        cx += 1.5 * scale
    total_w = cx + scale if D.circles else (width + 1) * scale
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.0f}" height="{(height + 1) * scale:.0f}">'
    return "\n".join([head, *lines, "</svg>"]) + "\n"

