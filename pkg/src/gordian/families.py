"""Bundled diagram families and their checksummed manifest.

Every family is a link built from a uni-trivalent tree (or a small named
link), paired with a target that differs only on component ``e1``:

* ``f_n`` is the tree link of a caterpillar whose spine ``y1..yn`` carries
  ``e1`` at ``y1``, ``e2`` at ``yn`` and one leaf ``k_i`` per spine vertex,
  so ``d(e1, e2) = n + 1``. ``g_n`` replaces ``e1`` by a split circle.
* ``f_pq`` hangs ``e1`` off a vertex ``y`` with two branches, reaching
  ``e2`` after ``p + 1`` edges and ``e3`` after ``q + 1``.
* ``alpha_n`` is the caterpillar with spine ``y1..y(n-1)``, ``e2`` at
  ``y1``, a leaf ``x_j`` at each ``y_j`` and an end leaf ``z``; the ``x_j``
  are band-summed into one component ``e1``. ``beta_n`` splits ``e1`` off.
* ``example1`` pairs the Whitehead link ``f`` with the Hopf link ``g``;
  ``t`` is the trivial link.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .bing import build_link, hopf
from .diagram import Diagram, DiagramError, check, parse_pd, serialize_pd
from .distance import INF, formula_lemma_pq, formula_theorem1, formula_theorem2
from .moves import (
    MoveRecord,
    band_sum,
    delete_component,
    faces,
    _edge,
    linking_matrix,
    replay,
    reverse_component,
    split_union,
    unlink,
)
from .trees import UniTrivalentTree

__all__ = [
    "FamilyMember",
    "WHITEHEAD_PD",
    "EXAMPLE1_TABLE",
    "f_n",
    "f_pq",
    "alpha_n",
    "example1",
    "bundle",
    "write_bundle",
    "load_manifest",
    "load_member",
    "DATA_RANGES",
]

WHITEHEAD_PD = "X[6,1,7,2] X[10,7,5,8] X[4,5,1,6] X[2,10,3,9] X[8,4,9,3]"

# (pair, sites) -> expected value, for (f, t), (g, t) and (f, g)
EXAMPLE1_TABLE = {
    "u(f)": {"e1-e1": 1, "e2-e2": 1, "e1-e2": 2},
    "u(g)": {"e1-e1": INF, "e2-e2": INF, "e1-e2": 1},
    "d(f,g)": {"e1-e1": INF, "e2-e2": INF, "e1-e2": 1},
}

DATA_RANGES = {"f_n": range(1, 4), "alpha_n": range(2, 5), "f_pq": [(p, q) for p in (1, 2) for q in (1, 2, 3) if p <= q]}


@dataclass
class FamilyMember:
    name: str
    source: Diagram
    target: Diagram
    sites: list[tuple[str, str]]
    expected: float
    params: dict = field(default_factory=dict)
    tree: UniTrivalentTree | None = None
    certificates: dict = field(default_factory=dict)


def _split_off(D: Diagram, label: str) -> Diagram:
    return check(split_union(delete_component(D, label), unlink([label])))


def _caterpillar(n: int) -> UniTrivalentTree:
    if n == 1:
        return UniTrivalentTree.from_edges([("y1", "e1"), ("y1", "e2"), ("y1", "k1")])
    edges = [("y1", "e1"), (f"y{n}", "e2")]
    edges += [(f"y{i}", f"k{i}") for i in range(1, n + 1)]
    edges += [(f"y{i}", f"y{i + 1}") for i in range(1, n)]
    return UniTrivalentTree.from_edges(edges)


def f_n(n: int) -> FamilyMember:
    T = _caterpillar(n)
    D = build_link(T, ("y1", "e1")).diagram
    fv = formula_theorem1(n)
    return FamilyMember(f"f_{n}", D, _split_off(D, "e1"), [("e1", "e2")], fv.value, {"n": n}, T)


def _pq_tree(p: int, q: int) -> UniTrivalentTree:
    edges = [("y", "e1")]
    for tag, length, end in (("a", p, "e2"), ("b", q, "e3")):
        prev = "y"
        for i in range(1, length):
            v = f"{tag}{i}"
            edges += [(prev, v), (v, f"{tag}{i}x")]
            prev = v
        edges.append((prev, end))
    return UniTrivalentTree.from_edges(edges)


def f_pq(p: int, q: int) -> FamilyMember:
    T = _pq_tree(p, q)
    D = build_link(T, ("e1", "y")).diagram
    fv = formula_lemma_pq(p, q)
    return FamilyMember(f"f_{p}{q}", D, _split_off(D, "e1"), [("e1", "e2"), ("e1", "e3")], fv.value, {"p": p, "q": q}, T)


def _alpha_tree(n: int) -> UniTrivalentTree:
    m = n - 1
    edges = [("y1", "e2"), (f"y{m}", "z")]
    edges += [(f"y{j}", f"x{j}") for j in range(1, m + 1)]
    edges += [(f"y{j}", f"y{j + 1}") for j in range(1, m)]
    return UniTrivalentTree.from_edges(edges)


def _band_partner(D: Diagram, a_label: str, b_label: str) -> tuple[int, int] | None:
    """Arcs of the two components that run the same way along one face."""
    for face in faces(D):
        seen = {}
        for corner in face:
            arc, start, _ = _edge(D, corner)
            site = D.sites[arc]
            if site in (a_label, b_label) and D.head(arc) is not None:
                seen.setdefault(site, (arc, not D.node(*start[:2]).is_head(start[2])))
        if len(seen) == 2 and seen[a_label][1] == seen[b_label][1]:
            return seen[a_label][0], seen[b_label][0]
    return None


def _merge(D: Diagram, into: str, other: str) -> Diagram:
    for E in (D, reverse_component(D, other)):
        hit = _band_partner(E, into, other)
        if hit:
            return band_sum(E, hit[0], hit[1], into)
    raise DiagramError(f"no face shared by {into!r} and {other!r}")


def alpha_n(n: int) -> FamilyMember:
    if n < 2:
        raise ValueError("n must be at least 2")
    T = _alpha_tree(n)
    D = build_link(T, ("e2", "y1")).diagram
    D = check(_relabel_site(D, "x1", "e1"))
    for j in range(2, n):
        D = _merge(D, "e1", f"x{j}")
    fv = formula_theorem2(n)
    return FamilyMember(f"alpha_{n}", D, _split_off(D, "e1"), [("e1", "e2")], fv.value, {"n": n}, T)


def _relabel_site(D: Diagram, old: str, new: str) -> Diagram:
    return Diagram.build(D.crossings, D.vertices, D.circles, {a: (new if s == old else s) for a, s in D.sites.items()})


# isotopy to a drawing where one e1 self-change unknots the Whitehead link
_WH_E1_UNLINK = [
    MoveRecord("R1+", (8, 0)),
    MoveRecord("R2+", ("X", 3, 3, "X", 2, 3, True)),
    MoveRecord("CrossingChange", (6,), ("e1", "e1")),
]


def example1() -> dict[str, Diagram]:
    W = parse_pd(WHITEHEAD_PD)
    names = dict(zip(W.labels, ("e1", "e2")))
    f = Diagram.build(W.crossings, (), W.circles, {a: names[s] for a, s in W.sites.items()})
    return {"f": check(f), "g": hopf("e1", "e2"), "t": unlink(["e1", "e2"])}


def example1_certificates() -> dict[str, list[dict]]:
    return {"u(f):e1-e1": [m.to_dict() for m in _WH_E1_UNLINK]}


def bundle() -> list[FamilyMember]:
    out = [f_n(n) for n in DATA_RANGES["f_n"]]
    out += [alpha_n(n) for n in DATA_RANGES["alpha_n"]]
    out += [f_pq(p, q) for p, q in DATA_RANGES["f_pq"]]
    ex = example1()
    out.append(
        FamilyMember("example1", ex["f"], ex["g"], [("e1", "e2")], 1, {}, None, example1_certificates())
    )
    return out


def _target_name(name: str) -> str:
    head, _, rest = name.partition("_")
    return {"f": "g", "alpha": "beta"}.get(head, head) + ("_" + rest if rest else "")


def _lk_json(D: Diagram) -> dict:
    labels, M = linking_matrix(D)
    return {"labels": labels, "matrix": M}


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def write_bundle(out_dir: Path) -> dict:
    """Write every member's PD files and manifest.json into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for m in bundle():
        if m.name == "example1":
            files = {"source": "example1_f.pd", "target": "example1_g.pd"}
        else:
            files = {"source": f"{m.name}.pd", "target": f"{_target_name(m.name)}.pd"}
        record = {"name": m.name, "params": m.params, "sites": ["-".join(p) for p in m.sites], "expected": m.expected}
        for role, D in (("source", m.source), ("target", m.target)):
            text = serialize_pd(D) + "\n"
            (out_dir / files[role]).write_text(text)
            record[role] = {
                "file": files[role],
                "sha256": _sha(text),
                "crossings": len(D.crossings),
                "linking": _lk_json(D),
            }
        if m.tree is not None:
            record["tree"] = [list(e) for e in m.tree.edges]
        if m.certificates:
            record["certificates"] = m.certificates
        if m.name == "example1":
            record["table"] = {k: {p: ("inf" if v == INF else v) for p, v in row.items()} for k, row in EXAMPLE1_TABLE.items()}
        entries.append(record)
    manifest = {"format": 1, "members": entries}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return manifest


def _data_dir():
    return resources.files("gordian") / "data"


def load_manifest() -> dict:
    return json.loads((_data_dir() / "manifest.json").read_text())


def load_member(name: str, verify: bool = True) -> tuple[Diagram, Diagram, dict]:
    """Source diagram, target diagram and manifest record of a bundled member."""
    for rec in load_manifest()["members"]:
        if rec["name"] == name:
            break
    else:
        raise KeyError(f"no bundled member {name!r}")
    out = []
    for role in ("source", "target"):
        text = (_data_dir() / rec[role]["file"]).read_text()
        if verify and _sha(text) != rec[role]["sha256"]:
            raise DiagramError(f"checksum mismatch for {rec[role]['file']}")
        out.append(parse_pd(text))
    return out[0], out[1], rec


def replay_certificate(D: Diagram, moves: list[dict]) -> Diagram:
    return replay(D, [MoveRecord.from_dict(m) for m in moves])


if __name__ == "__main__":  # regenerate the bundled files
    write_bundle(Path(__file__).parent / "data")
