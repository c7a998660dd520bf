"""ADE labels for configurations of (-2)-curves."""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass

import networkx as nx

from .lattice import intersect
from .surface import MarkedSurface, SurfaceError


class NotADE(ValueError):
    """The configuration is not negative definite, or is not of ADE type."""


_KIND_ORDER = {"E": 0, "D": 1, "A": 2}


@dataclass(frozen=True)
class SingularityLabel:
    kind: str
    rank: int

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown Dynkin type {self.kind}")
        ok = {"A": self.rank >= 1, "D": self.rank >= 4, "E": self.rank in (6, 7, 8)}[self.kind]
        if not ok:
            raise ValueError(f"no Dynkin diagram {self.kind}{self.rank}")

    def sort_key(self):
        return (_KIND_ORDER[self.kind], -self.rank)

    def __str__(self) -> str:
        return f"{self.kind}{self.rank}"


def sort_labels(labels: Iterable[SingularityLabel]) -> list[SingularityLabel]:
    return sorted(labels, key=SingularityLabel.sort_key)


def format_labels(labels: Iterable[SingularityLabel]) -> str:
    """`D4+3A1` style; the empty configuration prints as `none`."""
    counts = Counter(sort_labels(labels))
    if not counts:
        return "none"
    parts = []
    for lab in sort_labels(counts):
        k = counts[lab]
        parts.append(f"{k}{lab}" if k > 1 else str(lab))
    return "+".join(parts)


_TERM = re.compile(r"(\d*)([ADE])(\d+)$")


def parse_labels(text: str) -> list[SingularityLabel]:
    text = text.strip()
    if text == "none":
        return []
    out = []
    for term in text.split("+"):
        m = _TERM.match(term.strip())
        if not m:
            raise ValueError(f"bad singularity label {term!r}")
        k = int(m.group(1)) if m.group(1) else 1
        if k < 1:
            raise ValueError(f"bad multiplicity in {term!r}")
        out.extend([SingularityLabel(m.group(2), int(m.group(3)))] * k)
    return sort_labels(out)


def _component_label(g: nx.MultiGraph) -> SingularityLabel:
    n = g.number_of_nodes()
    simple = nx.Graph(g)
    if any(u == v for u, v in g.edges()):
        raise NotADE("loop on a (-2)-curve")
    if simple.number_of_edges() != g.number_of_edges():
        raise NotADE("two (-2)-curves meet with multiplicity > 1")
    if simple.number_of_edges() != n - 1:
        raise NotADE("configuration contains a cycle")
    degrees = dict(simple.degree())
    forks = [v for v, d in degrees.items() if d >= 3]
    if any(d >= 4 for d in degrees.values()):
        raise NotADE("a (-2)-curve meets four or more others")
    if not forks:
        return SingularityLabel("A", n)
    if len(forks) > 1:
        raise NotADE("configuration has two branch points")
    fork = forks[0]
    arms = []
    for nb in simple.neighbors(fork):
        length, prev, cur = 1, fork, nb
        while True:
            nxt = [w for w in simple.neighbors(cur) if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return SingularityLabel("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return SingularityLabel("E", n)
    raise NotADE(f"branch arms {tuple(arms)} give no Dynkin diagram")


def classify_ade(g: nx.MultiGraph) -> list[SingularityLabel]:
    """One label per connected component, sorted E > D > A then by rank."""
    for v, data in g.nodes(data=True):
        if "square" in data and (data["square"] != -2 or data.get("k", 0) != 0):
            raise NotADE(f"{v} is not a (-2)-curve")
    labels = [_component_label(g.subgraph(c).copy()) for c in nx.connected_components(g)]
    return sort_labels(labels)


@dataclass(frozen=True)
class SingularPoint:
    """A point of the model with the contracted curves over it."""

    curves: tuple
    label: SingularityLabel | None   # None for a smooth point


def _reduce_minus_one(ids, gram, kdot):
    ids, gram, kdot = list(ids), [row[:] for row in gram], list(kdot)
    while True:
        hit = next((i for i in range(len(ids)) if gram[i][i] == -1 and kdot[i] == -1), None)
        if hit is None:
            return ids, gram, kdot
        col = [gram[j][hit] for j in range(len(ids))]
        for j in range(len(ids)):
            kdot[j] -= col[j]
            for m in range(len(ids)):
                gram[j][m] += col[j] * col[m]
        keep = [j for j in range(len(ids)) if j != hit]
        ids = [ids[j] for j in keep]
        gram = [[gram[j][m] for m in keep] for j in keep]
        kdot = [kdot[j] for j in keep]


def singular_points(s: MarkedSurface) -> list[SingularPoint]:
    """Group the contracted set into points and label each one.

    (-1)-curves are blown down one at a time; whatever remains over a point
    must be an ADE configuration of (-2)-curves.
    """
    if not s.contracted:
        return []
    full = nx.Graph()
    full.add_nodes_from(s.contracted)
    for a in s.contracted:
        for b in s.contracted:
            if a < b and s.pair(a, b) != 0:
                full.add_edge(a, b)
    k = s.canonical()
    out = []
    for comp in sorted(nx.connected_components(full), key=lambda c: sorted(c)):
        ids = [x for x in s.contracted if x in comp]
        gram = s.gram(ids)
        kdot = [intersect(s.class_of(i), k) for i in ids]
        rest, g2, k2 = _reduce_minus_one(ids, gram, kdot)
        if not rest:
            out.append(SingularPoint(tuple(ids), None))
            continue
        g = nx.MultiGraph()
        for i, v in enumerate(rest):
            if g2[i][i] != -2 or k2[i] != 0:
                raise NotADE(f"contracted curves {' '.join(ids)} give a non-canonical singularity")
            g.add_node(v, square=g2[i][i], k=k2[i])
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                if g2[i][j] < 0:
                    raise SurfaceError("negative intersection after blowing down")
                for _ in range(g2[i][j]):
                    g.add_edge(rest[i], rest[j])
        labels = classify_ade(g)
        if len(labels) != 1:
            raise NotADE(f"contracted curves {' '.join(ids)} do not contract to a single point")
        out.append(SingularPoint(tuple(ids), labels[0]))
    return out


def singularity_labels(s: MarkedSurface) -> list[SingularityLabel]:
    return sort_labels(p.label for p in singular_points(s) if p.label is not None)


def is_a_type_only(s: MarkedSurface) -> bool:
    return all(lab.kind == "A" for lab in singularity_labels(s))


def dynkin_graph(kind: str, rank: int) -> nx.Graph:
    """Template diagram, used for oracle checks and demos."""
    SingularityLabel(kind, rank)
    g = nx.path_graph(rank)
    if kind == "D":
        g = nx.path_graph(rank - 1)
        g.add_edge(rank - 3, rank - 1)
    elif kind == "E":
        g = nx.path_graph(rank - 1)
        g.add_edge(2, rank - 1)
    return g
