"""Log pairs on marked surfaces: discrepancies and pair-level invariants."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from . import linalg
from .ade import NotADE, classify_ade, singular_points
from .lattice import intersect
from .surface import MarkedSurface, NotContractible, dual_graph


class PairError(ValueError):
    pass


@dataclass(frozen=True)
class LogPair:
    """A model together with boundary coefficients on its surviving divisors."""

    surface: MarkedSurface
    boundary: tuple = ()    # (identifier, Fraction) pairs, sorted, nonzero

    @classmethod
    def make(cls, surface: MarkedSurface, boundary: Mapping[str, object] | None = None) -> LogPair:
        items = {}
        for ident, c in (boundary or {}).items():
            c = Fraction(c)
            if not surface.has_divisor(ident):
                raise PairError(f"boundary names unknown divisor {ident}")
            if ident in surface.contracted:
                raise PairError(f"boundary component {ident} is contracted on this model")
            if c != 0:
                items[ident] = c
        return cls(surface, tuple(sorted(items.items())))

    @property
    def coefficients(self) -> dict:
        return dict(self.boundary)

    def coefficient(self, ident: str) -> Fraction:
        return self.coefficients.get(ident, Fraction(0))


@dataclass(frozen=True)
class DiscrepancyEntry:
    b: Fraction
    a: Fraction


@dataclass(frozen=True)
class DiscrepancyTable:
    entries: dict = field(default_factory=dict)   # identifier -> DiscrepancyEntry

    def b(self, ident: str) -> Fraction:
        return self.entries[ident].b

    def a(self, ident: str) -> Fraction:
        return self.entries[ident].a


def pullback_coefficients(p: LogPair, contracted: Iterable[str] | None = None) -> DiscrepancyTable:
    """Solve (K + B + sum b_j S_j).S_i = 0 for the contracted S_i."""
    s = p.surface
    ids = list(s.contracted if contracted is None else contracted)
    if not ids:
        return DiscrepancyTable({})
    gram = s.gram(ids)
    if not linalg.is_negative_definite(gram):
        raise NotContractible("Gram matrix of the contracted classes is not negative definite")
    k = s.canonical()
    rhs = []
    for i in ids:
        cls = s.class_of(i)
        v = Fraction(intersect(k, cls))
        for d, c in p.boundary:
            v += c * s.pair(d, i)
        rhs.append(-v)
    b = linalg.solve(gram, rhs)
    return DiscrepancyTable({i: DiscrepancyEntry(bi, 1 - bi) for i, bi in zip(ids, b)})


def y_vector(p: LogPair) -> dict:
    """Coefficient of every tracked divisor in the pullback of K + B (minus K)."""
    table = pullback_coefficients(p)
    out = {d: Fraction(0) for d in p.surface.divisor_ids()}
    out.update(p.coefficients)
    for ident, e in table.entries.items():
        out[ident] = e.b
    return out


def log_discrepancy(p: LogPair, e: str) -> Fraction:
    if not p.surface.has_divisor(e):
        raise PairError(f"unknown class {e}")
    if e in p.surface.contracted:
        return pullback_coefficients(p).a(e)
    return 1 - p.coefficient(e)


@dataclass(frozen=True)
class PairClass:
    lc: bool
    klt: bool
    canonical: bool     # every contracted divisor has a >= 1


def classify_pair(p: LogPair, contracted: Iterable[str] | None = None) -> PairClass:
    """Sign pattern of the log discrepancies over the tracked divisors."""
    s = p.surface
    ids = list(s.contracted if contracted is None else contracted)
    table = pullback_coefficients(p, ids)
    a_values = [table.a(i) for i in ids] + [1 - p.coefficient(d) for d in s.divisor_ids()
                                            if d not in ids]
    return PairClass(
        lc=all(a >= 0 for a in a_values),
        klt=all(a > 0 for a in a_values),
        canonical=all(table.a(i) >= 1 for i in ids),
    )


def complexity(p: LogPair) -> Fraction:
    return 2 + p.surface.rank - sum((c for _, c in p.boundary), Fraction(0))


def pair_class_vector(p: LogPair):
    """The class of K_Y + B_Y on the resolution (the pullback of K + B)."""
    s = p.surface
    total = s.canonical()
    for ident, c in y_vector(p).items():
        if c:
            total = total + s.class_of(ident) * c
    return total


def is_index_one_complement(p: LogPair) -> bool:
    if any(c != 1 for _, c in p.boundary):
        return False
    vec = y_vector(p)
    if any(c.denominator != 1 for c in vec.values()):
        return False
    return all(x == 0 for x in pair_class_vector(p))


def reduced_support(p: LogPair) -> list[str]:
    """Divisors of coefficient 1 on the resolution; fractional ones are refused."""
    out = []
    for ident, c in y_vector(p).items():
        if c == 1:
            out.append(ident)
        elif 0 < c < 1:
            raise PairError(f"non-reduced boundary: {ident} has coefficient {c}")
    return out


def boundary_graph(p: LogPair) -> nx.MultiGraph:
    return dual_graph(p.surface, reduced_support(p))


def coregularity_surface(p: LogPair) -> int:
    g = boundary_graph(p)
    if g.number_of_nodes() == 0:
        return 2
    return 0 if g.number_of_edges() > 0 else 1


def dual_complex_type(p: LogPair) -> str:
    """circle, interval, point, empty, disconnected, or other."""
    g = boundary_graph(p)
    n, e = g.number_of_nodes(), g.number_of_edges()
    if n == 0:
        return "empty"
    if not nx.is_connected(g):
        return "disconnected"
    if e == n and all(d == 2 for _, d in g.degree()):
        return "circle"
    if e == n - 1:
        if n == 1:
            return "point"
        if all(d <= 2 for _, d in g.degree()):
            return "interval"
    return "other"


def _feasibility_obstructed(g: nx.MultiGraph) -> bool:
    # Put every exceptional coefficient at 1; the strict boundary then has to
    # meet E_i in s_i = -(K + E_total).E_i points, which must be >= 0 and not all 0.
    nodes = list(g.nodes())
    s = []
    for v in nodes:
        row = -2 + sum(1 for _ in g.edges(v))
        k = g.nodes[v].get("k", 0)
        s.append(-(k + row))
    feasible = all(x >= 0 for x in s) and any(x > 0 for x in s)
    return not feasible


def local_one_complement_obstruction(g: nx.MultiGraph) -> bool:
    """True when the only 1-complement of the singularity is trivial (D and E types)."""
    if g.number_of_nodes() == 0 or not nx.is_connected(g):
        raise NotADE("expected a connected resolution graph")
    labels = classify_ade(g)
    fork = any(d >= 3 for _, d in nx.Graph(g).degree())
    if fork != _feasibility_obstructed(g):
        raise AssertionError("fork criterion and feasibility check disagree")
    if fork != (labels[0].kind != "A"):
        raise AssertionError("fork criterion disagrees with the Dynkin label")
    return fork


def boundary_through_singular_points(p: LogPair) -> list[str]:
    """Singular points of the model that meet a coefficient-1 divisor."""
    s = p.surface
    support = [d for d in reduced_support(p) if d not in s.contracted]
    hits = []
    for pt in singular_points(s):
        if pt.label is None:
            continue
        if any(s.pair(d, c) > 0 for d in support for c in pt.curves):
            hits.append("+".join(pt.curves))
    return hits
