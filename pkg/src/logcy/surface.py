"""Combinatorial surface models: blow-up ledgers over the plane.

A MarkedSurface never forgets anything.  It keeps the full resolution
lattice (one coordinate per blown-up center) and marks the classes that are
contracted on the current model.  Pullback and pushforward between models
on the same ledger are then orthogonal projections.

Prime divisors are named by identifiers: a declared curve by its name, the
strict transform of the i-th exceptional curve by ``E<i>`` (1-based ledger
position).
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction

import networkx as nx

from . import linalg
from .lattice import DivisorClass, arithmetic_genus, canonical_class, intersect

EXCEPTIONAL_ID = re.compile(r"E(\d+)$")


class SurfaceError(ValueError):
    """An operation would produce an impossible or inconsistent model."""


class NotContractible(SurfaceError):
    pass


def exceptional_id(i: int) -> str:
    """Identifier of the exceptional curve at 0-based ledger position i."""
    return f"E{i + 1}"


def exceptional_index(ident: str) -> int | None:
    m = EXCEPTIONAL_ID.match(ident)
    return int(m.group(1)) - 1 if m else None


@dataclass(frozen=True)
class CenterSpec:
    name: str
    parent: str | None = None
    on_curves: frozenset = frozenset()
    satellite_of: frozenset = frozenset()

    def proximate_to(self) -> frozenset:
        """Centers whose exceptional curve passes through this one."""
        return self.satellite_of | ({self.parent} if self.parent else frozenset())


@dataclass(frozen=True)
class CurveRecord:
    name: str
    degree: int
    mults: tuple = ()           # (center, multiplicity) pairs
    nodes: frozenset = frozenset()
    in_boundary: Fraction = Fraction(0)

    @property
    def mult_map(self) -> dict:
        return dict(self.mults)

    @classmethod
    def make(cls, name: str, degree: int, mults: Mapping[str, int] | None = None,
             nodes: Iterable[str] = (), in_boundary=0) -> CurveRecord:
        return cls(name, degree, tuple(sorted((mults or {}).items())),
                   frozenset(nodes), Fraction(in_boundary))


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class MarkedSurface:
    ledger: tuple = ()
    curves: tuple = ()
    contracted: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # lookups

    @property
    def n(self) -> int:
        return len(self.ledger)

    def center_names(self) -> list[str]:
        return [c.name for c in self.ledger]

    def center_index(self, name: str) -> int:
        for i, c in enumerate(self.ledger):
            if c.name == name:
                return i
        raise KeyError(f"unknown center {name}")

    def has_center(self, name: str) -> bool:
        return any(c.name == name for c in self.ledger)

    def curve(self, name: str) -> CurveRecord:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(f"unknown curve {name}")

    def has_curve(self, name: str) -> bool:
        return any(c.name == name for c in self.curves)

    def divisor_ids(self) -> list[str]:
        """All tracked prime divisors on the resolution."""
        return [c.name for c in self.curves] + [exceptional_id(i) for i in range(self.n)]

    def has_divisor(self, ident: str) -> bool:
        i = exceptional_index(ident)
        if i is not None:
            return i < self.n
        return self.has_curve(ident)

    def surviving_ids(self) -> list[str]:
        gone = set(self.contracted)
        return [d for d in self.divisor_ids() if d not in gone]

    @property
    def rank(self) -> int:
        return 1 + self.n - len(self.contracted)

    # classes

    def multiplicity(self, curve: CurveRecord, center: CenterSpec) -> int:
        declared = curve.mult_map
        if center.name in declared:
            return declared[center.name]
        if center.name in curve.nodes:
            return 2
        return 1 if curve.name in center.on_curves else 0

    def proximate_centers(self, i: int) -> list[int]:
        name = self.ledger[i].name
        return [j for j in range(i + 1, self.n) if name in self.ledger[j].proximate_to()]

    def class_of(self, ident: str) -> DivisorClass:
        """Class of a prime divisor on the resolution."""
        key = ("class", ident)
        if key in self._cache:
            return self._cache[key]
        i = exceptional_index(ident)
        if i is not None:
            if i >= self.n:
                raise KeyError(f"unknown exceptional curve {ident}")
            m = [0] * self.n
            m[i] = -1
            for j in self.proximate_centers(i):
                m[j] = 1
            cls = DivisorClass(0, tuple(m))
        else:
            rec = self.curve(ident)
            cls = DivisorClass(rec.degree, tuple(self.multiplicity(rec, c) for c in self.ledger))
        self._cache[key] = cls
        return cls

    def canonical(self) -> DivisorClass:
        return canonical_class(self.n)

    def pair(self, a: str, b: str):
        return intersect(self.class_of(a), self.class_of(b))

    def gram(self, ids: Iterable[str]) -> list[list[int]]:
        ids = list(ids)
        classes = [self.class_of(i) for i in ids]
        return [[intersect(x, y) for y in classes] for x in classes]

    def unresolved_nodes(self, ident: str) -> int:
        if exceptional_index(ident) is not None:
            return 0
        rec = self.curve(ident)
        return sum(1 for p in rec.nodes if not self.has_center(p))

    def project(self, c: DivisorClass, contracted: Iterable[str] | None = None) -> DivisorClass:
        """c + sum x_s S_s orthogonal to every contracted S_s.

        This is the pullback of the pushforward of c through the contraction.
        """
        ids = list(self.contracted if contracted is None else contracted)
        if not ids:
            return c
        cls = [self.class_of(i) for i in ids]
        g = [[intersect(x, y) for y in cls] for x in cls]
        x = linalg.solve(g, [-intersect(c, s) for s in cls])
        out = c
        for xi, s in zip(x, cls):
            out = out + s * xi
        return out

    def plane_class(self) -> DivisorClass | None:
        """Pullback of the line class when the model is a plane, else None.

        The model is a plane when its rank is 1 and the orthogonal complement
        of the contracted classes is spanned by a class h with h^2 = 1.
        """
        if self.rank != 1:
            return None
        if not self.contracted:
            return DivisorClass.line(self.n)
        gram_rows = []
        for s in self.contracted:
            v = self.class_of(s)
            gram_rows.append([v.degree] + [-m for m in v.mults])
        gen = linalg.primitive_kernel_vector(gram_rows)
        if gen is None:
            return None
        h = DivisorClass.from_coords(gen)
        if intersect(h, h) != 1:
            return None
        k = intersect(h, self.canonical())
        if k == 3:
            h = -h
        elif k != -3:
            return None
        return h


def plane(curves: Iterable[CurveRecord] = ()) -> MarkedSurface:
    return MarkedSurface((), tuple(curves), ())


def add_curve(s: MarkedSurface, rec: CurveRecord) -> MarkedSurface:
    if s.has_curve(rec.name):
        raise SurfaceError(f"duplicate curve name {rec.name}")
    if exceptional_index(rec.name) is not None:
        raise SurfaceError(f"curve name {rec.name} clashes with exceptional identifiers")
    return replace(s, curves=s.curves + (rec,), _cache={})


def blow_up(s: MarkedSurface, c: CenterSpec) -> MarkedSurface:
    """Blow up a point of the current model."""
    if s.has_center(c.name):
        raise SurfaceError(f"center {c.name} is already blown up")
    for ref in c.proximate_to():
        if not s.has_center(ref):
            raise SurfaceError(f"center {c.name} lies over {ref}, which has not been blown up")
    for cv in c.on_curves:
        if not s.has_curve(cv):
            raise SurfaceError(f"center {c.name} lies on unknown curve {cv}")
    gone = set(s.contracted)
    for ref in c.proximate_to():
        e = exceptional_id(s.center_index(ref))
        if e in gone:
            raise SurfaceError(f"center {c.name} lies on {e}, which is contracted on this model")
    for cv in c.on_curves:
        if cv in gone:
            raise SurfaceError(f"center {c.name} lies on {cv}, which is contracted on this model")
    for rec in s.curves:
        if rec.name in gone and s.multiplicity(rec, c) > 0:
            raise SurfaceError(f"center {c.name} lies on {rec.name}, which is contracted on this model")
    return replace(s, ledger=s.ledger + (c,), _cache={})


def strict_transform_class(s: MarkedSurface, curve: str, projected: bool = False) -> DivisorClass:
    """Class of a declared curve; with projected=True, its pullback from the model."""
    if not s.has_curve(curve):
        raise KeyError(f"unknown curve {curve}")
    c = s.class_of(curve)
    return s.project(c) if projected else c


def contract(s: MarkedSurface, classes: Iterable[str]) -> MarkedSurface:
    classes = list(classes)
    for ident in classes:
        if not s.has_divisor(ident):
            raise SurfaceError(f"unknown class {ident}")
        if ident in s.contracted:
            raise SurfaceError(f"{ident} is already contracted")
    if len(set(classes)) != len(classes):
        raise SurfaceError("a class is listed twice")
    new = list(s.contracted) + classes
    if not linalg.is_negative_definite(s.gram(new)):
        raise NotContractible(f"not contractible: Gram matrix of {' '.join(classes)} "
                              f"together with the contracted set is not negative definite")
    if 1 + s.n - len(new) < 1:
        raise NotContractible("contraction would leave rank < 1")
    return replace(s, contracted=tuple(new), _cache=s._cache)


def extract(s: MarkedSurface, ident: str) -> MarkedSurface:
    """Undo the contraction of one class."""
    if ident not in s.contracted:
        raise SurfaceError(f"{ident} is not contracted on this model")
    return replace(s, contracted=tuple(x for x in s.contracted if x != ident), _cache=s._cache)


def with_contracted(s: MarkedSurface, contracted: Iterable[str]) -> MarkedSurface:
    return replace(s, contracted=tuple(contracted), _cache=s._cache)


def validate_configuration(s: MarkedSurface) -> ValidationReport:
    out: list[Violation] = []
    names = s.center_names()
    if len(set(names)) != len(names):
        out.append(Violation("duplicate", "ledger", "a center appears twice in the ledger"))
    for i, c in enumerate(s.ledger):
        for ref in sorted(c.proximate_to()):
            if ref not in names[:i]:
                out.append(Violation("proximity", c.name, f"{c.name} is proximate to {ref}, "
                                     "which is not an earlier center"))
        for ref in sorted(c.satellite_of):
            if ref not in _ancestors(s, c) - {c.parent}:
                out.append(Violation("proximity", c.name, f"{c.name} is declared proximate to "
                                     f"{ref} but does not lie over it"))
    for rec in s.curves:
        for p, m in rec.mults:
            if m < 0:
                out.append(Violation("multiplicity", rec.name, f"negative multiplicity at {p}"))
        if rec.in_boundary > 1 or rec.in_boundary < 0:
            out.append(Violation("boundary", rec.name,
                                 f"boundary coefficient {rec.in_boundary} outside [0,1]"))
        for i, c in enumerate(s.ledger):
            here = s.multiplicity(rec, c)
            above = sum(s.multiplicity(rec, s.ledger[j]) for j in s.proximate_centers(i))
            if here < above:
                out.append(Violation("proximity", rec.name,
                                     f"{rec.name} has multiplicity {here} at {c.name} but "
                                     f"{above} at centers proximate to it"))
        g = arithmetic_genus(s.class_of(rec.name))
        if g < 0:
            out.append(Violation("genus", rec.name, f"{rec.name} has arithmetic genus {g} < 0"))
        if s.unresolved_nodes(rec.name) > g:
            out.append(Violation("genus", rec.name,
                                 f"{rec.name} has more unresolved nodes than its genus allows"))
    ids = s.divisor_ids()
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            v = s.pair(ids[a], ids[b])
            if v < 0:
                out.append(Violation("intersection", f"{ids[a]}.{ids[b]}",
                                     f"distinct curves {ids[a]} and {ids[b]} meet negatively ({v})"))
    if not linalg.is_negative_definite(s.gram(s.contracted)):
        out.append(Violation("contraction", "contracted", "contracted set is not negative definite"))
    return ValidationReport(tuple(out))


def _ancestors(s: MarkedSurface, c: CenterSpec) -> set:
    seen, cur = set(), c
    while cur.parent is not None:
        seen.add(cur.parent)
        cur = s.ledger[s.center_index(cur.parent)]
    return seen


def dual_graph(s: MarkedSurface, selection: Iterable[str]) -> nx.MultiGraph:
    """Vertices are the selected divisors, edges count intersections on the resolution.

    A node of a curve at a point that has not been blown up is a loop.
    """
    sel = list(selection)
    g = nx.MultiGraph()
    for v in sel:
        g.add_node(v, square=s.pair(v, v), k=intersect(s.class_of(v), s.canonical()))
    for a in range(len(sel)):
        for b in range(a + 1, len(sel)):
            m = s.pair(sel[a], sel[b])
            if m < 0:
                raise SurfaceError(f"negative intersection between {sel[a]} and {sel[b]}")
            for _ in range(m):
                g.add_edge(sel[a], sel[b])
    for v in sel:
        for _ in range(s.unresolved_nodes(v)):
            g.add_edge(v, v)
    return g
