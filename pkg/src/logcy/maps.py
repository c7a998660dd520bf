"""Birational maps between log pairs on a common resolution.

A model on a ledger is the set of contracted classes.  Two models on the
same ledger give a birational map; its exceptional divisors are the
divisors that survive on the source and are contracted on the target.

Steps act on a running model:

* ``BlowUp(point)`` blows up a fresh declared point, or, when the point is
  already in the ledger or names a contracted curve, brings that curve back.
* ``Contract(ids)`` contracts a list of classes.
* ``Cremona(a, b, c)`` blows up three points of a plane model and contracts
  the three lines through pairs of them.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, replace
from itertools import combinations

from .lattice import DivisorClass, intersect
from .pairs import LogPair, complexity, is_index_one_complement, y_vector
from .surface import (
    CenterSpec,
    CurveRecord,
    MarkedSurface,
    add_curve,
    blow_up,
    contract,
    exceptional_id,
    exceptional_index,
    extract,
)


class MapError(ValueError):
    pass


@dataclass(frozen=True)
class BlowUp:
    point: str


@dataclass(frozen=True)
class Contract:
    classes: tuple


@dataclass(frozen=True)
class Cremona:
    centers: tuple


MapStep = BlowUp | Contract | Cremona


@dataclass
class StepContext:
    """What a step needs beyond the running model: point declarations and aliases."""

    points: Mapping[str, CenterSpec]
    aliases: dict

    def resolve(self, ident: str) -> str:
        return self.aliases.get(ident, ident)


def exceptional_of(s: MarkedSurface, point: str) -> str:
    return exceptional_id(s.center_index(point))


def _realize(s: MarkedSurface, token: str, ctx: StepContext) -> tuple[MarkedSurface, str]:
    """Make the point named by token a curve on the model; return its divisor."""
    ident = ctx.resolve(token)
    if s.has_center(ident):
        e = exceptional_of(s, ident)
        return extract(s, e), e
    if s.has_divisor(ident):
        if ident not in s.contracted:
            raise MapError(f"{token} is a curve of the current model, not a point")
        return extract(s, ident), ident
    if ident in ctx.points:
        spec = ctx.points[ident]
        spec = replace(spec, on_curves=frozenset(ctx.resolve(c) for c in spec.on_curves))
        s = blow_up(s, spec)
        return s, exceptional_of(s, ident)
    raise MapError(f"unknown point {token}")


def _pullback_of_point(s: MarkedSurface, divisor: str) -> DivisorClass:
    e = s.project(s.class_of(divisor))
    if intersect(e, e) != -1 or intersect(e, s.canonical()) != -1:
        raise MapError(f"{divisor} is not a (-1)-curve on the model where it is brought back")
    return e


def apply_blowup(s: MarkedSurface, token: str, ctx: StepContext) -> MarkedSurface:
    s2, div = _realize(s, token, ctx)
    _pullback_of_point(s2, div)
    return s2


def apply_cremona(s: MarkedSurface, centers: Iterable[str], ctx: StepContext) -> MarkedSurface:
    """Standard quadratic transformation of a plane model.

    Auto-lines: the line through two centers is an existing surviving divisor
    whose pullback has the class of such a line, or else a fresh curve
    ``L_a_b``.  Either way ``L_a_b`` becomes an alias for it.
    """
    centers = tuple(centers)
    if len(centers) != 3 or len(set(centers)) != 3:
        raise MapError("cremona needs three distinct centers")
    h = s.plane_class()
    if h is None:
        raise MapError("cremona needs a plane model")
    divs = []
    for tok in centers:
        for other in divs:
            if ctx.resolve(tok) == other[1]:
                raise MapError(f"cremona center {tok} repeats another center")
        s, d = _realize(s, tok, ctx)
        divs.append((tok, d))
    n = s.n
    h = h.padded(n)
    points = [_pullback_of_point(s, d).padded(n) for _, d in divs]
    for i in range(3):
        for j in range(i + 1, 3):
            if intersect(points[i], points[j]) != 0:
                raise MapError(f"cremona centers {centers[i]} and {centers[j]} are infinitely near")
    # Proper points only: each must be a (-1)-curve meeting no other surviving
    # (-1)-curve over the plane.  Collinearity: a surviving line through all three.
    for d in s.surviving_ids():
        c = s.project(s.class_of(d))
        if intersect(c, h) == 1 and all(intersect(c, p) >= 1 for p in points) \
                and d not in [x for _, x in divs]:
            raise MapError(f"cremona centers {' '.join(centers)} lie on the line {d}")
    lines = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        target = h - points[i] - points[j]
        name = f"L_{centers[i]}_{centers[j]}"
        found = [d for d in s.surviving_ids()
                 if d not in (divs[i][1], divs[j][1]) and s.project(s.class_of(d)) == target]
        if len(found) > 1:
            raise MapError(f"ambiguous line through {centers[i]} and {centers[j]}")
        if found:
            ident = found[0]
        else:
            if target.degree < 1 or any(m < 0 for m in target.mults) or not target.is_integral:
                raise MapError(f"line through {centers[i]} and {centers[j]} has class {target}, "
                               "which is not a plane curve class")
            ident = name
            while s.has_curve(ident) or ident in ctx.aliases:
                ident += "'"
            mults = {s.ledger[k].name: m for k, m in enumerate(target.mults) if m}
            s = add_curve(s, CurveRecord.make(ident, target.degree, mults))
        for alias in (name, f"L_{centers[j]}_{centers[i]}"):
            if alias != ident:
                if s.has_curve(alias):
                    raise MapError(f"alias {alias} clashes with a declared curve")
                ctx.aliases[alias] = ident
        lines.append(ident)
    s = contract(s, lines)
    expected = h * 2 - points[0] - points[1] - points[2]
    if s.plane_class() != expected:
        raise MapError("cremona did not produce a plane model")
    return s


def apply_step(s: MarkedSurface, step: MapStep, ctx: StepContext) -> MarkedSurface:
    if isinstance(step, BlowUp):
        return apply_blowup(s, step.point, ctx)
    if isinstance(step, Contract):
        return contract(s, [ctx.resolve(c) for c in step.classes])
    if isinstance(step, Cremona):
        return apply_cremona(s, step.centers, ctx)
    raise TypeError(f"unknown step {step!r}")


# models on a common ledger

def lift(model: MarkedSurface, resolution: MarkedSurface) -> MarkedSurface:
    """View a model built on an earlier ledger on a later resolution.

    Centers blown up after the model was taken are contracted on it.
    """
    if resolution.ledger[:model.n] != model.ledger:
        raise MapError("model does not sit on this resolution")
    fresh = tuple(exceptional_id(i) for i in range(model.n, resolution.n))
    return replace(resolution, contracted=model.contracted + fresh, _cache=resolution._cache)


def lift_pair(p: LogPair, resolution: MarkedSurface) -> LogPair:
    return LogPair(lift(p.surface, resolution), p.boundary)


def pushforward(reference: LogPair, model: MarkedSurface) -> LogPair:
    """The crepant boundary on another model of the same resolution."""
    vec = y_vector(reference)
    return LogPair.make(model, {d: vec[d] for d in model.surviving_ids() if vec[d] != 0})


@dataclass(frozen=True)
class BirationalMap:
    source: LogPair
    target: LogPair
    steps: tuple = ()
    name: str = "map"

    @property
    def resolution(self) -> MarkedSurface:
        return self.target.surface


def compose(source: LogPair, steps: Iterable[MapStep], points: Mapping[str, CenterSpec] | None = None,
            target_boundary: Mapping[str, object] | None = None, name: str = "map") -> BirationalMap:
    """Run steps from the source; the target boundary defaults to the crepant one."""
    steps = tuple(steps)
    ctx = StepContext(dict(points or {}), {})
    s = source.surface
    for st in steps:
        s = apply_step(s, st, ctx)
    src = lift_pair(LogPair(replace(source.surface, curves=s.curves, _cache={}), source.boundary), s)
    if target_boundary is None:
        tgt = pushforward(src, s)
    else:
        tgt = LogPair.make(s, {ctx.resolve(k): v for k, v in target_boundary.items()})
        _check_support(src, tgt)
    return BirationalMap(src, tgt, steps, name)


def _check_support(src: LogPair, tgt: LogPair) -> None:
    pushed = pushforward(src, tgt.surface)
    bad = {d for d, c in pushed.boundary if c > 0} ^ {d for d, c in tgt.boundary if c > 0}
    if bad:
        raise MapError(f"target boundary support differs from the pushed-forward source "
                       f"boundary at {' '.join(sorted(bad))}")


def between(source: LogPair, target: LogPair, name: str = "map") -> BirationalMap:
    """The map between two models that already share a resolution."""
    if source.surface.ledger != target.surface.ledger or source.surface.curves != target.surface.curves:
        raise MapError("models must live on the same resolution")
    return BirationalMap(source, target, (), name)


def exceptional_divisor_classes(m: BirationalMap) -> frozenset:
    src, tgt = set(m.source.surface.contracted), set(m.target.surface.contracted)
    return frozenset(d for d in m.source.surface.divisor_ids() if d not in src and d in tgt)


def is_standard_pair(p: LogPair) -> bool:
    return is_index_one_complement(p) and complexity(p) == 0


def torus_exceptional_degree(m: BirationalMap) -> int:
    """Total plane degree of the exceptional divisors off the source boundary."""
    src = m.source
    if not is_standard_pair(src):
        raise MapError("source is not a standard pair (index one, complexity zero)")
    interior = sorted(d for d in exceptional_divisor_classes(m) if src.coefficient(d) == 0)
    if not interior:
        return 0
    h = src.surface.plane_class()
    if h is None:
        raise MapError("torus exceptional degree needs a plane source when the map has "
                       "exceptional divisors in the torus")
    s = src.surface
    return sum(intersect(s.project(s.class_of(d)), h) for d in interior)


def is_crepant(m: BirationalMap) -> bool:
    return y_vector(m.source) == y_vector(m.target)


def is_cluster_type_map(m: BirationalMap) -> bool:
    return is_crepant(m) and torus_exceptional_degree(m) == 0


def inverse(m: BirationalMap) -> BirationalMap:
    return BirationalMap(m.target, m.source, (), m.name + "^-1")


@dataclass(frozen=True)
class CoverMetrics:
    teds: tuple
    total: int
    max: int
    min: int
    covered: bool
    minimal_cover: int | None
    missed: tuple


def aggregate_cover_metrics(maps: list[BirationalMap], pair: LogPair) -> CoverMetrics:
    """Upper-bound data from a supplied set of charts onto one pair.

    A divisor of the target outside the boundary is hit by a chart when it is a
    divisor on the chart's source.
    """
    if not maps:
        raise MapError("no charts supplied")
    for m in maps:
        if not is_crepant(m):
            raise MapError(f"chart {m.name} is not crepant")
        if m.target.surface.contracted != pair.surface.contracted:
            raise MapError(f"chart {m.name} does not land on the given pair")
    teds = tuple(torus_exceptional_degree(m) for m in maps)
    need = [d for d in pair.surface.surviving_ids() if pair.coefficient(d) == 0]
    hits = [frozenset(d for d in need if d not in m.source.surface.contracted) for m in maps]
    union = frozenset().union(*hits)
    missed = tuple(d for d in need if d not in union)
    minimal = None
    if not missed:
        for k in range(0 if not need else 1, len(maps) + 1):
            if any(frozenset().union(*(hits[i] for i in c)) >= set(need)
                   for c in combinations(range(len(maps)), k)):
                minimal = max(k, 1)
                break
    return CoverMetrics(teds, sum(teds), max(teds), min(teds), not missed, minimal, missed)


def explain_ids(s: MarkedSurface, ids: Iterable[str]) -> list[str]:
    """Readable names: exceptional curves also show their center."""
    out = []
    for d in ids:
        i = exceptional_index(d)
        out.append(f"{d}[{s.ledger[i].name}]" if i is not None else d)
    return out
