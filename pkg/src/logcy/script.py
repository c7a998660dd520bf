"""Parser, formatter and elaborator for ``.lcy`` construction scripts.

A script is a sequence of lines; ``#`` starts a comment.  Statements run in
order against a *running model*, which starts as the plane.

Declarations (order-free, each name declared once)
--------------------------------------------------
``base P2``
    The starting surface.  Optional; the plane is the only base.
``point NAME [over PARENT] [on CURVE,...] [proximate CENTER,...]``
    A point to blow up later.  ``over`` makes it infinitely near PARENT
    (on the exceptional curve of PARENT); ``proximate`` adds satellite
    relations; ``on`` lists curves through it.
``curve NAME degree D [mult POINT:M ...] [node POINT ...]``
    A plane curve of degree D.  Its multiplicity at a point is the declared
    ``mult``, else 2 at a ``node``, else 1 if the point is declared ``on`` it.

Steps
-----
``blowup POINT ...``
    Blow up points of the running model.  A point that was blown up before
    (or a contracted curve) is brought back as a curve instead.
``contract CLASS ...``
    Contract curves.  A class is a curve name, ``E<i>`` (exceptional curve of
    the i-th blown-up center) or ``E[POINT]``.
``cremona A B C``
    Quadratic transformation of a plane model with centers A, B, C.  The
    line through two centers is found among tracked curves or created as
    ``L_A_B``; either way the name ``L_A_B`` refers to it afterwards.

Models and maps
---------------
``boundary TERM [+ TERM ...]``
    Boundary of the running model, TERM = ``CLASS:RATIONAL``.  The first
    boundary given is the reference; other models get the crepant boundary
    pushed from it unless they carry their own.
``model NAME``
    Remember the running model.  ``base`` (the plane before any step) is
    always defined.
``from NAME``
    Make a remembered model the running model again.
``map NAME SOURCE -> TARGET``
    A birational map between two remembered models.

Expectations
------------
``expect singularities LABELS`` (``E8``, ``D4+3A1``, ``none``),
``expect complexity = R``, ``expect index-one``, ``expect coregularity K``,
``expect dual-complex circle|interval|point|empty``,
``expect a-type-only true|false`` refer to the running model at that line.
``expect ted = K``, ``expect ted <= K`` and ``expect crepant`` refer to the
last declared map, or to ``base -> running model`` when there is none.
``expect cover charts K`` asks that the declared maps divisorially cover
their common target and that K is the least number of them that does.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from .ade import format_labels, parse_labels
from .maps import (
    BlowUp,
    Contract,
    Cremona,
    MapError,
    StepContext,
    apply_step,
    lift,
    pushforward,
)
from .pairs import LogPair, PairError
from .surface import (
    CenterSpec,
    CurveRecord,
    MarkedSurface,
    SurfaceError,
    exceptional_id,
    exceptional_index,
    plane,
    validate_configuration,
)

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")
EXC_NAMED = re.compile(r"E\[([A-Za-z_][A-Za-z0-9_']*)\]$")
EXC_INDEX = re.compile(r"E(\d+)$")
RATIONAL = re.compile(r"-?\d+(/\d+)?$")
TOKEN = re.compile(r"[^\s]+")

DUAL_TYPES = ("circle", "interval", "point", "empty")


@dataclass(frozen=True)
class ScriptError(Exception):
    line: int
    column: int
    message: str
    token: str = ""

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ScriptErrors(ValueError):
    """All errors found in one script."""

    def __init__(self, errors: Iterable[ScriptError]):
        self.errors = sorted(errors, key=lambda e: (e.line, e.column))
        super().__init__("\n".join(str(e) for e in self.errors))


# statements

@dataclass(frozen=True)
class Stmt:
    line: int = field(default=0, compare=False)
    cols: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class Base(Stmt):
    surface: str = "P2"


@dataclass(frozen=True)
class PointDecl(Stmt):
    name: str = ""
    over: str | None = None
    on: tuple = ()
    proximate: tuple = ()


@dataclass(frozen=True)
class CurveDecl(Stmt):
    name: str = ""
    degree: int = 1
    mults: tuple = ()       # (point, int)
    nodes: tuple = ()


@dataclass(frozen=True)
class BoundaryStmt(Stmt):
    terms: tuple = ()       # (class, Fraction)


@dataclass(frozen=True)
class BlowupStmt(Stmt):
    points: tuple = ()


@dataclass(frozen=True)
class ContractStmt(Stmt):
    classes: tuple = ()


@dataclass(frozen=True)
class CremonaStmt(Stmt):
    centers: tuple = ()


@dataclass(frozen=True)
class ModelStmt(Stmt):
    name: str = ""


@dataclass(frozen=True)
class FromStmt(Stmt):
    name: str = ""


@dataclass(frozen=True)
class MapStmt(Stmt):
    name: str = ""
    source: str = ""
    target: str = ""


@dataclass(frozen=True)
class Expectation(Stmt):
    kind: str = ""
    op: str = "="
    value: object = None

    def text(self) -> str:
        k, v = self.kind, self.value
        if k in ("crepant", "index-one"):
            return k
        if k == "singularities":
            return f"singularities {v}"
        if k == "ted":
            return f"ted {self.op} {v}"
        if k == "complexity":
            return f"complexity = {v}"
        if k == "a-type-only":
            return f"a-type-only {'true' if v else 'false'}"
        if k == "cover":
            return f"cover charts {v}"
        return f"{k} {v}"


@dataclass(frozen=True)
class ConstructionScript:
    statements: tuple = ()

    def _of(self, kind) -> list:
        return [s for s in self.statements if isinstance(s, kind)]

    @property
    def points(self) -> list[PointDecl]:
        return self._of(PointDecl)

    @property
    def curves(self) -> list[CurveDecl]:
        return self._of(CurveDecl)

    @property
    def expectations(self) -> list[Expectation]:
        return self._of(Expectation)

    @property
    def boundaries(self) -> list[BoundaryStmt]:
        return self._of(BoundaryStmt)

    @property
    def steps(self) -> list[Stmt]:
        return [s for s in self.statements if isinstance(s, (BlowupStmt, ContractStmt, CremonaStmt))]


# parsing

def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in TOKEN.finditer(line)]


class _LineParser:
    def __init__(self, lineno: int, toks: list[tuple[str, int]]):
        self.lineno = lineno
        self.toks = toks
        self.pos = 1

    def err(self, message: str, idx: int | None = None) -> ScriptError:
        if idx is None:
            idx = self.pos
        if idx < len(self.toks):
            tok, col = self.toks[idx]
        else:
            tok, col = self.toks[-1]
        return ScriptError(self.lineno, col, message, tok)

    def more(self) -> bool:
        return self.pos < len(self.toks)

    def peek(self) -> str | None:
        return self.toks[self.pos][0] if self.more() else None

    def take(self, what: str) -> str:
        if not self.more():
            raise self.err(f"expected {what}")
        tok = self.toks[self.pos][0]
        self.pos += 1
        return tok

    def col(self) -> int:
        return self.toks[self.pos - 1][1]

    def name(self, what: str = "a name") -> str:
        tok = self.take(what)
        if not IDENT.match(tok):
            raise self.err(f"expected {what}, got {tok!r}", self.pos - 1)
        return tok

    def class_ref(self) -> str:
        tok = self.take("a class")
        if not (IDENT.match(tok) or EXC_NAMED.match(tok)):
            raise self.err(f"expected a class, got {tok!r}", self.pos - 1)
        return tok

    def integer(self, what: str) -> int:
        tok = self.take(what)
        if not re.fullmatch(r"-?\d+", tok):
            raise self.err(f"expected {what}, got {tok!r}", self.pos - 1)
        return int(tok)

    def names_list(self, what: str) -> tuple:
        tok = self.take(what)
        parts = tok.split(",")
        if not all(IDENT.match(p) for p in parts):
            raise self.err(f"expected {what}, got {tok!r}", self.pos - 1)
        return tuple(parts)

    def done(self) -> None:
        if self.more():
            raise self.err(f"unexpected {self.peek()!r}")


def _rational(tok: str) -> Fraction | None:
    if not RATIONAL.match(tok):
        return None
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        return None


def _parse_line(lineno: int, line: str, toks: list[tuple[str, int]]) -> Stmt:
    p = _LineParser(lineno, toks)
    head = toks[0][0]
    cols = tuple(c for _, c in toks)
    meta = {"line": lineno, "cols": cols}
    if head == "base":
        name = p.take("a base surface")
        if name != "P2":
            raise p.err(f"unsupported base {name!r}; only P2 is available", 1)
        p.done()
        return Base(**meta, surface=name)
    if head == "point":
        name = p.name("a point name")
        over, on, prox, seen = None, (), (), set()
        while p.more():
            kw = p.take("a keyword")
            if kw in seen:
                raise p.err(f"{kw!r} given twice", p.pos - 1)
            seen.add(kw)
            if kw == "over":
                over = p.name("a parent point")
            elif kw == "on":
                on = p.names_list("curve names")
            elif kw == "proximate":
                prox = p.names_list("point names")
            else:
                raise p.err(f"unknown point keyword {kw!r}", p.pos - 1)
        return PointDecl(**meta, name=name, over=over, on=on, proximate=prox)
    if head == "curve":
        name = p.name("a curve name")
        if EXC_INDEX.match(name):
            raise p.err(f"curve name {name!r} is reserved for exceptional curves", 1)
        if p.take("'degree'") != "degree":
            raise p.err("expected 'degree'", p.pos - 1)
        deg = p.integer("a degree")
        if deg <= 0:
            raise p.err("degree must be positive", p.pos - 1)
        mults, nodes, mode = [], [], None
        while p.more():
            tok = p.take("curve data")
            if tok in ("mult", "node"):
                mode = tok
                continue
            if mode == "mult":
                m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_']*):(-?\d+)", tok)
                if not m:
                    raise p.err(f"expected POINT:MULT, got {tok!r}", p.pos - 1)
                if int(m.group(2)) < 0:
                    raise p.err("multiplicity must be nonnegative", p.pos - 1)
                mults.append((m.group(1), int(m.group(2))))
            elif mode == "node":
                if not IDENT.match(tok):
                    raise p.err(f"expected a point name, got {tok!r}", p.pos - 1)
                nodes.append(tok)
            else:
                raise p.err(f"expected 'mult' or 'node', got {tok!r}", p.pos - 1)
        return CurveDecl(**meta, name=name, degree=deg, mults=tuple(mults), nodes=tuple(nodes))
    if head == "boundary":
        start = toks[1][1] - 1 if len(toks) > 1 else len(line)
        terms, term_cols = [], []
        for m in re.finditer(r"[^+]+|\+", line[start:]):
            piece = m.group(0)
            col = start + m.start() + 1
            if piece == "+" or not piece.strip():
                continue
            stripped = piece.strip()
            col += piece.index(stripped)
            name, _, coef = stripped.rpartition(":")
            val = _rational(coef)
            if " " in stripped or not name or not (IDENT.match(name) or EXC_NAMED.match(name)):
                raise ScriptError(lineno, col, f"expected CLASS:RATIONAL, got {stripped!r}", stripped)
            if val is None:
                raise ScriptError(lineno, col, f"bad coefficient {coef!r} (use p/q or an integer)",
                                  stripped)
            if not 0 <= val <= 1:
                raise ScriptError(lineno, col, f"boundary coefficient {coef} outside [0,1]", stripped)
            terms.append((name, val))
            term_cols.append(col)
        pieces = [x.strip() for x in line[start:].split("+")]
        if not terms or any(not x for x in pieces):
            raise ScriptError(lineno, toks[0][1], "boundary needs CLASS:RATIONAL terms joined by '+'",
                              "boundary")
        return BoundaryStmt(line=lineno, cols=(toks[0][1],) + tuple(term_cols),
                            terms=tuple(terms))
    if head == "blowup":
        pts = []
        while p.more():
            pts.append(p.class_ref())
        if not pts:
            raise p.err("blowup needs at least one point")
        return BlowupStmt(**meta, points=tuple(pts))
    if head == "contract":
        cls = []
        while p.more():
            cls.append(p.class_ref())
        if not cls:
            raise p.err("contract needs at least one class")
        return ContractStmt(**meta, classes=tuple(cls))
    if head == "cremona":
        cs = tuple(p.class_ref() for _ in range(3))
        p.done()
        if len(set(cs)) != 3:
            raise p.err("cremona centers must be distinct", 1)
        return CremonaStmt(**meta, centers=cs)
    if head == "model":
        name = p.name("a model name")
        p.done()
        return ModelStmt(**meta, name=name)
    if head == "from":
        name = p.name("a model name")
        p.done()
        return FromStmt(**meta, name=name)
    if head == "map":
        name = p.name("a map name")
        src = p.name("a source model")
        if p.take("'->'") != "->":
            raise p.err("expected '->'", p.pos - 1)
        tgt = p.name("a target model")
        p.done()
        return MapStmt(**meta, name=name, source=src, target=tgt)
    if head == "expect":
        return _parse_expect(p, meta)
    raise ScriptError(lineno, toks[0][1], f"unknown statement {head!r}", head)


def _parse_expect(p: _LineParser, meta: dict) -> Expectation:
    kind = p.take("an expectation")
    if kind == "singularities":
        text = p.take("singularity labels")
        try:
            labels = parse_labels(text)
        except ValueError as exc:
            raise p.err(str(exc), p.pos - 1) from None
        p.done()
        return Expectation(**meta, kind=kind, value=format_labels(labels))
    if kind == "ted":
        op = p.take("'=' or '<='")
        if op not in ("=", "<="):
            raise p.err("expected '=' or '<='", p.pos - 1)
        v = p.integer("an integer")
        p.done()
        return Expectation(**meta, kind=kind, op=op, value=v)
    if kind == "complexity":
        if p.take("'='") != "=":
            raise p.err("expected '='", p.pos - 1)
        tok = p.take("a rational")
        v = _rational(tok)
        if v is None:
            raise p.err(f"bad rational {tok!r} (use p/q or an integer)", p.pos - 1)
        p.done()
        return Expectation(**meta, kind=kind, value=v)
    if kind in ("crepant", "index-one"):
        p.done()
        return Expectation(**meta, kind=kind, value=True)
    if kind == "coregularity":
        v = p.integer("0, 1 or 2")
        if v not in (0, 1, 2):
            raise p.err("coregularity of a surface is 0, 1 or 2", p.pos - 1)
        p.done()
        return Expectation(**meta, kind=kind, value=v)
    if kind == "dual-complex":
        v = p.take("a dual complex type")
        if v not in DUAL_TYPES:
            raise p.err(f"unknown dual complex type {v!r}", p.pos - 1)
        p.done()
        return Expectation(**meta, kind=kind, value=v)
    if kind == "a-type-only":
        v = p.take("true or false")
        if v not in ("true", "false"):
            raise p.err("expected true or false", p.pos - 1)
        p.done()
        return Expectation(**meta, kind=kind, value=v == "true")
    if kind == "cover":
        if p.take("'charts'") != "charts":
            raise p.err("expected 'charts'", p.pos - 1)
        v = p.integer("a chart count")
        if v < 0:
            raise p.err("chart count must be nonnegative", p.pos - 1)
        p.done()
        return Expectation(**meta, kind=kind, value=v)
    raise p.err(f"unknown expectation {kind!r}", p.pos - 1)


def parse(text: str) -> ConstructionScript:
    """Parse a script; raises ScriptErrors listing every bad line."""
    errors: list[ScriptError] = []
    stmts: list[Stmt] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        try:
            stmts.append(_parse_line(lineno, line, toks))
        except ScriptError as e:
            errors.append(e)
    if not any(isinstance(st, Base) for st in stmts):
        stmts.insert(0, Base())
    script = ConstructionScript(tuple(stmts))
    errors.extend(_check_names(script))
    if errors:
        raise ScriptErrors(errors)
    return script


def _check_names(script: ConstructionScript) -> list[ScriptError]:
    errors = []

    def at(stmt: Stmt, k: int, message: str, token: str = "") -> ScriptError:
        col = stmt.cols[k] if k < len(stmt.cols) else (stmt.cols[-1] if stmt.cols else 1)
        return ScriptError(stmt.line, col, message, token)

    points, curves, models = {}, {}, {"base": None}
    for st in script.statements:
        if isinstance(st, PointDecl):
            if st.name in points or st.name in curves:
                errors.append(at(st, 1, f"{st.name} declared twice", st.name))
            points[st.name] = st
        elif isinstance(st, CurveDecl):
            if st.name in curves or st.name in points:
                errors.append(at(st, 1, f"{st.name} declared twice", st.name))
            curves[st.name] = st
    autolines = set()
    for st in script.statements:
        if isinstance(st, CremonaStmt):
            a, b, c = st.centers
            for x, y in ((a, b), (a, c), (b, c)):
                autolines.update({f"L_{x}_{y}", f"L_{y}_{x}"})
    known_curves = set(curves) | autolines

    def class_ok(tok: str) -> bool:
        m = EXC_NAMED.match(tok)
        if m:
            return m.group(1) in points
        return tok in known_curves or bool(EXC_INDEX.match(tok))

    bases = [s for s in script.statements if isinstance(s, Base)]
    if len(bases) > 1:
        errors.append(at(bases[1], 0, "base given twice", "base"))
    for st in script.statements:
        if isinstance(st, PointDecl):
            if st.over is not None and st.over not in points:
                errors.append(at(st, 3, f"unknown point {st.over}", st.over))
            if st.over == st.name:
                errors.append(at(st, 3, f"{st.name} cannot lie over itself", st.over))
            for c in st.on:
                if c not in known_curves:
                    errors.append(at(st, 1, f"unknown curve {c}", c))
            for q in st.proximate:
                if q not in points:
                    errors.append(at(st, 1, f"unknown point {q}", q))
        elif isinstance(st, CurveDecl):
            for q, _ in st.mults:
                if q not in points:
                    errors.append(at(st, 1, f"unknown point {q}", q))
            for q in st.nodes:
                if q not in points:
                    errors.append(at(st, 1, f"unknown point {q}", q))
        elif isinstance(st, BoundaryStmt):
            for k, (name, _) in enumerate(st.terms):
                if not class_ok(name):
                    errors.append(at(st, 1 + k, f"unknown class {name}", name))
        elif isinstance(st, (BlowupStmt, CremonaStmt)):
            items = st.points if isinstance(st, BlowupStmt) else st.centers
            for k, tok in enumerate(items):
                if tok not in points and not class_ok(tok):
                    errors.append(at(st, 1 + k, f"unknown point {tok}", tok))
        elif isinstance(st, ContractStmt):
            for k, tok in enumerate(st.classes):
                if not class_ok(tok):
                    errors.append(at(st, 1 + k, f"unknown class {tok}", tok))
        elif isinstance(st, ModelStmt):
            if st.name in models:
                errors.append(at(st, 1, f"model {st.name} defined twice", st.name))
            models[st.name] = st
        elif isinstance(st, FromStmt):
            if st.name not in models:
                errors.append(at(st, 1, f"unknown model {st.name}", st.name))
        elif isinstance(st, MapStmt):
            for k, m in ((2, st.source), (3, st.target)):
                if m not in models:
                    errors.append(at(st, k, f"unknown model {m}", m))
    return errors


# formatting

def _fmt(st: Stmt) -> str:
    if isinstance(st, Base):
        return f"base {st.surface}"
    if isinstance(st, PointDecl):
        out = f"point {st.name}"
        if st.over:
            out += f" over {st.over}"
        if st.on:
            out += f" on {','.join(st.on)}"
        if st.proximate:
            out += f" proximate {','.join(st.proximate)}"
        return out
    if isinstance(st, CurveDecl):
        out = f"curve {st.name} degree {st.degree}"
        if st.mults:
            out += " mult " + " ".join(f"{p}:{m}" for p, m in st.mults)
        if st.nodes:
            out += " node " + " ".join(st.nodes)
        return out
    if isinstance(st, BoundaryStmt):
        return "boundary " + " + ".join(f"{n}:{c}" for n, c in st.terms)
    if isinstance(st, BlowupStmt):
        return "blowup " + " ".join(st.points)
    if isinstance(st, ContractStmt):
        return "contract " + " ".join(st.classes)
    if isinstance(st, CremonaStmt):
        return "cremona " + " ".join(st.centers)
    if isinstance(st, ModelStmt):
        return f"model {st.name}"
    if isinstance(st, FromStmt):
        return f"from {st.name}"
    if isinstance(st, MapStmt):
        return f"map {st.name} {st.source} -> {st.target}"
    if isinstance(st, Expectation):
        return f"expect {st.text()}"
    raise TypeError(f"unknown statement {st!r}")


def format(s: ConstructionScript) -> str:
    lines = [_fmt(st) for st in s.statements]
    if not any(isinstance(st, Base) for st in s.statements):
        lines.insert(0, _fmt(Base()))
    return "\n".join(lines) + "\n"


# elaboration

@dataclass
class ModelSnapshot:
    surface: MarkedSurface
    boundary: tuple | None      # explicit boundary items, or None for the crepant one
    line: int = 0


@dataclass
class Checkpoint:
    """State seen by one expectation."""

    expectation: Expectation
    surface: MarkedSurface
    boundary: tuple | None
    models: dict
    maps: list
    reference: tuple | None     # (model surface, boundary items)


@dataclass
class Elaboration:
    surface: MarkedSurface
    boundary: tuple | None
    models: dict
    maps: list                  # (name, source, target)
    reference: tuple | None
    checkpoints: list
    decl_lines: dict

    def model_pair(self, name: str, resolution: MarkedSurface | None = None) -> LogPair:
        return model_pair(self.models[name], resolution or self.surface, self.reference)

    @property
    def pair(self) -> LogPair:
        return running_pair(self.surface, self.boundary, self.reference)

    def map_names(self) -> list[str]:
        return [m[0] for m in self.maps]


def _pair_on(surface: MarkedSurface, boundary: tuple | None, reference) -> LogPair:
    if boundary is not None:
        return LogPair.make(surface, dict(boundary))
    if reference is None:
        return LogPair.make(surface, {})
    ref_surface, ref_boundary = reference
    ref = LogPair.make(lift(ref_surface, surface), dict(ref_boundary))
    return pushforward(ref, surface)


def model_pair(snap: ModelSnapshot, resolution: MarkedSurface, reference) -> LogPair:
    return _pair_on(lift(snap.surface, resolution), snap.boundary, reference)


def running_pair(surface: MarkedSurface, boundary, reference) -> LogPair:
    return _pair_on(surface, boundary, reference)


def _resolve_class(tok: str, s: MarkedSurface, ctx: StepContext) -> str:
    m = EXC_NAMED.match(tok)
    if m:
        if not s.has_center(m.group(1)):
            raise SurfaceError(f"{m.group(1)} has not been blown up, so {tok} does not exist")
        return exceptional_id(s.center_index(m.group(1)))
    ident = ctx.resolve(tok)
    if not s.has_divisor(ident):
        raise SurfaceError(f"unknown class {tok}")
    return ident


def elaborate_full(script: ConstructionScript) -> Elaboration:
    """Run the script and record what every expectation will be checked against."""
    decl_lines: dict = {}
    centers: dict = {}
    curves = []
    for st in script.points:
        centers[st.name] = CenterSpec(st.name, st.over, frozenset(st.on), frozenset(st.proximate))
        decl_lines[st.name] = st.line
    for st in script.curves:
        curves.append(CurveRecord.make(st.name, st.degree, dict(st.mults), st.nodes))
        decl_lines[st.name] = st.line
    s = plane(curves)
    ctx = StepContext(centers, {})
    models = {"base": ModelSnapshot(s, None, 0)}
    maps: list = []
    boundary = None
    reference = None
    stepped = False
    checkpoints = []
    errors = []

    for st in script.statements:
        try:
            if isinstance(st, (BlowupStmt, ContractStmt, CremonaStmt)):
                if not stepped:
                    models["base"] = ModelSnapshot(s, boundary, 0)
                    stepped = True
                s = _run_step(st, s, ctx)
                boundary = None
            elif isinstance(st, BoundaryStmt):
                items = tuple(sorted((_resolve_class(n, s, ctx), c) for n, c in st.terms))
                LogPair.make(s, dict(items))
                boundary = items
                if reference is None:
                    reference = (s, items)
                if not stepped:
                    models["base"] = ModelSnapshot(s, boundary, 0)
            elif isinstance(st, ModelStmt):
                models[st.name] = ModelSnapshot(s, boundary, st.line)
            elif isinstance(st, FromStmt):
                snap = models[st.name]
                s = lift(snap.surface, s)
                boundary = snap.boundary
            elif isinstance(st, MapStmt):
                maps.append((st.name, st.source, st.target))
            elif isinstance(st, Expectation):
                checkpoints.append(Checkpoint(st, s, boundary, dict(models), list(maps), reference))
        except (SurfaceError, MapError, PairError, KeyError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            errors.append(ScriptError(st.line, st.cols[0] if st.cols else 1, str(msg), ""))
            break
    if errors:
        raise ScriptErrors(errors)
    report = validate_configuration(s)
    if not report.ok:
        errs = []
        for v in report.violations:
            subject = v.subject.split(".")[0]
            line = decl_lines.get(subject, 0)
            errs.append(ScriptError(line, 1, f"{v.kind}: {v.message}", subject))
        raise ScriptErrors(errs)
    return Elaboration(s, boundary, models, maps, reference, checkpoints, decl_lines)


def _run_step(st: Stmt, s: MarkedSurface, ctx: StepContext) -> MarkedSurface:
    if isinstance(st, BlowupStmt):
        for tok in st.points:
            s = apply_step(s, BlowUp(_point_token(tok, s)), ctx)
        return s
    if isinstance(st, ContractStmt):
        return apply_step(s, Contract(tuple(_resolve_class(c, s, ctx) for c in st.classes)), ctx)
    if isinstance(st, CremonaStmt):
        return apply_step(s, Cremona(tuple(_point_token(t, s) for t in st.centers)), ctx)
    raise TypeError(st)


def _point_token(tok: str, s: MarkedSurface) -> str:
    m = EXC_NAMED.match(tok)
    if m:
        if not s.has_center(m.group(1)):
            raise SurfaceError(f"{m.group(1)} has not been blown up, so {tok} does not exist")
        return m.group(1)
    return tok


def elaborate(script: ConstructionScript):
    """The final pair and the declared maps (or base -> final when none)."""
    from .maps import between
    el = elaborate_full(script)
    pair = el.pair
    maps = []
    declared = el.maps or [("main", "base", None)]
    for name, src, tgt in declared:
        source = el.model_pair(src)
        target = pair if tgt is None else el.model_pair(tgt)
        maps.append(between(source, target, name))
    return pair, maps


def exceptional_name(s: MarkedSurface, ident: str) -> str:
    """``E[P]`` for the exceptional curve of P, curve names unchanged."""
    i = exceptional_index(ident)
    return f"E[{s.ledger[i].name}]" if i is not None else ident
