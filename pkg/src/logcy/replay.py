"""Bundled fixtures, the two parameterized families, and the replay runner.

A fixture is a construction script plus a one-line provenance note.  Running
it checks every ``expect`` line and a handful of universal assertions that
hold for any well-formed log Calabi-Yau construction in the corpus.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .ade import format_labels, is_a_type_only, singularity_labels
from .maps import (
    BirationalMap,
    MapError,
    aggregate_cover_metrics,
    between,
    exceptional_divisor_classes,
    is_crepant,
    torus_exceptional_degree,
)
from .pairs import (
    LogPair,
    PairError,
    boundary_through_singular_points,
    classify_pair,
    complexity,
    coregularity_surface,
    dual_complex_type,
    is_index_one_complement,
    pullback_coefficients,
    y_vector,
)
from .script import (
    Checkpoint,
    ConstructionScript,
    Elaboration,
    Expectation,
    ScriptErrors,
    elaborate_full,
    model_pair,
    parse,
    running_pair,
)
from .surface import validate_configuration

PROVENANCE_TAG = "# provenance:"


@dataclass(frozen=True)
class Fixture:
    name: str
    text: str
    provenance: str

    @property
    def script(self) -> ConstructionScript:
        return parse(self.text)

    @property
    def expectations(self) -> list[Expectation]:
        return self.script.expectations


def _provenance(text: str) -> str:
    for line in text.splitlines():
        if line.startswith(PROVENANCE_TAG):
            return line[len(PROVENANCE_TAG):].strip()
    return ""


def load_fixture_text(name: str, text: str) -> Fixture:
    return Fixture(name, text, _provenance(text))


def builtin_fixtures() -> list[Fixture]:
    """Every bundled ``.lcy`` file, sorted by name."""
    root = resources.files("logcy") / "fixtures"
    out = []
    for entry in root.iterdir():
        if entry.name.endswith(".lcy"):
            out.append(load_fixture_text(entry.name[:-4], entry.read_text(encoding="utf-8")))
    return sorted(out, key=lambda f: f.name)


def fixture_by_name(name: str) -> Fixture:
    for f in builtin_fixtures():
        if f.name == name:
            return f
    raise KeyError(name)


# families

def gen_dn_family(n: int) -> Fixture:
    """Quadric with a fiber tangent to the boundary conic section; one D_n point.

    The quadric is the plane blown up at a, b with the line ab contracted.  Q
    is the (2,1) curve and F the fiber through a; the fiber Fp through a is
    tangent to Q at x.  Blowing up x, then n-1 more times along Q, and
    contracting Fp with all but the last exceptional curve leaves D_n.
    """
    if n < 4:
        raise ValueError("the D_n family starts at n = 4")
    zs = [f"z{i}" for i in range(1, n - 1)]
    lines = [
        f"{PROVENANCE_TAG} quadric with a fiber tangent to the boundary, D_{n} member",
        "curve Lab degree 1 mult a:1 b:1",
        "curve Q degree 3 mult a:1 b:2",
        "curve F degree 1 mult a:1",
        "curve Fp degree 1 mult a:1 x:1 y:1",
        "point a",
        "point b",
        "point x on Q",
        "point y over x on Q",
    ]
    prev = "y"
    for z in zs:
        lines.append(f"point {z} over {prev} on Q")
        prev = z
    lines += [
        "",
        "blowup a b",
        "contract Lab",
        "boundary Q:1 + F:1",
        "model quadric",
        "blowup x y " + " ".join(zs),
        "contract Fp E[x] E[y]" + "".join(f" E[{z}]" for z in zs[:-1]),
        f"expect singularities D{n}",
        "expect a-type-only false",
        "expect index-one",
        "expect complexity = 2",
    ]
    return load_fixture_text(f"dn-family-{n}", "\n".join(lines) + "\n")


def gen_chain_family(n: int, charts: int | None = None) -> Fixture:
    """Quadric with a point of the boundary blown up n times along it.

    The fiber M through the point and the n exceptional curves form the chain
    E_0..E_n, with (-1)-curves at both ends once n >= 1.  Chart i contracts
    every chain member except E_i; the charts jointly cover the chain, and no
    n of them do.  ``charts`` overrides the expected cover size.
    """
    if n < 0:
        raise ValueError("the chain family starts at n = 0")
    if charts is None:
        charts = n + 1
    ps = [f"p{i}" for i in range(1, n + 1)]
    lines = [
        f"{PROVENANCE_TAG} quadric with a boundary point blown up {n} times along the boundary",
        "curve L1 degree 1",
        "curve L2 degree 1",
        "curve L3 degree 1",
        "curve M degree 1 mult b:1 p1:1",
        "point a on L1,L3",
        "point b on L2,L3",
        "point p1 on L1" if n else "point p1 on L1,M",
    ]
    for i in range(2, n + 1):
        lines.append(f"point p{i} over p{i - 1} on L1")
    chain = ["M"] + [f"E[{p}]" for p in ps]
    lines += [
        "",
        "blowup a b",
        "contract L3",
        "boundary L1:1 + L2:1 + E[a]:1 + E[b]:1",
    ]
    if ps:
        lines.append("blowup " + " ".join(ps))
    lines += ["model X", f"expect complexity = {n}", "expect index-one"]
    for i, keep in enumerate(chain):
        lines.append("from X")
        rest = [c for c in chain if c != keep]
        if rest:
            lines.append("contract " + " ".join(rest))
        lines += [f"model chart{i}", f"map phi{i} chart{i} -> X"]
    lines.append(f"expect cover charts {charts}")
    return load_fixture_text(f"chain-family-{n}", "\n".join(lines) + "\n")


# running

@dataclass(frozen=True)
class Entry:
    check: str          # expectation text, or "universal: ..." for built-in assertions
    line: int
    expected: str
    actual: str
    passed: bool


@dataclass
class ReplayReport:
    fixture: str
    provenance: str
    entries: list = field(default_factory=list)
    errors: list = field(default_factory=list)      # ScriptError messages, if elaboration failed
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.errors and all(e.passed for e in self.entries)

    def failures(self) -> list[Entry]:
        return [e for e in self.entries if not e.passed]


def show(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def checkpoint_pair(cp: Checkpoint) -> LogPair:
    return running_pair(cp.surface, cp.boundary, cp.reference)


def checkpoint_map(cp: Checkpoint, index: int = -1) -> BirationalMap:
    """A declared map seen from an expectation (the implicit base map if none)."""
    if cp.maps:
        name, src, tgt = cp.maps[index]
        return between(model_pair(cp.models[src], cp.surface, cp.reference),
                       model_pair(cp.models[tgt], cp.surface, cp.reference), name)
    return between(model_pair(cp.models["base"], cp.surface, cp.reference),
                   checkpoint_pair(cp), "main")


def evaluate(cp: Checkpoint) -> Entry:
    ex = cp.expectation
    kind = ex.kind
    try:
        if kind == "singularities":
            actual = format_labels(singularity_labels(cp.surface))
            ok = actual == ex.value
        elif kind == "complexity":
            actual = complexity(checkpoint_pair(cp))
            ok = actual == ex.value
        elif kind == "index-one":
            actual = is_index_one_complement(checkpoint_pair(cp))
            ok = actual
        elif kind == "coregularity":
            actual = coregularity_surface(checkpoint_pair(cp))
            ok = actual == ex.value
        elif kind == "dual-complex":
            actual = dual_complex_type(checkpoint_pair(cp))
            ok = actual == ex.value
        elif kind == "a-type-only":
            actual = is_a_type_only(cp.surface)
            ok = actual == ex.value
        elif kind == "ted":
            actual = torus_exceptional_degree(checkpoint_map(cp))
            ok = actual == ex.value if ex.op == "=" else actual <= ex.value
        elif kind == "crepant":
            actual = is_crepant(checkpoint_map(cp))
            ok = actual
        elif kind == "cover":
            if not cp.maps:
                raise MapError("cover needs declared maps")
            maps = [checkpoint_map(cp, i) for i in range(len(cp.maps))]
            target = maps[0].target
            metrics = aggregate_cover_metrics(maps, target)
            actual = metrics.minimal_cover if metrics.covered else "not covered"
            ok = metrics.covered and metrics.minimal_cover == ex.value
        else:
            raise ValueError(f"unknown expectation {kind}")
    except (MapError, PairError, ValueError) as exc:
        return Entry(ex.text(), ex.line, _expected(ex), f"error: {exc}", False)
    return Entry(ex.text(), ex.line, _expected(ex), show(actual), bool(ok))


def _expected(ex: Expectation) -> str:
    if ex.kind == "ted":
        return f"{ex.op} {ex.value}"
    return show(ex.value)


def _named_pairs(el: Elaboration) -> list[tuple[str, LogPair]]:
    out = [(name, el.model_pair(name)) for name in el.models]
    out.append(("final", el.pair))
    return out


def universal_checks(el: Elaboration) -> list[Entry]:
    """Assertions every fixture must satisfy regardless of its expectations."""
    entries = []
    report = validate_configuration(el.surface)
    entries.append(Entry("universal: configuration valid", 0, "true", show(report.ok), report.ok))
    for name, p in _named_pairs(el):
        lc = classify_pair(p).lc
        if lc and is_index_one_complement(p):
            c = complexity(p)
            entries.append(Entry(f"universal: {name} complexity >= 0", 0, ">= 0", show(c), c >= 0))
            b = pullback_coefficients(p)
            if all(e.b == 0 for e in b.entries.values()):
                hits = boundary_through_singular_points(p)
                entries.append(Entry(f"universal: {name} boundary in smooth locus", 0, "none",
                                     ", ".join(hits) or "none", not hits))
            entries.extend(_contracted_meet_boundary(name, p))
    maps = el.maps or [("main", "base", None)]
    for mname, src, tgt in maps:
        m = between(el.model_pair(src), el.pair if tgt is None else el.model_pair(tgt), mname)
        # only between honest pairs; a sub-boundary pushed to the base can be negative
        effective = all(c >= 0 for p in (m.source, m.target) for _, c in p.boundary)
        if not effective or not is_crepant(m):
            continue
        bad = []
        for d in sorted(exceptional_divisor_classes(m)):
            a = 1 - y_vector(m.target)[d]
            in_boundary = m.source.coefficient(d) == 1
            if a not in (0, 1) or (a == 0) != in_boundary:
                bad.append(f"{d}:a={a}")
        entries.append(Entry(f"universal: {mname} exceptional divisors are lc places or boundary",
                             0, "none", ", ".join(bad) or "none", not bad))
    return entries


def _contracted_meet_boundary(name: str, p: LogPair) -> list[Entry]:
    try:
        if coregularity_surface(p) != 0:
            return []
    except PairError:
        return []
    s = p.surface
    vec = y_vector(p)
    reduced = [d for d, c in vec.items() if c == 1]
    bad = []
    for d in s.contracted:
        if vec[d] != 0:
            continue
        meet = sum(max(s.pair(d, r), 0) for r in reduced)
        if meet > 1:
            bad.append(f"{d}:{meet}")
    return [Entry(f"universal: {name} contracted curves meet the boundary at most once", 0,
                  "none", ", ".join(bad) or "none", not bad)]


def run_fixture(f: Fixture) -> ReplayReport:
    start = time.perf_counter()
    report = ReplayReport(f.name, f.provenance)
    try:
        el = elaborate_full(parse(f.text))
    except ScriptErrors as exc:
        report.errors = [str(e) for e in exc.errors]
        report.seconds = time.perf_counter() - start
        return report
    report.entries = [evaluate(cp) for cp in el.checkpoints] + universal_checks(el)
    report.seconds = time.perf_counter() - start
    return report


def run_all(fixtures: list[Fixture] | None = None) -> list[ReplayReport]:
    fixtures = builtin_fixtures() if fixtures is None else fixtures
    return [run_fixture(f) for f in sorted(fixtures, key=lambda f: f.name)]
