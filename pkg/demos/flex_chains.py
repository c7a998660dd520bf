"""
Du Val points from flex chains on a nodal cubic
===============================================

"""

# Blow up k times over a flex P1 of a nodal cubic C, always along C.  The first
# k-1 exceptional curves are (-2)-curves forming a chain, and the tangent line
# at the flex becomes a (-2)-curve attached to the third one.  Contracting them
# gives a rank-one surface with a single Du Val point.
from logcy.ade import format_labels, singularity_labels
from logcy.pairs import complexity, coregularity_surface, pullback_coefficients
from logcy.replay import fixture_by_name
from logcy.script import elaborate_full, parse

text = fixture_by_name("gdp-e8").text
print(text)

el = elaborate_full(parse(text))
x = el.models["X"].surface
print(x.n, "blow-ups, Picard rank", x.rank)
print(format_labels(singularity_labels(x)))

# Every contracted curve is crepant: the pullback of K + C has coefficient 0 on it.
pair = el.model_pair("X")
table = pullback_coefficients(pair)
print({d: str(table.b(d)) for d in x.contracted})

# The cubic keeps its node, so the boundary has a loop and coregularity 0.
print(complexity(pair), coregularity_surface(pair))

# The same chain with fewer blow-ups walks down the E and D series.
for name in ("gdp-a1a2", "gdp-a4", "gdp-d5", "gdp-e6", "gdp-e7", "gdp-e8"):
    el = elaborate_full(parse(fixture_by_name(name).text))
    print(name, format_labels(singularity_labels(el.models["X"].surface)))

# Adding a line through the chain that is tangent to C elsewhere adds an A1 or
# lengthens the D chain.
for name in ("gdp-d6a1", "gdp-e7a1", "gdp-d8"):
    el = elaborate_full(parse(fixture_by_name(name).text))
    print(name, format_labels(singularity_labels(el.models["X"].surface)))
