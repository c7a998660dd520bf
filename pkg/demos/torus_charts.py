"""
Torus charts and their exceptional degree
=========================================

"""

# A chart is a crepant birational map from the plane with the coordinate
# triangle.  Its torus exceptional degree adds up the plane degrees of the
# curves it contracts that do not lie in the triangle.
from logcy.maps import (
    aggregate_cover_metrics,
    between,
    exceptional_divisor_classes,
    explain_ids,
    is_crepant,
    torus_exceptional_degree,
)
from logcy.replay import fixture_by_name, gen_chain_family
from logcy.script import elaborate_full, parse


def chart(name, model="tri"):
    el = elaborate_full(parse(fixture_by_name(name).text))
    return el, between(el.model_pair(model), el.model_pair("base"), name)


# The quadratic transformation at the triangle's vertices is toric: everything it
# contracts is a side of the triangle.
el, m = chart("toric-cremona", "base")
print(torus_exceptional_degree(between(el.model_pair("base"), el.pair)))

# Conic plus line: one quadratic transformation, one interior line contracted.
el, m = chart("ted-conic")
print(is_crepant(m), torus_exceptional_degree(m))
print(explain_ids(el.surface, sorted(exceptional_divisor_classes(m))))

# Nodal cubic: two quadratic transformations.  The composite contracts two
# exceptional curves away from the triangle, so the degree is 2; counting each
# step on its own gives 1 + 2.
el, m = chart("ted-cubic")
print(is_crepant(m), torus_exceptional_degree(m))
print(explain_ids(el.surface, sorted(exceptional_divisor_classes(m))))

# Charts onto one surface can cover it.  Blowing up a boundary point n times
# along the boundary leaves a chain of n+1 interior curves; each chart keeps one.
for n in range(4):
    el = elaborate_full(parse(gen_chain_family(n).text))
    maps = [between(el.model_pair(s), el.model_pair(t), name) for name, s, t in el.maps]
    metrics = aggregate_cover_metrics(maps, el.model_pair("X"))
    print(n, metrics.covered, metrics.minimal_cover, metrics.teds)
    if n:
        fewer = aggregate_cover_metrics(maps[1:], el.model_pair("X"))
        print("   without chart0:", fewer.covered, explain_ids(el.surface, fewer.missed))
