"""
The Picard lattice of a blown-up plane
======================================

"""

# A class on the plane blown up at n points is (d; m1, ..., mn): d times a line
# minus m_i times the i-th exceptional curve.
from logcy.lattice import (
    DivisorClass,
    arithmetic_genus,
    canonical_class,
    cremona_image,
    enumerate_roots,
    intersect,
)

line = DivisorClass.line(3)
e1 = DivisorClass.exceptional(0, 3)
print(line, e1, intersect(line, line), intersect(e1, e1))

# the canonical class is (-3; -1, ..., -1), so a smooth cubic has K.C = -9
k = canonical_class(3)
print(k, intersect(k, DivisorClass(3, (0, 0, 0))))

# a nodal cubic blown up at its node: square 9 - 4 = 5, genus drops to 0
nodal = DivisorClass(3, (2, 0, 0))
print(intersect(nodal, nodal), arithmetic_genus(nodal))

# The quadratic transformation centred at the first three points acts on classes.
# It swaps the line through two centers with the exceptional curve of the third.
through_12 = DivisorClass(1, (1, 1, 0))
print(cremona_image(through_12, 0, 1, 2))
print(cremona_image(line, 0, 1, 2))             # lines become conics through the centers

# It is an isometry and fixes K
a, b = DivisorClass(4, (2, 1, 1)), DivisorClass(2, (1, 0, 1))
print(intersect(a, b), intersect(cremona_image(a, 0, 1, 2), cremona_image(b, 0, 1, 2)))
print(cremona_image(k, 0, 1, 2) == k)

# Roots: classes with r^2 = -2 and r.K = 0.  Their counts follow the
# root systems A1, A2+A1, A4, D5, E6, E7, E8 for n = 2..8.
for n in range(9):
    print(n, len(enumerate_roots(n)))

# the roots of E8 that are not differences of exceptional curves
print([str(r) for r in enumerate_roots(8) if r.degree > 0][:5])
