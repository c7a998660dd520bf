"""Small dense linear algebra over the rationals."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from math import gcd


class SingularSystem(ValueError):
    pass


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square system exactly by Gauss-Jordan elimination."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularSystem("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def leading_minors(matrix: Sequence[Sequence]) -> list[Fraction]:
    """Leading principal minors, read off elimination without row swaps."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    minors, det = [], Fraction(1)
    for k in range(n):
        p = a[k][k]
        det *= p
        minors.append(det)
        if p == 0:
            minors.extend([Fraction(0)] * (n - k - 1))
            break
        for r in range(k + 1, n):
            f = a[r][k] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    return minors


def is_negative_definite(gram: Sequence[Sequence]) -> bool:
    """Sylvester's criterion applied to -gram; the empty matrix qualifies."""
    neg = [[-x for x in row] for row in gram]
    return all(m > 0 for m in leading_minors(neg))


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def primitive_kernel_vector(rows: Sequence[Sequence]) -> list[int] | None:
    """Primitive integer generator of a one-dimensional kernel, else None."""
    if not rows:
        return None
    width = len(rows[0])
    a = [[Fraction(x) for x in row] for row in rows]
    pivots, r = [], 0
    for col in range(width):
        pivot = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(width) if c not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    v = [Fraction(0)] * width
    v[f] = Fraction(1)
    for i, col in enumerate(pivots):
        v[col] = -a[i][f]
    scale = 1
    for x in v:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints]
