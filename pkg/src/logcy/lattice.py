"""Exact arithmetic in the Picard lattice of an iterated blow-up of the plane.

A class is written (d; m_1, ..., m_n) and stands for d*H - sum m_i*E_i, where
H is the pullback of a line and E_i the total transform of the i-th
exceptional curve.  The pairing is d*d' - sum m_i*m_i'.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational


class DimensionMismatch(ValueError):
    """Two classes live on blow-ups with different numbers of centers."""


def _clean(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, bool) or not isinstance(x, Rational):
        raise TypeError(f"lattice entries must be exact integers or fractions, got {x!r}")
    return x


@dataclass(frozen=True)
class DivisorClass:
    """Class dH - sum m_i E_i.

    Entries are ints.  Fractions only show up for pullbacks of Weil divisors
    from a singular contraction; integral fractions are normalised to ints.
    """

    degree: int
    mults: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "degree", _clean(self.degree))
        object.__setattr__(self, "mults", tuple(_clean(m) for m in self.mults))

    @property
    def n(self) -> int:
        return len(self.mults)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in (self.degree, *self.mults))

    @classmethod
    def line(cls, n: int) -> DivisorClass:
        return cls(1, (0,) * n)

    @classmethod
    def zero(cls, n: int) -> DivisorClass:
        return cls(0, (0,) * n)

    @classmethod
    def exceptional(cls, i: int, n: int) -> DivisorClass:
        """Total transform E_i, with i 0-based."""
        if not 0 <= i < n:
            raise IndexError(f"exceptional index {i} out of range for n={n}")
        m = [0] * n
        m[i] = -1
        return cls(0, tuple(m))

    def padded(self, n: int) -> DivisorClass:
        """Pull back to a blow-up with n >= self.n centers."""
        if n < self.n:
            raise DimensionMismatch(f"cannot pad a class on {self.n} centers down to {n}")
        return DivisorClass(self.degree, self.mults + (0,) * (n - self.n))

    def coords(self) -> tuple:
        return (self.degree, *self.mults)

    @classmethod
    def from_coords(cls, coords: Sequence) -> DivisorClass:
        return cls(coords[0], tuple(coords[1:]))

    def _check(self, other: DivisorClass) -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"classes on {self.n} and {other.n} centers cannot be combined")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(self.degree + other.degree,
                            tuple(a + b for a, b in zip(self.mults, other.mults)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return self + (-other)

    def __neg__(self) -> DivisorClass:
        return DivisorClass(-self.degree, tuple(-m for m in self.mults))

    def __mul__(self, k) -> DivisorClass:
        return DivisorClass(self.degree * k, tuple(m * k for m in self.mults))

    __rmul__ = __mul__

    def __iter__(self) -> Iterator:
        return iter(self.coords())

    def __str__(self) -> str:
        return f"({self.degree};{','.join(str(m) for m in self.mults)})"


def intersect(a: DivisorClass, b: DivisorClass):
    """The pairing d*d' - sum m_i*m_i'."""
    a._check(b)
    return a.degree * b.degree - sum(x * y for x, y in zip(a.mults, b.mults))


def canonical_class(n: int) -> DivisorClass:
    if n < 0:
        raise ValueError("blow-up count must be nonnegative")
    return DivisorClass(-3, (-1,) * n)


def self_intersection(c: DivisorClass):
    return intersect(c, c)


def arithmetic_genus(c: DivisorClass) -> Fraction:
    """Adjunction: p_a = (C^2 + C.K)/2 + 1."""
    k = canonical_class(c.n)
    value = Fraction(intersect(c, c) + intersect(c, k), 2) + 1
    return _clean(value)


def cremona_image(c: DivisorClass, i: int, j: int, k: int) -> DivisorClass:
    """Reflect c in the root H - E_i - E_j - E_k (0-based indices).

    This is the action of the standard quadratic transformation centred at
    the three points: d' = 2d - m_i - m_j - m_k and m_i' = d - m_j - m_k.
    """
    idx = (i, j, k)
    if len(set(idx)) != 3:
        raise ValueError(f"cremona centers must be distinct, got {idx}")
    for t in idx:
        if not 0 <= t < c.n:
            raise IndexError(f"cremona center {t} out of range for n={c.n}")
    d, m = c.degree, list(c.mults)
    mi, mj, mk = m[i], m[j], m[k]
    m[i], m[j], m[k] = d - mj - mk, d - mi - mk, d - mi - mj
    return DivisorClass(2 * d - mi - mj - mk, tuple(m))


def _root_search(n: int, max_degree: int) -> list[DivisorClass]:
    # r^2 = -2 and r.K = 0 read d^2 - sum m^2 = -2 and sum m = 3d.
    found = []
    out: list[int] = []

    def extend(d: int, pos: int, sq_left: int, sum_left: int) -> None:
        slots = n - pos
        if slots == 0:
            if sq_left == 0 and sum_left == 0:
                found.append(DivisorClass(d, tuple(out)))
            return
        # Cauchy-Schwarz: (sum m)^2 <= slots * sum m^2 on the remaining slots.
        if sum_left * sum_left > slots * sq_left:
            return
        bound = isqrt(sq_left)
        for m in range(-bound, bound + 1):
            out.append(m)
            extend(d, pos + 1, sq_left - m * m, sum_left - m)
            out.pop()

    for d in range(-max_degree, max_degree + 1):
        extend(d, 0, d * d + 2, 3 * d)
    return found


def enumerate_roots(n: int) -> list[DivisorClass]:
    """All classes r with r^2 = -2 and r.K = 0 on an n-fold blow-up, n <= 8.

    Exhaustive search over |d| <= 6, followed by a re-search at |d| <= 7 that
    must turn up nothing new.
    """
    if n < 0:
        raise ValueError("blow-up count must be nonnegative")
    if n > 8:
        raise ValueError(f"root system is infinite for n={n} > 8")
    roots = _root_search(n, 6)
    wider = _root_search(n, 7)
    if set(wider) != set(roots):
        raise AssertionError(f"root search at |d| <= 6 is incomplete for n={n}")
    return sorted(roots, key=lambda r: r.coords())
