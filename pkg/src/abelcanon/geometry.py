"""Exact geometry of the projective plane and its blow-ups at points.

A divisor class on the plane blown up at ``t`` points is written
``h H + e_1 E_1 + ... + e_t E_t`` and stored as ``DivisorClass(h, (e_1, ..., e_t))``.
The canonical class is ``-3H + E_1 + ... + E_t``.  Everything is rational;
there is no floating point in this module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Point = tuple[Fraction, Fraction, Fraction]


def _q(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        raise TypeError("floating point coordinates are not accepted")
    return Fraction(v)


# --- line bundles on the plane ----------------------------------------------


def h0_plane(t: int) -> int:
    return (t + 1) * (t + 2) // 2 if t >= 0 else 0


def chi_plane(t: int) -> int:
    return (t + 1) * (t + 2) // 2


def h2_plane(t: int) -> int:
    return h0_plane(-t - 3)


def h1_plane(t: int) -> int:
    return 0


# --- divisor classes -----------------------------------------------------------


@dataclass(frozen=True)
class DivisorClass:
    h: Fraction
    e: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "h", _q(self.h))
        object.__setattr__(self, "e", tuple(_q(x) for x in self.e))

    @property
    def t(self) -> int:
        return len(self.e)

    def _same_base(self, other: DivisorClass):
        if self.t != other.t:
            raise ValueError(f"classes live on different blow-ups ({self.t} vs {other.t} points)")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._same_base(other)
        return DivisorClass(self.h + other.h, tuple(a + b for a, b in zip(self.e, other.e)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return self + (-other)

    def __neg__(self) -> DivisorClass:
        return DivisorClass(-self.h, tuple(-a for a in self.e))

    def __mul__(self, c) -> DivisorClass:
        c = _q(c)
        return DivisorClass(c * self.h, tuple(c * a for a in self.e))

    __rmul__ = __mul__

    def __truediv__(self, c) -> DivisorClass:
        return self * (1 / _q(c))

    def coords(self) -> tuple[Fraction, ...]:
        return (self.h,) + self.e

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords())

    def is_zero(self) -> bool:
        return not any(self.coords())

    @classmethod
    def zero(cls, t: int = 0) -> DivisorClass:
        return cls(0, (0,) * t)

    @classmethod
    def hyperplane(cls, t: int = 0) -> DivisorClass:
        return cls(1, (0,) * t)

    @classmethod
    def exceptional(cls, s: int, t: int) -> DivisorClass:
        return cls(0, tuple(1 if r == s else 0 for r in range(t)))

    def to_json(self) -> dict:
        return {"h": _fmt(self.h), "e": [_fmt(a) for a in self.e]}

    def __str__(self) -> str:
        if not self.e:
            return f"({_fmt(self.h)})"
        return f"({_fmt(self.h)}; {', '.join(str(_fmt(a)) for a in self.e)})"


def _fmt(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def canonical_class(t: int) -> DivisorClass:
    return DivisorClass(-3, (1,) * t)


def intersect(a: DivisorClass, b: DivisorClass) -> Fraction:
    a._same_base(b)
    return a.h * b.h - sum((x * y for x, y in zip(a.e, b.e)), Fraction(0))


def chi_class(D: DivisorClass) -> int:
    """Riemann-Roch on the blown-up plane: ``1 + (D.D - D.K) / 2``."""
    if not D.is_integral():
        raise ValueError(f"chi needs an integral class, got {D}")
    val = 1 + (intersect(D, D) - intersect(D, canonical_class(D.t))) / 2
    assert val.denominator == 1
    return int(val)


# --- line arrangements -----------------------------------------------------------


def normalize_point(v: Sequence) -> Point:
    """Scale a nonzero projective vector so its first nonzero entry is 1."""
    v = tuple(_q(a) for a in v)
    lead = next((a for a in v if a), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    return tuple(a / lead for a in v)


def cross(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def line_through(p: Sequence, q: Sequence) -> Point:
    return normalize_point(cross([_q(a) for a in p], [_q(a) for a in q]))


@dataclass(frozen=True)
class LineArrangement:
    lines: tuple[Point, ...]

    def __post_init__(self):
        lines = tuple(normalize_point(l) for l in self.lines)
        if len(set(lines)) != len(lines):
            dup = [l for l in lines if lines.count(l) > 1][0]
            raise ValueError(f"duplicate line {tuple(map(_fmt, dup))} in arrangement")
        object.__setattr__(self, "lines", lines)

    def __len__(self) -> int:
        return len(self.lines)

    @classmethod
    def from_json(cls, data: dict) -> LineArrangement:
        return cls(tuple(tuple(_q(a) for a in l) for l in data["lines"]))

    def to_json(self) -> dict:
        return {"lines": [[_fmt(a) for a in l] for l in self.lines]}


@dataclass(frozen=True)
class MultiplePoint:
    point: Point
    incident: frozenset[int]

    @property
    def multiplicity(self) -> int:
        return len(self.incident)

    def to_json(self) -> dict:
        return {
            "point": [_fmt(a) for a in self.point],
            "lines": sorted(self.incident),
            "multiplicity": self.multiplicity,
        }


def multiple_points(arr: LineArrangement) -> list[MultiplePoint]:
    """Every point where at least two lines of ``arr`` meet."""
    found: dict[Point, set[int]] = {}
    for i, j in itertools.combinations(range(len(arr)), 2):
        p = normalize_point(cross(arr.lines[i], arr.lines[j]))
        found.setdefault(p, set()).update((i, j))
    return [MultiplePoint(p, frozenset(found[p])) for p in sorted(found)]


def max_multiplicity(arr: LineArrangement) -> int:
    return max((mp.multiplicity for mp in multiple_points(arr)), default=0)


# --- linear systems with assigned base points --------------------------------------


def _monomials(t: int) -> list[tuple[int, int, int]]:
    return [(a, b, t - a - b) for a in range(t, -1, -1) for b in range(t - a, -1, -1)]


def _falling(n: int, k: int) -> int:
    return math.perm(n, k) if k <= n else 0


def rank(rows: list[list[Fraction]]) -> int:
    """Exact rank by fraction-valued Gaussian elimination."""
    M = [list(r) for r in rows if any(r)]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pr = M[r]
        for i in range(r + 1, len(M)):
            if M[i][c]:
                f = M[i][c] / pr[c]
                M[i] = [a - f * b for a, b in zip(M[i], pr)]
        r += 1
        if r == len(M):
            break
    return r


def linear_system_dim(t: int, points: Iterable[tuple[Sequence, int]]) -> int:
    """Dimension of degree-``t`` forms vanishing to order ``>= m`` at each point.

    Builds one row per partial derivative of order ``< m`` at every point and
    takes the exact rank; no independence of conditions is assumed.
    """
    if t < 0:
        return 0
    monos = _monomials(t)
    rows: list[list[Fraction]] = []
    for pt, m in points:
        if m < 1:
            continue
        p = normalize_point(pt)
        for order in range(m):
            for i in range(order + 1):
                for j in range(order - i + 1):
                    k = order - i - j
                    row = []
                    for a, b, c in monos:
                        coef = _falling(a, i) * _falling(b, j) * _falling(c, k)
                        if coef == 0:
                            row.append(Fraction(0))
                            continue
                        row.append(coef * p[0] ** (a - i) * p[1] ** (b - j) * p[2] ** (c - k))
                    rows.append(row)
    return len(monos) - rank(rows)


def h0_class(D: DivisorClass, points: Sequence[Sequence]) -> int:
    """``h^0`` of an integral class on the plane blown up at ``points``.

    A positive coefficient on ``E_s`` is a fixed part (``D.E_s < 0``) and is
    dropped; the rest is a plane linear system with assigned multiplicities.
    """
    if not D.is_integral():
        raise ValueError(f"h0 needs an integral class, got {D}")
    if len(points) != D.t:
        raise ValueError(f"class has {D.t} exceptional coordinates but {len(points)} points were given")
    conditions = [(p, int(-e)) for p, e in zip(points, D.e) if e < 0]
    return linear_system_dim(int(D.h), conditions)


def h2_class(D: DivisorClass, points: Sequence[Sequence]) -> int:
    return h0_class(canonical_class(D.t) - D, points)


def h1_class(D: DivisorClass, points: Sequence[Sequence]) -> int:
    return h0_class(D, points) + h2_class(D, points) - chi_class(D)
