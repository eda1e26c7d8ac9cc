"""Finite abelian groups in invariant-factor form.

A group ``Z_{n_1} + ... + Z_{n_k}`` with ``n_1 | n_2 | ... | n_k`` is a
:class:`GroupType`; its elements are plain tuples of residues.  Elements are
always listed in lexicographic order of their residue vectors so that every
downstream search is deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Sequence

Element = tuple[int, ...]


class UnsupportedGroupError(ValueError):
    """Raised for groups outside the class an operation supports."""


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n`` by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Integer partitions of ``n`` as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


@dataclass(frozen=True, order=True)
class GroupType:
    """A finite abelian group given by its invariant factors."""

    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(n) for n in self.factors)
        object.__setattr__(self, "factors", factors)
        for n in factors:
            if n < 2:
                raise ValueError(f"invariant factors must be >= 2, got {factors}")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError(f"{factors} is not a divisibility chain")

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def is_elementary(self) -> bool:
        """True when every invariant factor is the same prime."""
        if not self.factors:
            return False
        p = self.factors[0]
        return factorize(p) == {p: 1} and all(n == p for n in self.factors)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.factors)))

    @cached_property
    def nonzero(self) -> tuple[Element, ...]:
        return self.elements[1:]

    def basis(self, i: int) -> Element:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def contains(self, g: Sequence[int]) -> bool:
        return len(g) == self.rank and all(0 <= a < n for a, n in zip(g, self.factors))

    def check(self, g: Sequence[int]) -> Element:
        g = tuple(int(a) for a in g)
        if not self.contains(g):
            raise ValueError(f"{g} is not an element of {self}")
        return g

    def reduce(self, g: Sequence[int]) -> Element:
        if len(g) != self.rank:
            raise ValueError(f"{tuple(g)} has the wrong length for {self}")
        return tuple(int(a) % n for a, n in zip(g, self.factors))

    def add(self, g: Sequence[int], h: Sequence[int]) -> Element:
        g, h = self.check(g), self.check(h)
        return tuple((a + b) % n for a, b, n in zip(g, h, self.factors))

    def neg(self, g: Sequence[int]) -> Element:
        g = self.check(g)
        return tuple(-a % n for a, n in zip(g, self.factors))

    def element_order(self, g: Sequence[int]) -> int:
        g = self.check(g)
        return math.lcm(1, *(n // math.gcd(n, a) for a, n in zip(g, self.factors)))

    def generated_subgroup(self, gens: Sequence[Element]) -> frozenset[Element]:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.add(x, s)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def to_json(self) -> dict:
        return {"factors": list(self.factors)}

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return "+".join(f"Z{n}" for n in self.factors)


def enumerate_groups(order: int) -> list[GroupType]:
    """Every abelian group of the given order, once each.

    Sorted by number of invariant factors, then lexicographically.
    """
    if order < 1:
        raise ValueError("order must be positive")
    per_prime = [
        [(p, part) for part in partitions(a)] for p, a in sorted(factorize(order).items())
    ]
    groups = []
    for choice in itertools.product(*per_prime):
        k = max((len(part) for _, part in choice), default=0)
        factors = [1] * k
        for p, part in choice:
            # largest exponent goes into the last factor
            for j, a in enumerate(part):
                factors[k - 1 - j] *= p**a
        groups.append(GroupType(tuple(factors)))
    return sorted(groups, key=lambda G: (G.rank, G.factors))


def elements(G: GroupType) -> list[Element]:
    return list(G.elements)


def add(G: GroupType, g: Sequence[int], h: Sequence[int]) -> Element:
    return G.add(g, h)


def neg(G: GroupType, g: Sequence[int]) -> Element:
    return G.neg(g)


def normalize(moduli: Sequence[int]) -> tuple[GroupType, Callable[[Sequence[int]], Element]]:
    """Convert ``Z_{m_1} + ... + Z_{m_r}`` to invariant-factor form.

    Returns the group together with an isomorphism taking residue vectors
    for the given moduli to elements of the invariant-factor group.  Factors
    equal to 1 are dropped.  Built by splitting every cyclic factor into its
    prime-power parts and regluing them with the Chinese remainder theorem.
    """
    moduli = [int(m) for m in moduli]
    if any(m < 1 for m in moduli):
        raise ValueError(f"moduli must be positive: {moduli}")
    try:
        G = GroupType(tuple(moduli))
    except ValueError:
        pass
    else:
        return G, G.reduce
    # (prime, prime power, source coordinate)
    pieces: dict[int, list[tuple[int, int]]] = {}
    for j, m in enumerate(moduli):
        for p, a in factorize(m).items():
            pieces.setdefault(p, []).append((p**a, j))
    k = max((len(v) for v in pieces.values()), default=0)
    slots: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for p in sorted(pieces):
        ordered = sorted(pieces[p], key=lambda t: (-t[0], -t[1]))
        for j, piece in enumerate(ordered):
            slots[k - 1 - j].append(piece)
    factors = tuple(math.prod(q for q, _ in slot) for slot in slots)
    G = GroupType(factors)

    def iso(x: Sequence[int]) -> Element:
        if len(x) != len(moduli):
            raise ValueError(f"{tuple(x)} does not match moduli {moduli}")
        out = []
        for slot, n in zip(slots, factors):
            out.append(_crt([(int(x[j]) % q, q) for q, j in slot], n))
        return tuple(out)

    return G, iso


def _crt(residues: list[tuple[int, int]], n: int) -> int:
    total = 0
    for r, q in residues:
        rest = n // q
        total += r * rest * pow(rest, -1, q)
    return total % n


# --- automorphisms of elementary abelian groups -----------------------------


def _mat_vec(A: tuple[tuple[int, ...], ...], v: Sequence[int], p: int) -> Element:
    return tuple(sum(a * b for a, b in zip(row, v)) % p for row in A)


def _mat_inv(A: tuple[tuple[int, ...], ...], p: int) -> tuple[tuple[int, ...], ...]:
    k = len(A)
    M = [list(row) + [int(i == j) for j in range(k)] for i, row in enumerate(A)]
    for col in range(k):
        piv = next((r for r in range(col, k) if M[r][col] % p), None)
        if piv is None:
            raise ValueError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, p)
        M[col] = [a * inv % p for a in M[col]]
        for r in range(k):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[col])]
    return tuple(tuple(row[k:]) for row in M)


@dataclass(frozen=True)
class GroupAutomorphism:
    """An automorphism of ``(Z_p)^k`` given by an invertible matrix.

    Acts on column vectors: ``A(v)[i] = sum_j A[i][j] v[j] mod p``.
    """

    group: GroupType
    matrix: tuple[tuple[int, ...], ...]

    @property
    def p(self) -> int:
        return self.group.factors[0]

    def __call__(self, v: Sequence[int]) -> Element:
        return _mat_vec(self.matrix, v, self.p)

    def compose(self, other: GroupAutomorphism) -> GroupAutomorphism:
        """``self`` after ``other``."""
        p, k = self.p, self.group.rank
        M = tuple(
            tuple(sum(self.matrix[i][t] * other.matrix[t][j] for t in range(k)) % p for j in range(k))
            for i in range(k)
        )
        return GroupAutomorphism(self.group, M)

    def inverse(self) -> GroupAutomorphism:
        return GroupAutomorphism(self.group, _mat_inv(self.matrix, self.p))

    def dual(self) -> GroupAutomorphism:
        """The inverse transpose, which preserves ``sum g_i a_i / p`` against ``self``."""
        inv = _mat_inv(self.matrix, self.p)
        return GroupAutomorphism(self.group, tuple(zip(*inv)))


def automorphisms(G: GroupType) -> list[GroupAutomorphism]:
    """All automorphisms of an elementary abelian group.

    Columns are chosen one at a time outside the span of the previous ones,
    which produces every invertible matrix over F_p exactly once.
    """
    if not G.is_elementary():
        raise UnsupportedGroupError(f"unsupported group for automorphism enumeration: {G}")
    p, k = G.factors[0], G.rank
    vectors = list(itertools.product(range(p), repeat=k))
    out: list[GroupAutomorphism] = []

    def extend(cols: list[Element], span: set[Element]):
        if len(cols) == k:
            out.append(GroupAutomorphism(G, tuple(zip(*cols))))
            return
        for v in vectors:
            if v in span:
                continue
            new_span = {tuple((a + c * b) % p for a, b in zip(s, v)) for s in span for c in range(p)}
            extend(cols + [v], new_span)

    extend([], {(0,) * k})
    return out
