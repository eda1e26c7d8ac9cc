"""Concrete covers used by the self-checks, the CLI and the tests.

Line arrangements are explicit with small integer coefficients; each one has
been checked to have exactly the multiple points its name says.
"""

from __future__ import annotations

from .cover import CoverSpec, arrangement_cover, plane_cover
from .geometry import LineArrangement, line_through
from .groups import Element, GroupType, normalize

Z2_4 = GroupType((2, 2, 2, 2))

# z_1^2 = l1 l3 l4 l7, z_2^2 = l1 l2 l4 l5, z_3^2 = l1 l2 l3 l6, z_4^2 = l2 l5 l6 l8
OCTIC_EQUATIONS = ("1347", "1245", "1236", "2568")


def line_characters(equations: tuple[str, ...], nlines: int) -> list[Element]:
    """Exponent vector of each line across equations written as strings of line indices."""
    return [tuple(eq.count(str(i)) for eq in equations) for i in range(1, nlines + 1)]


OCTIC_ALPHAS = line_characters(OCTIC_EQUATIONS, 8)
CAMPEDELLI_ALPHAS = line_characters(OCTIC_EQUATIONS[:3], 7)

GENERIC_8 = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -3, -3), (1, -2, -1), (1, -1, -2), (1, 1, 3), (1, 3, 1)]
# l1, l3, l4 through (0:1:0); everything else generic
TRIPLE_8 = GENERIC_8[:3] + [(1, 0, 2)] + GENERIC_8[4:]
# l1, l2, l3, l4 through (0:1:0); characters sum to (1,1,1,1)
QUADRUPLE_8 = [(1, 0, 0), (1, 0, -1), (0, 0, 1), (1, 0, 1)] + GENERIC_8[4:]
GENERIC_5 = GENERIC_8[:5]

FIVE_LINE_ALPHAS = [(1, 1), (1, 2), (1, 3), (1, 4), (1, 0)]

_PENCIL_CENTERS = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
_EXTRA_TRIPLE = [(1, 2, 3), (1, 3, 2), (2, 1, 3)]
_PENCIL_FILL = [
    [(1, 1, 5), (1, 4, 1), (3, 1, 1)],
    [(1, 1, 7), (5, 1, 1), (1, 2, 9)],
    [(1, 1, 11), (1, 6, 1), (7, 1, 2)],
]
# z_1^3 = l1 ... l9, z_2^3 = l1 l2 l3 (l4 l5 l6)^2
NINE_LINE_ALPHAS = [(1, 1)] * 3 + [(1, 2)] * 3 + [(1, 0)] * 3


def arrangement(lines) -> LineArrangement:
    return LineArrangement(tuple(tuple(l) for l in lines))


def nine_line_arrangement(n: int) -> LineArrangement:
    """Three pencils of three lines with ``n`` extra triple points (0 <= n <= 3)."""
    if not 0 <= n <= 3:
        raise ValueError("n must be between 0 and 3")
    lines = []
    for center, fill in zip(_PENCIL_CENTERS, _PENCIL_FILL):
        pencil = [line_through(center, p) for p in _EXTRA_TRIPLE[:n]]
        pencil += [line_through(center, p) for p in fill[: 3 - n]]
        lines += pencil
    return LineArrangement(tuple(lines))


def degree16_plane() -> CoverSpec:
    return plane_cover(Z2_4, {a: 1 for a in OCTIC_ALPHAS}, claim=16)


def campedelli() -> CoverSpec:
    return plane_cover(GroupType((2, 2, 2)), {a: 1 for a in CAMPEDELLI_ALPHAS})


def degree16_blowup(lines) -> CoverSpec:
    return arrangement_cover(Z2_4, arrangement(lines), OCTIC_ALPHAS)


def five_line_cover() -> CoverSpec:
    return plane_cover(GroupType((5, 5)), {a: 1 for a in FIVE_LINE_ALPHAS})


def nine_line_cover(n: int) -> CoverSpec:
    return arrangement_cover(GroupType((3, 3)), nine_line_arrangement(n), NINE_LINE_ALPHAS)


# --- low-degree families, as (moduli, {character: degree}) in the equations' own group --------

FAMILIES: dict[int, list[tuple[str, tuple[int, ...], dict[tuple[int, ...], int]]]] = {
    2: [("z^2 = h", (2,), {(1,): 8})],
    3: [
        ("z^3 = c1^2", (3,), {(2,): 6}),
        ("z^3 = c2", (3,), {(1,): 6}),
    ],
    4: [
        ("z^4 = a1^2 b2^3", (4,), {(2,): 2, (3,): 4}),
        ("z1^2 = b1, z2^2 = b2", (2, 2), {(1, 0): 4, (0, 1): 4}),
    ],
    6: [("z1^2 = a1 a2, z2^3 = a2 a3^2", (2, 3), {(1, 0): 2, (1, 1): 2, (0, 2): 2})],
    8: [
        (
            "z1^2 = l1 l2 l7 l8, z2^2 = l3 l4 l7 l8, z3^2 = l5 l6 l7 l8",
            (2, 2, 2),
            {(1, 0, 0): 2, (0, 1, 0): 2, (0, 0, 1): 2, (1, 1, 1): 2},
        ),
        (
            "z1^2 = a1 a4, z2^2 = a2 a4, z3^2 = a3 a4",
            (2, 2, 2),
            {(1, 0, 0): 2, (0, 1, 0): 2, (0, 0, 1): 2, (1, 1, 1): 2},
        ),
        ("z1^2 = a1 a2, z2^4 = a2^3 a3", (2, 4), {(1, 0): 2, (1, 3): 2, (0, 1): 2}),
    ],
    9: [("z1^3 = a1 a2^2, z2^3 = a1 a2 a3", (3, 3), {(1, 1): 2, (2, 1): 2, (0, 1): 2})],
}

# published family counts; one degree-8 listing omits the l1 l2 l7 l8 family, which has
# the same branch data as the a1 a4 family
FAMILIES_LISTED_IN_BODY = {2: 1, 3: 2, 4: 2, 6: 1, 8: 2, 9: 1}


def family_branch_data(moduli, x) -> tuple[GroupType, dict[Element, int]]:
    """Convert a family's branch data to invariant-factor form."""
    G, iso = normalize(moduli)
    out: dict[Element, int] = {}
    for a, v in x.items():
        b = iso(a)
        out[b] = out.get(b, 0) + v
    return G, out


# the four listed Z_2^4 solution sets (distinguished element, characters of degree one)
LISTED_Z2_4_SETS = [
    ((1, 0, 0, 0), [(1, 1, 0, 1), (1, 1, 1, 0), (1, 0, 1, 1), (1, 0, 1, 0), (1, 0, 0, 1), (1, 0, 0, 0), (1, 1, 1, 1), (1, 1, 0, 0)]),
    ((1, 1, 0, 0), [(0, 1, 1, 1), (1, 0, 1, 1), (0, 1, 1, 0), (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 0, 0), (1, 0, 0, 0), (0, 1, 0, 1)]),
    # printed with (0,1,0,1) in both lists and (1,0,1,0) in neither; (0,1,0,1) is the consistent reading
    ((1, 1, 1, 0), [(1, 1, 1, 0), (0, 1, 0, 1), (1, 0, 0, 1), (0, 1, 0, 0), (1, 0, 0, 0), (1, 1, 1, 1), (0, 0, 1, 0), (0, 0, 1, 1)]),
    ((1, 1, 1, 1), [(0, 1, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0), (1, 0, 1, 1), (0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]),
]
