"""Slow reference enumerations that share no code with the solver's search."""

from __future__ import annotations

from .cover import l_degrees, plane_cover
from .groups import Element, GroupType


def brute_force_solutions(G: GroupType, gprime: Element) -> list[dict[Element, int]]:
    """All branch data on ``G`` whose cover has ``l_g' = 4`` and ``l_g = 2`` elsewhere.

    Walks every nonnegative ``x`` satisfying ``sum_alpha alpha_i x_alpha = n_i l_{e_i}``
    in plain element order, with no bound beyond the remaining right-hand
    sides, then recomputes the whole l-table for each candidate.
    """
    target = {g: (0 if g == G.identity else 4 if g == gprime else 2) for g in G.elements}
    rhs = [n * target[G.basis(i)] for i, n in enumerate(G.factors)]
    variables = list(G.nonzero)
    found = []

    def walk(j: int, remaining: list[int], x: dict):
        if j == len(variables):
            if any(remaining):
                return
            if l_degrees(plane_cover(G, x)) == target:
                found.append(dict(x))
            return
        alpha = variables[j]
        v = 0
        while all(r - v * a >= 0 for r, a in zip(remaining, alpha)):
            if v:
                x[alpha] = v
            walk(j + 1, [r - v * a for r, a in zip(remaining, alpha)], x)
            x.pop(alpha, None)
            v += 1

    walk(0, rhs, {})
    return sorted(found, key=lambda x: tuple(x.get(a, 0) for a in variables))
