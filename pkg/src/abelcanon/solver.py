"""Exhaustive search for branch data whose cover has the canonical pattern.

For a group ``G`` and a distinguished nonzero ``g'``, the cover of the plane
has pushforward ``O + O(-2)^(d-2) + O(-4)`` with the ``O(-4)`` summand at
``g'`` exactly when the branch degrees ``x_alpha`` solve a linear system with
nonnegative integer coefficients.  The system is solved completely by a
depth-first search with residual bounds.
"""

from __future__ import annotations

import contextlib
import functools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import cover
from .groups import Element, GroupType, UnsupportedGroupError, automorphisms, enumerate_groups

DEFAULT_NODE_CAP = 10**9

# test hook: when set, every search bound is lowered by one
_BROKEN_PRUNING = False


class SearchCapExceeded(RuntimeError):
    """A search hit its node cap; its result would not be a proof of anything."""


@dataclass(frozen=True)
class TargetPattern:
    gprime: Element

    def l_value(self, g: Element) -> int:
        if not any(g):
            return 0
        return 4 if g == self.gprime else 2


@dataclass(frozen=True)
class FeasibilitySystem:
    """``A x = b`` over the nonzero elements, ``x >= 0`` integral.

    Rows come first for every nonzero ``g`` (``l_g`` equals its target), then
    one divisibility row per invariant factor.
    """

    group: GroupType
    pattern: TargetPattern
    vars: tuple[Element, ...]
    rows: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]
    labels: tuple[str, ...]

    def residuals(self, x: dict[Element, int]) -> list[int]:
        vec = [x.get(a, 0) for a in self.vars]
        return [b - sum(c * v for c, v in zip(row, vec)) for row, b in zip(self.rows, self.rhs)]

    def satisfied_by(self, x: dict[Element, int]) -> bool:
        return all(v >= 0 for v in x.values()) and not any(self.residuals(x))


@dataclass(frozen=True)
class SolutionRecord:
    group: GroupType
    gprime: Element
    x: tuple[tuple[Element, int], ...]  # sorted (alpha, degree) pairs with degree > 0
    orbit_id: int | None = None

    @property
    def branch_data(self) -> dict[Element, int]:
        return dict(self.x)

    def vector(self) -> tuple[int, ...]:
        d = dict(self.x)
        return tuple(d.get(a, 0) for a in self.group.nonzero)

    def sort_key(self):
        return (self.group.rank, self.group.factors, self.gprime, self.vector())

    def spec(self) -> cover.CoverSpec:
        return cover.plane_cover(self.group, self.branch_data)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "gprime": list(self.gprime),
            "x": {",".join(map(str, a)): v for a, v in self.x},
            "orbit": self.orbit_id,
        }


def build_system(G: GroupType, pattern: TargetPattern) -> FeasibilitySystem | None:
    """The linear system for ``(G, g')``, or ``None`` when some right-hand side is negative."""
    gprime = G.check(pattern.gprime)
    if gprime == G.identity:
        raise ValueError("the distinguished element must be nonzero")
    l_e = [pattern.l_value(G.basis(i)) for i in range(G.rank)]
    variables = G.nonzero
    rows, rhs, labels = [], [], []
    for g in G.nonzero:
        rows.append(tuple(cover.c_coeff(G, g, a) for a in variables))
        rhs.append(sum(gi * le for gi, le in zip(g, l_e)) - pattern.l_value(g))
        labels.append(f"l{g}")
    for i, n in enumerate(G.factors):
        rows.append(tuple(a[i] for a in variables))
        rhs.append(n * l_e[i])
        labels.append(f"div{i + 1}")
    if any(b < 0 for b in rhs):
        return None
    return FeasibilitySystem(G, pattern, variables, tuple(rows), tuple(rhs), tuple(labels))


def variable_order(sys: FeasibilitySystem) -> list[int]:
    """Most-constrained first: more rows with a positive coefficient, then lexicographic."""
    counts = [sum(1 for row in sys.rows if row[j] > 0) for j in range(len(sys.vars))]
    return sorted(range(len(sys.vars)), key=lambda j: (-counts[j], sys.vars[j]))


def enumerate_solutions(
    sys: FeasibilitySystem | None,
    *,
    prune: bool = True,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[dict[Element, int]]:
    """All nonnegative integer solutions, sorted lexicographically by value vector.

    With ``prune`` each variable's range is cut to the smallest
    ``residual // coefficient`` over its rows, and a variable that is the last
    one touching a row is forced to close that row.  Without it the bounds are
    static and rows are only checked at the leaves; use that for small orders.
    """
    if sys is None:
        return []
    nvars, nrows = len(sys.vars), len(sys.rows)
    order = variable_order(sys)
    cols = [[(r, sys.rows[r][j]) for r in range(nrows) if sys.rows[r][j] > 0] for j in order]
    res = list(sys.rhs)
    for r in range(nrows):
        if not any(sys.rows[r]) and res[r] != 0:
            return []
    # rows closed by the variable at each depth
    closing: list[list[tuple[int, int]]] = [[] for _ in range(nvars)]
    for r in range(nrows):
        depths = [d for d in range(nvars) if sys.rows[r][order[d]] > 0]
        if depths:
            closing[depths[-1]].append((r, sys.rows[r][order[depths[-1]]]))
    static_ub = [min(sys.rhs[r] // c for r, c in col) if col else 0 for col in cols]

    values = [0] * nvars
    found: list[tuple[int, ...]] = []
    nodes = 0
    broken = _BROKEN_PRUNING

    def dfs(depth: int):
        nonlocal nodes
        if depth == nvars:
            if prune or not any(res):
                found.append(tuple(values))
            return
        col = cols[depth]
        if prune:
            ub = min((res[r] // c for r, c in col), default=0)
            if broken and ub > 0:
                ub -= 1
            close = closing[depth]
            if close:
                r0, c0 = close[0]
                if res[r0] % c0:
                    return
                v = res[r0] // c0
                if v > ub:
                    return
                for r, c in close[1:]:
                    if res[r] != c * v:
                        return
                candidates: Sequence[int] = (v,)
            else:
                candidates = range(ub + 1)
        else:
            candidates = range(static_ub[depth] + 1)
        for v in candidates:
            nodes += 1
            if nodes > node_cap:
                raise SearchCapExceeded(
                    f"node cap {node_cap} exceeded for {sys.group} with g' = {sys.pattern.gprime}"
                )
            values[depth] = v
            if v:
                for r, c in col:
                    res[r] -= c * v
            dfs(depth + 1)
            if v:
                for r, c in col:
                    res[r] += c * v
        values[depth] = 0

    dfs(0)
    out = []
    for vals in found:
        vec = [0] * nvars
        for d, j in enumerate(order):
            vec[j] = vals[d]
        out.append(tuple(vec))
    out.sort()
    return [{sys.vars[j]: v for j, v in enumerate(vec) if v} for vec in out]


@contextlib.contextmanager
def broken_pruning():
    """Deliberately break the search bounds (fault injection for self-checks)."""
    global _BROKEN_PRUNING
    old = _BROKEN_PRUNING
    _BROKEN_PRUNING = True
    try:
        yield
    finally:
        _BROKEN_PRUNING = old


# --- classification ------------------------------------------------------------------


class VerificationError(AssertionError):
    pass


def verify_record(rec: SolutionRecord) -> None:
    """Recompute the cover from scratch and insist on the target pattern."""
    spec = rec.spec()
    degs = cover.l_degrees(spec)
    target = TargetPattern(rec.gprime)
    for g, l in degs.items():
        if l != target.l_value(g):
            raise VerificationError(f"{rec.group} g'={rec.gprime}: l_{g} = {l}, expected {target.l_value(g)}")
    verdict = cover.canonical_test(spec)
    if not verdict.is_canonical_pattern:
        raise VerificationError(f"{rec.group} g'={rec.gprime}: {verdict.diagnostics}")


@dataclass
class CellResult:
    group: GroupType
    gprime: Element
    solutions: list[dict[Element, int]]
    seconds: float


def solve_cell(G: GroupType, gprime: Element, node_cap: int = DEFAULT_NODE_CAP) -> CellResult:
    t0 = time.perf_counter()
    sols = enumerate_solutions(build_system(G, TargetPattern(gprime)), node_cap=node_cap)
    return CellResult(G, gprime, sols, time.perf_counter() - t0)


def _solve_cell_args(args):
    return solve_cell(*args)


def _run_cells(cells: list[tuple], jobs: int) -> Iterator[CellResult]:
    if jobs <= 1:
        yield from map(_solve_cell_args, cells)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            yield from pool.map(_solve_cell_args, cells, chunksize=1)


@dataclass
class Classification:
    order: int
    records: dict[GroupType, list[SolutionRecord]]
    seconds: dict[GroupType, float] = field(default_factory=dict)
    filtered_out: dict[GroupType, int] = field(default_factory=dict)

    @property
    def solvable(self) -> bool:
        return any(self.records.values())

    def all_records(self) -> list[SolutionRecord]:
        return [r for recs in self.records.values() for r in recs]


def classify_order(
    d: int,
    *,
    groups: Sequence[GroupType] | None = None,
    require_generating: bool = False,
    jobs: int = 1,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Classification:
    """Every solution for every group of order ``d`` and every nonzero ``g'``."""
    if d < 2:
        raise ValueError("order must be at least 2")
    groups = list(groups) if groups is not None else enumerate_groups(d)
    cells = [(G, g, node_cap) for G in groups for g in G.nonzero]
    result = Classification(d, {G: [] for G in groups}, {G: 0.0 for G in groups}, {G: 0 for G in groups})
    for cell in _run_cells(cells, jobs):
        result.seconds[cell.group] += cell.seconds
        for x in cell.solutions:
            rec = SolutionRecord(cell.group, cell.gprime, tuple(sorted(x.items())))
            verify_record(rec)
            if require_generating and rec.spec().possibly_disconnected():
                result.filtered_out[cell.group] += 1
                continue
            result.records[cell.group].append(rec)
    for G in groups:
        result.records[G].sort(key=SolutionRecord.sort_key)
    return result


@dataclass
class SweepRow:
    order: int
    groups: int
    cells: int
    solutions: int
    solvable: bool
    seconds: float


def sweep(d_min: int, d_max: int, *, jobs: int = 1, node_cap: int = DEFAULT_NODE_CAP) -> list[SweepRow]:
    if not 2 <= d_min <= d_max:
        raise ValueError("need 2 <= d_min <= d_max")
    rows = []
    for d in range(d_min, d_max + 1):
        c = classify_order(d, jobs=jobs, node_cap=node_cap)
        n = len(c.all_records())
        rows.append(
            SweepRow(d, len(c.records), sum(G.order - 1 for G in c.records), n, n > 0, sum(c.seconds.values()))
        )
    return rows


# --- deduplication under automorphisms ----------------------------------------------------


@dataclass
class DedupResult:
    records: list[SolutionRecord]
    orbits: list[list[SolutionRecord]]
    supported: bool

    @property
    def representatives(self) -> list[SolutionRecord]:
        return [orbit[0] for orbit in self.orbits]


@functools.lru_cache(maxsize=8)
def _perm_tables(G: GroupType):
    """Index permutations of the elements induced by every automorphism and its dual."""
    index = {g: i for i, g in enumerate(G.elements)}
    alpha_perm, g_perm = [], []
    for A in automorphisms(G):
        B = A.dual()
        alpha_perm.append([index[A(v)] for v in G.elements])
        g_perm.append([index[B(v)] for v in G.elements])
    return np.array(alpha_perm, dtype=np.int64), np.array(g_perm, dtype=np.int64)


def transform(rec: SolutionRecord, A) -> SolutionRecord:
    """Image of a record under ``alpha -> A alpha``, ``g' -> (A^T)^-1 g'``."""
    B = A.dual()
    x = tuple(sorted((A(a), v) for a, v in rec.x))
    return SolutionRecord(rec.group, B(rec.gprime), x)


def dedup(G: GroupType, records: Sequence[SolutionRecord]) -> DedupResult:
    """Partition records of one group into automorphism orbits.

    Orbit ids are numbered by the lexicographically smallest member, which is
    also the representative listed first.  For groups other than elementary
    abelian ones the records come back one per orbit with ``supported`` False.
    """
    records = sorted(records, key=SolutionRecord.sort_key)
    if not records:
        return DedupResult([], [], True)
    try:
        alpha_perm, g_perm = _perm_tables(G)
    except UnsupportedGroupError:
        recs = [SolutionRecord(r.group, r.gprime, r.x, i) for i, r in enumerate(records)]
        return DedupResult(recs, [[r] for r in recs], False)

    n = G.order
    index = {g: i for i, g in enumerate(G.elements)}
    key_of = {}
    for pos, r in enumerate(records):
        key_of[(index[r.gprime],) + _dense(r, index, n)] = pos
    parent = list(range(len(records)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for pos, r in enumerate(records):
        dense = np.array(_dense(r, index, n), dtype=np.int64)
        images = np.zeros((len(alpha_perm), n), dtype=np.int64)
        np.put_along_axis(images, alpha_perm, np.broadcast_to(dense, alpha_perm.shape), axis=1)
        gimg = g_perm[:, index[r.gprime]]
        for gi, row in zip(gimg.tolist(), images.tolist()):
            other = key_of.get((gi,) + tuple(row))
            if other is not None:
                a, b = find(pos), find(other)
                if a != b:
                    parent[max(a, b)] = min(a, b)

    groups: dict[int, list[int]] = {}
    for pos in range(len(records)):
        groups.setdefault(find(pos), []).append(pos)
    orbits, out = [], [None] * len(records)
    for oid, root in enumerate(sorted(groups)):
        members = []
        for pos in groups[root]:
            r = records[pos]
            out[pos] = SolutionRecord(r.group, r.gprime, r.x, oid)
            members.append(out[pos])
        orbits.append(members)
    return DedupResult(out, orbits, True)


def _dense(rec: SolutionRecord, index: dict, n: int) -> tuple[int, ...]:
    vec = [0] * n
    for a, v in rec.x:
        vec[index[a]] = v
    return tuple(vec)
