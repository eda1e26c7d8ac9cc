import itertools
from dataclasses import dataclass

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelcanon.cover import l_degrees, plane_cover
from abelcanon.groups import GroupType, automorphisms, enumerate_groups
from abelcanon.oracles import brute_force_solutions
from abelcanon.solver import (
    FeasibilitySystem,
    SearchCapExceeded,
    SolutionRecord,
    TargetPattern,
    broken_pruning,
    build_system,
    classify_order,
    dedup,
    enumerate_solutions,
    sweep,
    transform,
    verify_record,
)

Z2_4 = GroupType((2, 2, 2, 2))
SOLUTION_1 = [(1, 1, 0, 1), (1, 1, 1, 0), (1, 0, 1, 1), (1, 0, 1, 0), (1, 0, 0, 1), (1, 0, 0, 0), (1, 1, 1, 1), (1, 1, 0, 0)]


def solve(G, g):
    return enumerate_solutions(build_system(G, TargetPattern(g)))


def test_build_system_shape():
    sys = build_system(Z2_4, TargetPattern((1, 0, 0, 0)))
    assert len(sys.vars) == 15
    assert len(sys.rows) == 15 + 4
    assert all(b >= 0 for b in sys.rhs)


def test_build_system_zero_row_retained():
    G = GroupType((36,))
    sys = build_system(G, TargetPattern((1,)))
    i = sys.labels.index("l(1,)")
    assert not any(sys.rows[i])
    assert sys.rhs[i] == 0


@dataclass(frozen=True)
class HeavyPattern(TargetPattern):
    """A pattern demanding l_g = 6 somewhere, which forces a negative right-hand side."""

    heavy: tuple = ()

    def l_value(self, g):
        return 6 if g == self.heavy else super().l_value(g)


def test_negative_rhs_is_infeasible():
    # on Z3 with l_1 = 2 and l_2 = 6 the row for g = 2 has rhs 2 * 2 - 6 < 0
    assert build_system(GroupType((3,)), HeavyPattern((2,), heavy=(2,))) is None
    assert enumerate_solutions(None) == []


def test_build_system_rejects_identity():
    with pytest.raises(ValueError):
        build_system(GroupType((3,)), TargetPattern((0,)))


def test_listed_solution_set_is_found():
    sols = solve(Z2_4, (1, 0, 0, 0))
    assert {a: 1 for a in SOLUTION_1} in sols


def test_order36_cyclic_is_empty():
    G = GroupType((36,))
    for g in G.nonzero:
        assert solve(G, g) == []


def test_three_three_family():
    sols = solve(GroupType((3, 3)), (0, 2))
    assert {(1, 1): 2, (2, 1): 2, (0, 1): 2} in sols


def test_order_two():
    c = classify_order(2)
    (rec,) = c.all_records()
    assert rec.branch_data == {(1,): 8}


def test_order_nine():
    c = classify_order(9)
    assert c.records[GroupType((9,))] == []
    recs = c.records[GroupType((3, 3))]
    assert any(r.gprime == (0, 2) and r.branch_data == {(1, 1): 2, (2, 1): 2, (0, 1): 2} for r in recs)


@pytest.mark.parametrize("d", range(2, 10))
def test_brute_force_oracle_equivalence(d):
    for G in enumerate_groups(d):
        for g in G.nonzero:
            expected = brute_force_solutions(G, g)
            sys = build_system(G, TargetPattern(g))
            assert enumerate_solutions(sys) == expected
            if d <= 8:  # the unpruned search is slow beyond this
                assert enumerate_solutions(sys, prune=False) == expected


@pytest.mark.parametrize("d", [2, 3, 4, 6, 8, 9])
def test_every_solution_reverifies(d):
    c = classify_order(d)
    assert c.solvable
    for rec in c.all_records():
        verify_record(rec)
        degs = l_degrees(rec.spec())
        assert degs == {g: TargetPattern(rec.gprime).l_value(g) for g in rec.group.elements}


@pytest.mark.parametrize("d", [5, 7, 10, 11, 12])
def test_unsolvable_small_orders(d):
    assert not classify_order(d).solvable


def test_sweep_small_range():
    rows = sweep(2, 9)
    assert [r.order for r in rows if r.solvable] == [2, 3, 4, 6, 8, 9]
    assert [r.order for r in sweep(5, 5) if r.solvable] == []
    with pytest.raises(ValueError):
        sweep(5, 4)


def test_system_rows_equal_l_pattern():
    """A vector satisfies the system exactly when its cover has the target l-table."""
    G = GroupType((2, 2, 2))
    pattern = TargetPattern((1, 1, 1))
    sys = build_system(G, pattern)
    target = {g: pattern.l_value(g) for g in G.elements}
    checked = 0
    for vals in itertools.product(range(3), repeat=len(sys.vars)):
        x = {a: v for a, v in zip(sys.vars, vals) if v}
        if not x:
            continue
        try:
            spec = plane_cover(G, x)
        except ValueError:
            assert not sys.satisfied_by(x)
            continue
        checked += 1
        assert sys.satisfied_by(x) == (l_degrees(spec) == target)
    assert checked > 100


# --- the search on random systems against a box enumeration ---------------------------------


@st.composite
def small_systems(draw):
    nvars = draw(st.integers(1, 4))
    nrows = draw(st.integers(1, 4))
    rows = [tuple(draw(st.integers(0, 3)) for _ in range(nvars)) for _ in range(nrows)]
    # every variable needs a positive coefficient somewhere, as in the real systems
    bounding = tuple(draw(st.integers(1, 3)) for _ in range(nvars))
    rows.append(bounding)
    rhs = tuple(draw(st.integers(0, 8)) for _ in rows)
    G = GroupType((nvars + 1,)) if nvars + 1 > 1 else GroupType((2,))
    vars_ = tuple((i + 1,) for i in range(nvars))
    return FeasibilitySystem(G, TargetPattern((1,)), vars_, tuple(rows), rhs, tuple(f"r{i}" for i in range(len(rows))))


@given(small_systems())
@settings(max_examples=150, deadline=None)
def test_search_matches_box_enumeration(sys):
    bound = max(sys.rhs) + 1
    expected = []
    for vals in itertools.product(range(bound), repeat=len(sys.vars)):
        x = {a: v for a, v in zip(sys.vars, vals) if v}
        if sys.satisfied_by(x):
            expected.append(vals)
    expected.sort()
    expected = [{a: v for a, v in zip(sys.vars, vals) if v} for vals in expected]
    assert enumerate_solutions(sys) == expected
    assert enumerate_solutions(sys, prune=False) == expected


def test_node_cap_is_a_hard_error():
    sys = build_system(Z2_4, TargetPattern((1, 0, 0, 0)))
    with pytest.raises(SearchCapExceeded):
        enumerate_solutions(sys, node_cap=10)
    with pytest.raises(SearchCapExceeded):
        classify_order(16, groups=[Z2_4], node_cap=10)


def test_broken_pruning_loses_solutions():
    sys = build_system(Z2_4, TargetPattern((1, 0, 0, 0)))
    honest = enumerate_solutions(sys)
    with broken_pruning():
        broken = enumerate_solutions(sys)
    assert honest and len(broken) < len(honest)
    assert enumerate_solutions(sys) == honest


def test_parallel_results_identical():
    a = classify_order(8, jobs=1)
    b = classify_order(8, jobs=2)
    assert a.records == b.records


def test_require_generating_filter():
    c_all = classify_order(8)
    c_gen = classify_order(8, require_generating=True)
    for G in c_all.records:
        assert len(c_all.records[G]) == len(c_gen.records[G]) + c_gen.filtered_out[G]
        for rec in c_gen.records[G]:
            assert not rec.spec().possibly_disconnected()


# --- dedup ---------------------------------------------------------------------------------------


def test_dedup_single_record():
    rec = SolutionRecord(Z2_4, (1, 0, 0, 0), tuple(sorted((a, 1) for a in SOLUTION_1)))
    dd = dedup(Z2_4, [rec])
    assert len(dd.orbits) == 1 and dd.records[0].orbit_id == 0


def test_dedup_basis_swap():
    G = GroupType((2, 2))
    (swap,) = [A for A in automorphisms(G) if A.matrix == ((0, 1), (1, 0))]
    rec = SolutionRecord(G, (0, 1), (((0, 1), 4), ((1, 1), 4)))
    other = transform(rec, swap)
    assert other != rec
    assert other.gprime == (1, 0) and other.branch_data == {(1, 0): 4, (1, 1): 4}
    verify_record(rec)
    verify_record(other)
    assert len(dedup(G, [rec, other]).orbits) == 1


def test_dedup_order16_single_orbit():
    recs = classify_order(16, groups=[Z2_4]).records[Z2_4]
    dd = dedup(Z2_4, recs)
    assert len(dd.orbits) == 1
    assert len(dd.orbits[0]) == len(recs) == 15


def test_transform_preserves_solutions():
    recs = classify_order(8, groups=[GroupType((2, 2, 2))]).records[GroupType((2, 2, 2))]
    G = GroupType((2, 2, 2))
    auts = automorphisms(G)
    found = {(r.gprime, r.x) for r in recs}
    for rec in recs:
        for A in auts[::7]:
            img = transform(rec, A)
            verify_record(img)
            assert (img.gprime, img.x) in found


def test_dedup_unsupported_groups_flagged():
    recs = classify_order(6).records[GroupType((6,))]
    dd = dedup(GroupType((6,)), recs)
    assert not dd.supported
    assert len(dd.orbits) == len(recs)
