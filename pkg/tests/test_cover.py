from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelcanon import instances
from abelcanon.cover import (
    BranchComponent,
    CoverSpec,
    DivisibilityError,
    RealizationRequired,
    arrangement_cover,
    c_coeff,
    canonical_pullback_class,
    canonical_test,
    exceptional_characters,
    hi_cover,
    invariants,
    l_degrees,
    l_table,
    plane_cover,
    pushforward_degrees,
    ramification,
)
from abelcanon.geometry import DivisorClass, LineArrangement, chi_plane, intersect, multiple_points
from abelcanon.groups import GroupType, enumerate_groups

Z2_4 = GroupType((2, 2, 2, 2))
SOLUTION_1 = [(1, 1, 0, 1), (1, 1, 1, 0), (1, 0, 1, 1), (1, 0, 1, 0), (1, 0, 0, 1), (1, 0, 0, 0), (1, 1, 1, 1), (1, 1, 0, 0)]


def frac_oracle(G, x):
    """l_g = sum_alpha frac(<g, alpha>) x_alpha, with <g, alpha> = sum g_i alpha_i / n_i."""
    out = {}
    for g in G.elements:
        total = Fraction(0)
        for a, v in x.items():
            s = sum(Fraction(gi * ai, n) for gi, ai, n in zip(g, a, G.factors))
            total += (s - (s.numerator // s.denominator)) * v
        assert total.denominator == 1
        out[g] = int(total)
    return out


def test_c_coeff_examples():
    assert c_coeff(GroupType((36,)), (5,), (20,)) == 2
    assert c_coeff(GroupType((3, 3)), (1, 2), (2, 1)) == 1
    for a in Z2_4.nonzero:
        assert c_coeff(Z2_4, (1, 0, 0, 0), a) == 0


def test_l_table_examples():
    assert l_degrees(plane_cover(GroupType((3,)), {(1,): 6})) == {(0,): 0, (1,): 2, (2,): 4}
    assert l_degrees(plane_cover(GroupType((4,)), {(2,): 2, (3,): 4})) == {(0,): 0, (1,): 4, (2,): 2, (3,): 2}
    G = GroupType((3, 3))
    degs = l_degrees(plane_cover(G, {(1, 1): 2, (2, 1): 2, (0, 1): 2}))
    assert degs[(0, 2)] == 4
    assert all(v == 2 for g, v in degs.items() if g not in ((0, 0), (0, 2)))


def test_divisibility_error_names_index():
    with pytest.raises(DivisibilityError) as info:
        plane_cover(GroupType((2,)), {(1,): 3})
    assert info.value.index == 0
    assert "n_1 = 2" in str(info.value)
    with pytest.raises(DivisibilityError) as info:
        plane_cover(GroupType((2, 2)), {(1, 0): 2, (0, 1): 1, (1, 1): 2})
    assert info.value.index == 1


def test_trivial_character_rejected():
    with pytest.raises(ValueError):
        plane_cover(GroupType((2,)), {(0,): 2})


def test_pushforward_examples():
    assert pushforward_degrees(plane_cover(Z2_4, {a: 1 for a in SOLUTION_1})) == [-4] + [-2] * 14 + [0]
    assert pushforward_degrees(plane_cover(GroupType((2,)), {(1,): 8})) == [-4, 0]
    assert pushforward_degrees(plane_cover(GroupType((3,)), {(2,): 6})) == [-4, -2, 0]


def test_pushforward_rejects_blowup():
    with pytest.raises(ValueError, match="l_table"):
        pushforward_degrees(instances.degree16_blowup(instances.TRIPLE_8))


def test_ramification_examples():
    assert ramification(Z2_4, (1, 1, 1, 0)) == 2
    assert ramification(GroupType((5, 5)), (1, 2)) == 5
    assert ramification(GroupType((4,)), (2,)) == 2
    with pytest.raises(ValueError, match="not a branch character"):
        ramification(GroupType((4,)), (0,))


@pytest.mark.parametrize("n", [4, 6, 8, 9, 12, 16, 18, 36])
def test_ramification_is_element_order(n):
    for G in enumerate_groups(n):
        for a in G.nonzero:
            assert ramification(G, a) == G.element_order(a)


def test_hi_cover_examples():
    spec = plane_cover(Z2_4, {a: 1 for a in SOLUTION_1})
    assert hi_cover(spec, 0, 2) == 3
    camp = instances.campedelli()
    assert hi_cover(camp, 0, 2) == 0
    assert hi_cover(camp, 0, 1) == 0
    assert hi_cover(plane_cover(GroupType((3,)), {(1,): 6}), 0, 1) == 0


def test_invariants_degree16():
    inv = invariants(plane_cover(Z2_4, {a: 1 for a in SOLUTION_1}))
    assert canonical_pullback_class(plane_cover(Z2_4, {a: 1 for a in SOLUTION_1})) == DivisorClass(1, ())
    assert (inv.p_g, inv.q, inv.chi, inv.K_selfint) == (3, 0, 4, 16)
    assert inv.plurigenera[2] == 20
    assert any("minimality" in w for w in inv.warnings)


def test_invariants_campedelli():
    inv = invariants(instances.campedelli())
    assert (inv.p_g, inv.q, inv.chi, inv.K_selfint) == (0, 0, 1, 2)
    assert inv.K_class == DivisorClass(Fraction(1, 2), ())
    assert inv.plurigenera[2] is None
    assert any("plurigenera not computed" in w for w in inv.warnings)


def test_invariants_five_line_cover():
    inv = invariants(instances.five_line_cover())
    assert inv.chi == 5
    assert inv.K_selfint == 25


def test_canonical_test_examples():
    v = canonical_test(plane_cover(Z2_4, {a: 1 for a in SOLUTION_1}))
    assert v.is_canonical_pattern
    assert "minimality" in v.not_checked
    assert canonical_test(plane_cover(GroupType((2,)), {(1,): 8})).is_canonical_pattern
    v = canonical_test(plane_cover(GroupType((2,)), {(1,): 6}))
    assert not v.is_canonical_pattern
    assert pushforward_degrees(plane_cover(GroupType((2,)), {(1,): 6})) == [-3, 0]
    assert canonical_pullback_class(plane_cover(GroupType((2,)), {(1,): 6})).h == 0


def test_canonical_claim_mismatch_is_only_a_diagnostic():
    spec = plane_cover(GroupType((2,)), {(1,): 8}, claim=4)
    v = canonical_test(spec)
    assert v.is_canonical_pattern
    assert any("claimed" in d for d in v.diagnostics)


def test_exceptional_character_examples():
    arr = instances.arrangement(instances.TRIPLE_8)
    (triple,) = [mp for mp in multiple_points(arr) if mp.multiplicity == 3]
    assert sorted(triple.incident) == [0, 2, 3]
    beta = exceptional_characters(Z2_4, arr, instances.OCTIC_ALPHAS, triple)
    assert beta == (1, 0, 0, 0)
    assert ramification(Z2_4, beta) == 2
    two = LineArrangement(((1, 0, 0), (0, 1, 0)))
    (mp,) = multiple_points(two)
    G = GroupType((3,))
    assert exceptional_characters(G, two, [(1,), (2,)], mp) == (0,)
    three = LineArrangement(((1, 0, 0), (0, 1, 0), (1, 1, 0)))
    (mp,) = multiple_points(three)
    assert exceptional_characters(G, three, [(1,)] * 3, mp) == (0,)


def test_blowup_triple_point():
    spec = instances.degree16_blowup(instances.TRIPLE_8)
    K = canonical_pullback_class(spec)
    assert K == DivisorClass(1, (0,))
    assert 16 * intersect(K, K) == 16
    inv = invariants(spec)
    assert (inv.p_g, inv.q, inv.chi, inv.K_selfint) == (3, 0, 4, 16)


def test_blowup_fourfold_point():
    spec = instances.degree16_blowup(instances.QUADRUPLE_8)
    K = canonical_pullback_class(spec)
    assert K == DivisorClass(1, (Fraction(-1, 2),))
    assert 16 * intersect(K, K) == 12


def test_blowup_without_points_needs_realization():
    comps = (BranchComponent(DivisorClass(2, (0,)), (1,)),)
    spec = CoverSpec(GroupType((2,)), comps, t=1)
    with pytest.raises(RealizationRequired):
        hi_cover(spec, DivisorClass.zero(1), 0)


def test_blowup_at_generic_double_points_matches_plane():
    """Blowing up a double point of an unramified exceptional curve changes nothing numerically."""
    G = GroupType((2, 2))
    arr = instances.arrangement(instances.GENERIC_5[:4])
    alphas = [(1, 0), (1, 0), (0, 1), (0, 1)]
    plane = arrangement_cover(G, arr, alphas)
    blown = arrangement_cover(G, arr, alphas, min_multiplicity=2)
    assert plane.t == 0 and blown.t == 6
    a, b = invariants(plane), invariants(blown)
    assert (a.p_g, a.q, a.chi) == (b.p_g, b.q, b.chi)


@pytest.mark.parametrize("n,p_g", [(0, 8), (1, 7), (2, 6), (3, 5)])
def test_nine_line_covers(n, p_g):
    spec = instances.nine_line_cover(n)
    assert spec.t == n + 3
    assert hi_cover(spec, DivisorClass.zero(spec.t), 2) == p_g


# --- properties over random plane covers -------------------------------------------------

GROUPS = [G for n in range(2, 17) for G in enumerate_groups(n)]


@st.composite
def plane_specs(draw):
    G = draw(st.sampled_from(GROUPS))
    support = draw(st.lists(st.sampled_from(G.nonzero), min_size=1, max_size=4, unique=True))
    # scaling by the exponent makes every divisibility condition hold
    x = {a: G.exponent * draw(st.integers(1, 3)) for a in support}
    return plane_cover(G, x)


@given(plane_specs())
@settings(max_examples=80, deadline=None)
def test_l_table_matches_fractional_part_formula(spec):
    assert l_degrees(spec) == frac_oracle(spec.group, spec.branch_data())


@given(plane_specs())
@settings(max_examples=80, deadline=None)
def test_l_g_plus_l_minus_g(spec):
    G = spec.group
    degs = l_degrees(spec)
    assert degs[G.identity] == 0
    for g in G.nonzero:
        moving = sum(v for a, v in spec.branch_data().items() if _pairing_nonzero(G, g, a))
        assert degs[g] + degs[G.neg(g)] == moving


def _pairing_nonzero(G, g, a):
    return sum(gi * ai * (G.exponent // n) for gi, ai, n in zip(g, a, G.factors)) % G.exponent != 0


@given(plane_specs())
@settings(max_examples=80, deadline=None)
def test_sum_of_l_is_half_ramification_divisor(spec):
    G = spec.group
    total = sum(l_degrees(spec).values())
    ram = sum((1 - Fraction(1, ramification(G, a))) * v for a, v in spec.branch_data().items())
    assert total == Fraction(G.order, 2) * ram


@given(plane_specs())
@settings(max_examples=60, deadline=None)
def test_chi_identities_on_plane(spec):
    inv = invariants(spec, max_m=2)
    h0 = hi_cover(spec, 0, 0)
    assert inv.q == 0
    # h^0(O_X) counts connected components; it is 1 exactly when the characters generate G
    assert inv.chi == inv.p_g - inv.q + h0
    assert (h0 == 1) == (not spec.possibly_disconnected())
    if h0 == 1:
        assert inv.chi == inv.p_g - inv.q + 1
    assert inv.chi == sum(chi_plane(-l) for l in l_degrees(spec).values())
    K = canonical_pullback_class(spec)
    assert inv.K_selfint == spec.group.order * K.h ** 2


def test_l_table_blowup_restricts_to_plane_when_unbranched():
    spec = instances.degree16_blowup(instances.GENERIC_8)
    assert spec.t == 0
    table = l_table(spec)
    assert {g: int(L.h) for g, L in table.items()} == l_degrees(instances.degree16_plane())
