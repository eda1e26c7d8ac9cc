"""Abelian covers of the plane and of its blow-ups.

A cover with group ``G`` is described by its reduced branch components, each
carrying a divisor class and a character ``alpha`` in ``G`` (the exponent
vector with which the component enters the defining equations
``z_i^{n_i} = f_i``).  From this the pushforward of the structure sheaf splits
as a sum of line bundles ``O(-L_g)``, one per ``g`` in ``G``, and every
invariant below is computed from that splitting.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import geometry
from .geometry import DivisorClass, LineArrangement, MultiplePoint, Point
from .groups import Element, GroupType

BranchData = dict  # {alpha: degree}, alpha a nonzero element; absent keys are 0


class DivisibilityError(ValueError):
    """The branch divisor of some equation is not divisible by its modulus."""

    def __init__(self, index: int, coordinate: str, value: Fraction, modulus: int):
        self.index = index
        self.coordinate = coordinate
        super().__init__(
            f"branch divisor D_{index + 1} has {coordinate}-coefficient {value}, "
            f"not divisible by n_{index + 1} = {modulus}"
        )


class RealizationRequired(ValueError):
    """Cohomology on a blow-up needs the actual blown-up points."""


@dataclass(frozen=True)
class BranchComponent:
    cls: DivisorClass
    alpha: Element
    label: str = ""


@dataclass(frozen=True)
class CoverSpec:
    """Group, base surface and branch components of an abelian cover.

    ``t`` is the number of blown-up points (0 for the plane).  ``points``
    holds their coordinates and is required for cohomology on a blow-up.
    """

    group: GroupType
    components: tuple[BranchComponent, ...]
    t: int = 0
    points: tuple[Point, ...] | None = None
    canonical_degree_claim: int | None = None
    arrangement: LineArrangement | None = field(default=None, compare=False)

    def __post_init__(self):
        G = self.group
        object.__setattr__(self, "components", tuple(self.components))
        for comp in self.components:
            alpha = G.check(comp.alpha)
            if alpha == G.identity:
                raise ValueError("a branch component cannot carry the trivial character")
            if comp.cls.t != self.t:
                raise ValueError(f"component class {comp.cls} does not live on a {self.t}-point blow-up")
            if comp.cls.h.denominator != 1 or comp.cls.h < 0 or not comp.cls.is_integral():
                raise ValueError(f"component class {comp.cls} must be integral with h >= 0")
        if self.points is not None and len(self.points) != self.t:
            raise ValueError("number of blown-up points does not match t")
        _l_basis(self)  # divisibility check

    @property
    def degree(self) -> int:
        return self.group.order

    @property
    def on_plane(self) -> bool:
        return self.t == 0

    def branch_data(self) -> BranchData:
        """Degrees of the branch curve per character (plane base only)."""
        out: Counter = Counter()
        for comp in self.components:
            out[comp.alpha] += int(comp.cls.h)
        return dict(sorted(out.items()))

    def possibly_disconnected(self) -> bool:
        support = sorted({c.alpha for c in self.components})
        return len(self.group.generated_subgroup(support)) < self.group.order


def plane_cover(G: GroupType, x: Mapping[Sequence[int], int], claim: int | None = None) -> CoverSpec:
    """Cover of the plane with one component of degree ``x[alpha]`` per character."""
    comps = []
    for alpha, deg in sorted((G.check(a), int(d)) for a, d in x.items()):
        if deg < 0:
            raise ValueError(f"negative branch degree for {alpha}")
        if deg:
            comps.append(BranchComponent(DivisorClass(deg), alpha))
    return CoverSpec(G, tuple(comps), canonical_degree_claim=claim)


def exceptional_characters(
    G: GroupType, arrangement: LineArrangement, alphas: Sequence[Element], point: MultiplePoint
) -> Element:
    """Character of the exceptional curve over ``point``: sum of the incident characters."""
    if len(alphas) != len(arrangement):
        raise ValueError("need one character per line")
    total = G.identity
    for i in sorted(point.incident):
        total = G.add(total, alphas[i])
    return total


def arrangement_cover(
    G: GroupType,
    arrangement: LineArrangement,
    alphas: Sequence[Sequence[int]],
    *,
    min_multiplicity: int = 3,
    extra: Sequence[BranchComponent] = (),
    claim: int | None = None,
) -> CoverSpec:
    """Pull a line-arrangement cover back to the blow-up of its high-multiplicity points.

    Points of multiplicity ``>= min_multiplicity`` are blown up.  The branch
    components are the strict transforms of the lines plus every exceptional
    curve whose character is nontrivial.  ``extra`` components (given as
    classes on the blow-up) are appended unchanged.
    """
    alphas = [G.check(a) for a in alphas]
    if len(alphas) != len(arrangement):
        raise ValueError(f"{len(arrangement)} lines but {len(alphas)} characters")
    centers = [mp for mp in geometry.multiple_points(arrangement) if mp.multiplicity >= min_multiplicity]
    t = len(centers)
    comps = []
    for i, alpha in enumerate(alphas):
        if alpha == G.identity:
            continue
        e = tuple(-1 if i in mp.incident else 0 for mp in centers)
        comps.append(BranchComponent(DivisorClass(1, e), alpha, f"line {i + 1}"))
    for s, mp in enumerate(centers):
        beta = exceptional_characters(G, arrangement, alphas, mp)
        if beta != G.identity:
            comps.append(BranchComponent(DivisorClass.exceptional(s, t), beta, f"E{s + 1}"))
    comps.extend(extra)
    return CoverSpec(
        G,
        tuple(comps),
        t=t,
        points=tuple(mp.point for mp in centers),
        canonical_degree_claim=claim,
        arrangement=arrangement,
    )


# --- the L_g calculus -----------------------------------------------------------------


def c_coeff(G: GroupType, g: Sequence[int], alpha: Sequence[int]) -> int:
    """``floor(sum_i g_i alpha_i / n_i)``, the floor taken over the whole sum."""
    N = G.exponent
    num = sum(a * b * (N // n) for a, b, n in zip(g, alpha, G.factors))
    return num // N


def _l_basis(spec: CoverSpec) -> list[DivisorClass]:
    """``L_{e_i} = D_i / n_i``, checking that each division is exact."""
    G = spec.group
    out = []
    for i, n in enumerate(G.factors):
        D = DivisorClass.zero(spec.t)
        for comp in spec.components:
            if comp.alpha[i]:
                D = D + comp.alpha[i] * comp.cls
        for name, val in zip(["h"] + [f"E{s + 1}" for s in range(spec.t)], D.coords()):
            if val % n:
                raise DivisibilityError(i, name, val, n)
        out.append(D / n)
    return out


def l_table(spec: CoverSpec) -> dict[Element, DivisorClass]:
    """``L_g = sum_i g_i L_{e_i} - sum_alpha floor(<g, alpha>) D_alpha`` for every g."""
    G = spec.group
    basis = _l_basis(spec)
    table = {}
    for g in G.elements:
        L = DivisorClass.zero(spec.t)
        for gi, Le in zip(g, basis):
            if gi:
                L = L + gi * Le
        for comp in spec.components:
            c = c_coeff(G, g, comp.alpha)
            if c:
                L = L - c * comp.cls
        table[g] = L
    return table


def l_degrees(spec: CoverSpec) -> dict[Element, int]:
    """Degrees ``l_g`` of the summands for a cover of the plane."""
    if not spec.on_plane:
        raise ValueError("l_degrees is only defined on the plane; use l_table directly")
    return {g: int(L.h) for g, L in l_table(spec).items()}


def pushforward_degrees(spec: CoverSpec) -> list[int]:
    """Sorted degrees ``-l_g`` of the line bundles in the pushforward."""
    if not spec.on_plane:
        raise ValueError("pushforward degrees need a plane base; use l_table directly")
    return sorted(-l for l in l_degrees(spec).values())


def ramification(G: GroupType, alpha: Sequence[int]) -> int:
    """Ramification index ``|G| / d_P`` over a component with character ``alpha``."""
    alpha = G.check(alpha)
    if alpha == G.identity:
        raise ValueError("not a branch character: alpha is the identity")
    order = G.order
    d_P = math.gcd(order, *(order * a // n for a, n in zip(alpha, G.factors)))
    return order // d_P


def canonical_pullback_class(spec: CoverSpec) -> DivisorClass:
    """Rational class on the base whose pullback is the canonical class of the cover."""
    K = geometry.canonical_class(spec.t)
    for comp in spec.components:
        e = ramification(spec.group, comp.alpha)
        K = K + (1 - Fraction(1, e)) * comp.cls
    return K


# --- cohomology --------------------------------------------------------------------


def _as_class(spec: CoverSpec, D) -> DivisorClass:
    if isinstance(D, DivisorClass):
        return D
    return DivisorClass(D, (0,) * spec.t)


def _base_h(spec: CoverSpec, D: DivisorClass, i: int) -> int:
    if spec.on_plane:
        return (geometry.h0_plane, geometry.h1_plane, geometry.h2_plane)[i](int(D.h))
    if spec.points is None:
        raise RealizationRequired("geometric realization required: blow-up base without explicit points")
    return (geometry.h0_class, geometry.h1_class, geometry.h2_class)[i](D, spec.points)


def _base_chi(spec: CoverSpec, D: DivisorClass) -> int:
    if spec.on_plane:
        return geometry.chi_plane(int(D.h))
    return geometry.chi_class(D)


def hi_cover(spec: CoverSpec, D, i: int) -> int:
    """``h^i`` of the pullback of ``D``: the sum of ``h^i(D - L_g)`` over ``g``."""
    if i not in (0, 1, 2):
        raise ValueError("i must be 0, 1 or 2")
    D = _as_class(spec, D)
    return sum(_base_h(spec, D - L, i) for L in l_table(spec).values())


@dataclass
class SurfaceInvariants:
    p_g: int
    q: int
    chi: int
    K_class: DivisorClass
    K_selfint: Fraction
    plurigenera: dict[int, int | None]
    warnings: list[str]

    def to_json(self) -> dict:
        return {
            "p_g": self.p_g,
            "q": self.q,
            "chi": self.chi,
            "K_class": self.K_class.to_json(),
            "K2": geometry._fmt(self.K_selfint),
            "plurigenera": {str(m): v for m, v in self.plurigenera.items()},
            "warnings": list(self.warnings),
        }


def invariants(spec: CoverSpec, max_m: int = 5) -> SurfaceInvariants:
    table = l_table(spec)
    zero = DivisorClass.zero(spec.t)
    chi = sum(_base_chi(spec, -L) for L in table.values())
    p_g = hi_cover(spec, zero, 2)
    if spec.on_plane:
        q = hi_cover(spec, zero, 1)
    else:
        q = sum(
            _base_h(spec, -L, 0) + _base_h(spec, -L, 2) - _base_chi(spec, -L) for L in table.values()
        )
    K = canonical_pullback_class(spec)
    K2 = spec.group.order * geometry.intersect(K, K)
    warnings = []
    if K2.denominator != 1:
        warnings.append(f"K^2 = {K2} is not an integer")
    warnings.append("K^2 computed as |G| (K_base + ramification)^2; minimality and nefness not checked")
    plurigenera: dict[int, int | None] = {}
    usable = K.is_integral() and K.h >= 0
    if not usable:
        warnings.append("plurigenera not computed: canonical class is not a pullback of an integral class")
    for m in range(2, max_m + 1):
        plurigenera[m] = hi_cover(spec, m * K, 0) if usable else None
    if spec.possibly_disconnected():
        warnings.append("possibly disconnected: branch characters do not generate the group")
    return SurfaceInvariants(p_g, q, chi, K, K2, plurigenera, warnings)


# --- canonical pattern test ------------------------------------------------------------


NOT_CHECKED = ("base-point-freeness of |K|", "minimality")


@dataclass
class CanonicalVerdict:
    is_canonical_pattern: bool
    diagnostics: list[str]
    not_checked: tuple[str, ...] = NOT_CHECKED

    def to_json(self) -> dict:
        return {
            "is_canonical_pattern": self.is_canonical_pattern,
            "diagnostics": list(self.diagnostics),
            "not_checked": list(self.not_checked),
        }


def canonical_pattern(d: int) -> list[int]:
    """Pushforward degrees of ``O + O(-2)^(d-2) + O(-4)``, sorted."""
    return sorted([0] + [-2] * (d - 2) + [-4])


def canonical_test(spec: CoverSpec) -> CanonicalVerdict:
    if not spec.on_plane:
        raise ValueError("canonical_test needs a plane base")
    d = spec.degree
    diagnostics = []
    push = pushforward_degrees(spec)
    ok_push = d >= 2 and push == canonical_pattern(d)
    if not ok_push:
        diagnostics.append(f"pushforward degrees {push} differ from the canonical pattern {canonical_pattern(d)}")
    k = canonical_pullback_class(spec).h
    ok_k = k == 1
    if not ok_k:
        diagnostics.append(f"canonical pullback degree is {geometry._fmt(k)}, not 1")
    if spec.canonical_degree_claim is not None and spec.canonical_degree_claim != d:
        diagnostics.append(f"claimed canonical degree {spec.canonical_degree_claim} differs from |G| = {d}")
    return CanonicalVerdict(ok_push and ok_k, diagnostics)
