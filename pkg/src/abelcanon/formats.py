"""JSON reading and writing for groups, arrangements, cover specs and solutions.

Cover spec files look like::

    {"group": {"factors": [2, 2, 2]},
     "components": [{"degree": 2, "alpha": [1, 0, 0]}, ...],
     "arrangement": {"lines": [[1, 0, 0], ...], "alphas": [[1, 1, 1], ...]},
     "canonical_degree_claim": 8}

``components`` and ``arrangement`` are both optional but at least one must be
present.  Rational entries may be written as strings such as ``"2/3"``.  A
group given in a non-canonical form (``[2, 3]``) is converted to invariant
factors and every character is mapped along.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .cover import BranchComponent, CoverSpec, arrangement_cover
from .geometry import DivisorClass, LineArrangement, multiple_points
from .groups import GroupType, normalize


class SpecFormatError(ValueError):
    """Malformed input file."""


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_group(data) -> tuple[GroupType, Any]:
    """Group plus the map taking input characters to invariant-factor elements."""
    try:
        factors = data["factors"] if isinstance(data, dict) else data
        factors = [int(n) for n in factors]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"bad group: {data!r}") from exc
    if any(n < 1 for n in factors):
        raise SpecFormatError(f"bad group factors: {factors}")
    G, iso = normalize(factors)
    return G, iso


def load_arrangement(data: dict) -> LineArrangement:
    try:
        return LineArrangement.from_json(data)
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise SpecFormatError(f"bad arrangement: {exc}") from exc


def load_cover_spec(data: dict) -> CoverSpec:
    if not isinstance(data, dict) or "group" not in data:
        raise SpecFormatError("cover spec needs a 'group'")
    G, iso = parse_group(data["group"])
    claim = data.get("canonical_degree_claim")
    raw_components = data.get("components", [])
    arr_data = data.get("arrangement")
    if not raw_components and not arr_data:
        raise SpecFormatError("cover spec needs 'components' or an 'arrangement'")

    t = 0
    if arr_data:
        arrangement = load_arrangement(arr_data)
        min_mult = int(arr_data.get("min_multiplicity", 3))
        t = sum(1 for mp in multiple_points(arrangement) if mp.multiplicity >= min_mult)

    comps = []
    for c in raw_components:
        try:
            alpha = iso(c["alpha"])
            if "class" in c:
                cls = DivisorClass(c["class"]["h"], tuple(c["class"].get("e", [])))
            else:
                cls = DivisorClass(int(c["degree"]), (0,) * t)
        except (KeyError, TypeError) as exc:
            raise SpecFormatError(f"bad component {c!r}") from exc
        comps.append(BranchComponent(cls, alpha, c.get("label", "")))

    if arr_data:
        try:
            alphas = [iso(a) for a in arr_data["alphas"]]
        except KeyError as exc:
            raise SpecFormatError("arrangement in a cover spec needs 'alphas'") from exc
        return arrangement_cover(G, arrangement, alphas, min_multiplicity=min_mult, extra=comps, claim=claim)
    return CoverSpec(G, tuple(comps), canonical_degree_claim=claim)


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path}: {exc}") from exc


def cover_spec_to_json(spec: CoverSpec) -> dict:
    """Plane specs round-trip through ``load_cover_spec``."""
    if spec.on_plane:
        return {
            "group": spec.group.to_json(),
            "components": [{"degree": int(c.cls.h), "alpha": list(c.alpha)} for c in spec.components],
        }
    return {
        "group": spec.group.to_json(),
        "components": [
            {"class": c.cls.to_json(), "alpha": list(c.alpha), "label": c.label} for c in spec.components
        ],
    }
