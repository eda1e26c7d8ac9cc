"""Report values behind each CLI command, plus their text rendering.

Every builder returns a plain JSON-ready dict whose content depends only on
its inputs.  Wall-clock timings are returned separately so the JSON body
stays byte-identical across runs and worker counts.
"""

from __future__ import annotations

import time
from typing import Sequence

from . import __version__, cover, geometry
from .cover import CoverSpec
from .geometry import LineArrangement, _fmt
from .groups import Element, GroupType, enumerate_groups
from .solver import DEFAULT_NODE_CAP, classify_order, dedup, sweep


def envelope(command: Sequence[str], results, status: str = "ok") -> dict:
    return {"command": list(command), "version": __version__, "status": status, "results": results}


def _el(g: Element) -> str:
    return "(" + ",".join(map(str, g)) + ")"


# --- groups -------------------------------------------------------------------------


def groups_report(order: int) -> dict:
    return {"order": order, "groups": [G.to_json() for G in enumerate_groups(order)]}


def render_groups(rep: dict) -> str:
    lines = [f"abelian groups of order {rep['order']}: {len(rep['groups'])}"]
    for g in rep["groups"]:
        lines.append("  " + (" + ".join(f"Z{n}" for n in g["factors"]) or "trivial group"))
    return "\n".join(lines)


# --- solve ----------------------------------------------------------------------------


def solve_report(
    order: int,
    groups: Sequence[GroupType] | None = None,
    *,
    do_dedup: bool = False,
    require_generating: bool = False,
    jobs: int = 1,
    node_cap: int = DEFAULT_NODE_CAP,
) -> tuple[dict, dict]:
    t0 = time.perf_counter()
    c = classify_order(order, groups=groups, require_generating=require_generating, jobs=jobs, node_cap=node_cap)
    entries = []
    for G, recs in c.records.items():
        entry = {
            "group": G.to_json(),
            "cells": G.order - 1,
            "solutions": len(recs),
            "filtered_disconnected": c.filtered_out[G],
            "status": "SOLVABLE" if recs else "INFEASIBLE",
        }
        if do_dedup:
            dd = dedup(G, recs)
            recs = dd.records
            entry["dedup_supported"] = dd.supported
            entry["orbits"] = len(dd.orbits)
            entry["representatives"] = [r.to_json() for r in dd.representatives]
        entry["records"] = [r.to_json() for r in recs]
        entries.append(entry)
    body = {
        "order": order,
        "groups": entries,
        "solvable": c.solvable,
        "status": "SOLVABLE" if c.solvable else "INFEASIBLE",
    }
    timing = {"total_seconds": time.perf_counter() - t0, "per_group": {str(G): s for G, s in c.seconds.items()}}
    return body, timing


def render_solve(rep: dict) -> str:
    out = [f"order {rep['order']}: {rep['status']}"]
    for e in rep["groups"]:
        name = " + ".join(f"Z{n}" for n in e["group"]["factors"])
        line = f"  {name:<22} {e['status']:<11} solutions={e['solutions']}"
        if "orbits" in e:
            line += f" orbits={e['orbits']}" + ("" if e["dedup_supported"] else " (no dedup: not elementary abelian)")
        if e["filtered_disconnected"]:
            line += f" filtered={e['filtered_disconnected']}"
        out.append(line)
        shown = e.get("representatives") if "orbits" in e else e["records"]
        for r in shown:
            xs = " ".join(f"x({k})={v}" for k, v in r["x"].items())
            tag = f"[orbit {r['orbit']}] " if r["orbit"] is not None else ""
            out.append(f"      {tag}g'=({','.join(map(str, r['gprime']))}): {xs}")
    return "\n".join(out)


# --- sweep ------------------------------------------------------------------------------


def sweep_report(d_min: int, d_max: int, *, jobs: int = 1, node_cap: int = DEFAULT_NODE_CAP) -> tuple[dict, dict]:
    rows = sweep(d_min, d_max, jobs=jobs, node_cap=node_cap)
    body = {
        "range": [d_min, d_max],
        "rows": [
            {"order": r.order, "groups": r.groups, "cells": r.cells, "solutions": r.solutions, "solvable": r.solvable}
            for r in rows
        ],
        "solvable_orders": [r.order for r in rows if r.solvable],
    }
    timing = {str(r.order): r.seconds for r in rows}
    return body, timing


def render_sweep(rep: dict, timing: dict | None = None) -> str:
    out = [f"{'order':>5} {'groups':>6} {'cells':>6} {'solutions':>9}  verdict" + ("    seconds" if timing else "")]
    for r in rep["rows"]:
        line = f"{r['order']:>5} {r['groups']:>6} {r['cells']:>6} {r['solutions']:>9}  "
        line += "SOLVABLE  " if r["solvable"] else "infeasible"
        if timing:
            line += f" {timing[str(r['order'])]:>9.2f}"
        out.append(line)
    out.append("solvable orders: " + (", ".join(map(str, rep["solvable_orders"])) or "none"))
    return "\n".join(out)


# --- invariants ---------------------------------------------------------------------------


def invariants_report(spec: CoverSpec) -> dict:
    table = cover.l_table(spec)
    inv = cover.invariants(spec)
    rep = {
        "group": spec.group.to_json(),
        "base_points": spec.t,
        "components": [
            {"class": c.cls.to_json(), "alpha": list(c.alpha), "label": c.label,
             "ramification": cover.ramification(spec.group, c.alpha)}
            for c in spec.components
        ],
        "l_table": {",".join(map(str, g)): L.to_json() for g, L in table.items()},
        "invariants": inv.to_json(),
        "possibly_disconnected": spec.possibly_disconnected(),
    }
    if spec.on_plane:
        rep["pushforward_degrees"] = cover.pushforward_degrees(spec)
        rep["canonical_test"] = cover.canonical_test(spec).to_json()
    else:
        rep["blown_up_points"] = [[_fmt(a) for a in p] for p in spec.points or ()]
    return rep


def render_invariants(rep: dict) -> str:
    inv = rep["invariants"]
    out = [f"group {' + '.join(f'Z{n}' for n in rep['group']['factors'])}, base blown up at {rep['base_points']} point(s)"]
    out.append("L_g table:")
    for g, L in rep["l_table"].items():
        cls = L["h"] if not L["e"] else f"{L['h']}; {', '.join(map(str, L['e']))}"
        out.append(f"  g=({g}): ({cls})")
    if "pushforward_degrees" in rep:
        out.append(f"pushforward degrees: {rep['pushforward_degrees']}")
    K = inv["K_class"]
    out.append(f"p_g={inv['p_g']} q={inv['q']} chi={inv['chi']} K^2={inv['K2']} "
               f"K=({K['h']}{'; ' + ', '.join(map(str, K['e'])) if K['e'] else ''})")
    out.append("plurigenera: " + " ".join(f"p_{m}={v if v is not None else 'not computed'}"
                                          for m, v in inv["plurigenera"].items()))
    if "canonical_test" in rep:
        ct = rep["canonical_test"]
        out.append(f"canonical pattern: {'yes' if ct['is_canonical_pattern'] else 'no'}")
        out.extend(f"  - {d}" for d in ct["diagnostics"])
        out.append(f"  not checked: {', '.join(ct['not_checked'])}")
    out.extend(f"warning: {w}" for w in inv["warnings"])
    return "\n".join(out)


# --- arrangements ---------------------------------------------------------------------------


def arrangement_report(
    arr: LineArrangement,
    group: GroupType | None = None,
    alphas: Sequence[Element] | None = None,
    min_multiplicity: int = 3,
) -> dict:
    mps = geometry.multiple_points(arr)
    mmax = max((m.multiplicity for m in mps), default=0)
    rep = {
        "lines": len(arr),
        "multiple_points": [m.to_json() for m in mps],
        "counts": {str(k): sum(1 for m in mps if m.multiplicity == k) for k in sorted({m.multiplicity for m in mps})},
        "max_multiplicity": mmax,
        "degree16_admissible": mmax <= 3,
    }
    if group is not None and alphas is not None:
        centers = [m for m in mps if m.multiplicity >= min_multiplicity]
        chars = []
        for m in centers:
            beta = cover.exceptional_characters(group, arr, alphas, m)
            entry = {"point": [_fmt(a) for a in m.point], "character": list(beta), "branched": any(beta)}
            if any(beta):
                entry["ramification"] = cover.ramification(group, beta)
            chars.append(entry)
        spec = cover.arrangement_cover(group, arr, alphas, min_multiplicity=min_multiplicity)
        K = cover.canonical_pullback_class(spec)
        K2 = group.order * geometry.intersect(K, K)
        rep["exceptional_characters"] = chars
        rep["canonical_class"] = K.to_json()
        rep["K2"] = _fmt(K2)
        rep["K_is_pullback_of_H"] = K == geometry.DivisorClass.hyperplane(spec.t)
    return rep


def render_arrangement(rep: dict) -> str:
    out = [f"{rep['lines']} lines, {len(rep['multiple_points'])} multiple points "
           f"({', '.join(f'{v} of multiplicity {k}' for k, v in rep['counts'].items())})"]
    for m in rep["multiple_points"]:
        if m["multiplicity"] > 2:
            out.append(f"  ({':'.join(map(str, m['point']))}) lines {[i + 1 for i in m['lines']]} multiplicity {m['multiplicity']}")
    out.append(f"max multiplicity {rep['max_multiplicity']}: "
               + ("admissible for degree 16 (at most triple points)" if rep["degree16_admissible"] else "inadmissible for degree 16"))
    if "canonical_class" in rep:
        for c in rep["exceptional_characters"]:
            state = f"branched, e={c['ramification']}" if c["branched"] else "unbranched"
            out.append(f"  E over ({':'.join(map(str, c['point']))}): character {tuple(c['character'])} {state}")
        K = rep["canonical_class"]
        out.append(f"canonical class on the blow-up: ({K['h']}{'; ' + ', '.join(map(str, K['e'])) if K['e'] else ''})"
                   f", K^2 = {rep['K2']}" + (" (pullback of H)" if rep["K_is_pullback_of_H"] else ""))
    return "\n".join(out)
