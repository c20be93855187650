"""Instance and layout-report serialization."""
from __future__ import annotations

import json
from typing import Any, Mapping

from .cost import ChartLayout, link_costs
from .exceptions import InstanceError
from .model import LinkTable, SideSequences, WeightedGraph, validate_instance


def _plain(x: float):
    return int(x) if float(x).is_integer() else x


def _require(obj, key, where):
    if not isinstance(obj, Mapping):
        raise InstanceError(f"{where}: expected an object, got {type(obj).__name__}", obj)
    if key not in obj:
        raise InstanceError(f"{where}: missing field {key!r}", obj)
    return obj[key]


def instance_from_dict(data: Any) -> WeightedGraph:
    """Validated instance from the decoded JSON structure."""
    vertices = _require(data, "vertices", "instance")
    edges = _require(data, "edges", "instance")
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise InstanceError("instance: 'vertices' and 'edges' must be arrays", data)
    bars = []
    index = {}
    for i, vx in enumerate(vertices):
        where = f"vertices[{i}]"
        vid = _require(vx, "id", where)
        if not isinstance(vid, str):
            raise InstanceError(f"{where}.id: expected a string, got {vid!r}", vx)
        if vid in index:
            raise InstanceError(f"{where}.id: duplicate vertex id {vid!r}", vx)
        index[vid] = i
        bars.append((vid, _require(vx, "weight", where)))
    triples = []
    edge_ids = []
    for i, ed in enumerate(edges):
        where = f"edges[{i}]"
        ends = []
        for key in ("u", "v"):
            ref = _require(ed, key, where)
            if not isinstance(ref, str) or ref not in index:
                raise InstanceError(f"{where}.{key}: unknown vertex id {ref!r}", ed)
            ends.append(index[ref])
        triples.append((ends[0], ends[1], _require(ed, "weight", where)))
        edge_ids.append(ed.get("id"))
    try:
        g = validate_instance(bars, triples)
    except InstanceError as exc:
        raise InstanceError(f"instance: {exc}", exc.element) from None
    if any(e is not None for e in edge_ids):
        ids = [given if given is not None else default for given, default in zip(edge_ids, g.edge_ids)]
        g = validate_instance(bars, triples, ids)
    return g


def parse_instance(text: str) -> WeightedGraph:
    """Parse instance JSON; vertex array order is the bar order."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(data)


def instance_to_dict(g: WeightedGraph) -> dict:
    edges = []
    for e, (u, v) in enumerate(g.edges):
        item = {"u": g.ids[u], "v": g.ids[v], "weight": _plain(g.edge_weights[e])}
        if g.edge_ids[e] != f"{g.ids[u]}-{g.ids[v]}":
            item["id"] = g.edge_ids[e]
        edges.append(item)
    return {
        "vertices": [{"id": i, "weight": _plain(w)} for i, w in zip(g.ids, g.weights)],
        "edges": edges,
    }


def dump_instance(g: WeightedGraph) -> str:
    return json.dumps(instance_to_dict(g), indent=2) + "\n"


def layout_report(g: WeightedGraph, seq: SideSequences, table: LinkTable, layout: ChartLayout,
                  diagnostics: Mapping | None = None, stats: bool = False) -> dict:
    """Deterministic report: stackings, per-link type and cost, total, diagnostics."""
    costs = link_costs(seq, table, layout)
    links = []
    for rec in table:
        item = {
            "id": g.edge_ids[rec.edge],
            "u": g.ids[rec.u],
            "v": g.ids[rec.v],
            "type": rec.kind.value,
            "cost": _plain(costs[rec.edge]),
            "H": _plain(rec.H),
        }
        if rec.target is not None:
            item["target"] = _plain(rec.target)
        links.append(item)
    report = {
        "algorithm": layout.algorithm,
        "total_cost": _plain(layout.total_cost),
        "bars": [{"id": g.ids[j], "stacking": [g.edge_ids[e] for e in stacking]}
                 for j, stacking in enumerate(layout.stackings)],
        "links": links,
        "diagnostics": dict(diagnostics or {}),
    }
    if stats:
        report["stats"] = dict(layout.stats)
    return report


def dump_report(report: Mapping) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def format_table(report: Mapping) -> str:
    """Human-readable summary of a layout report."""
    lines = [f"algorithm: {report['algorithm']}", f"total cost: {report['total_cost']}"]
    diag = report.get("diagnostics") or {}
    if diag:
        lines.append("diagnostics: " + ", ".join(f"{k}={diag[k]}" for k in sorted(diag)))
    lines.append("")
    width = max([3] + [len(b["id"]) for b in report["bars"]])
    lines.append(f"{'bar':<{width}}  stacking (bottom to top)")
    for bar in report["bars"]:
        lines.append(f"{bar['id']:<{width}}  {' '.join(bar['stacking']) or '-'}")
    if report["links"]:
        lines.append("")
        ew = max([4] + [len(lk["id"]) for lk in report["links"]])
        lines.append(f"{'link':<{ew}}  type  cost")
        for lk in report["links"]:
            lines.append(f"{lk['id']:<{ew}}  {lk['type']:<4}  {lk['cost']}")
    return "\n".join(lines) + "\n"
