"""Deterministic DOT, PNML and JSON renderings of nets and markings.

JSON layout (keys in this order)::

    {
      "spec":    {"alpha": int, "beta": int, "gamma": int, "delta": int} | null,
      "nodes":   [{"id": str, "kind": "T"|"TSTOP"|"SF"|"SB"|"SBCLASS"}, ...],
      "arcs":    [[source id, target id], ...],
      "marking": {place id: positive int, ...},
      "labels":  {node id: "t[i,j]" | "s[i,j]" | "s'[i,j]", ...},
      "fold":    null | {"back_indices": [int, ...],
                         "classes": [{"index": int, "members": [id, ...]}, ...]}
    }

Nodes, arcs and map keys are sorted by node id.  Only JSON can be read back.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from typing import Mapping

import jsonschema

from .algebra import CoordKind, CycloidSpec, RegularCoordinate
from .errors import CycloidError, ParseError
from .nets import FoldClass, FoldSpec, Net, NodeId

__all__ = ["export", "export_dot", "export_pnml", "export_json", "import_json", "net_title", "JSON_SCHEMA"]

PNML_NS = "http://www.pnml.org/version-2009/grammar/pnml"
PTNET_TYPE = "http://www.pnml.org/version-2009/grammar/ptnet"

_LABEL_RE = re.compile(r"(t|s|s')\[(\d+),(\d+)\]")
_LABEL_KIND = {"t": CoordKind.TRANSITION, "s": CoordKind.FWD_PLACE, "s'": CoordKind.BWD_PLACE}

_ID = {"type": "string"}
JSON_SCHEMA = {
    "type": "object",
    "required": ["spec", "nodes", "arcs", "marking", "labels"],
    "additionalProperties": False,
    "properties": {
        "spec": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["alpha", "beta", "gamma", "delta"],
                    "additionalProperties": False,
                    "properties": {k: {"type": "integer", "minimum": 1} for k in ("alpha", "beta", "gamma", "delta")},
                },
            ]
        },
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind"],
                "additionalProperties": False,
                "properties": {"id": _ID, "kind": {"enum": ["T", "TSTOP", "SF", "SB", "SBCLASS"]}},
            },
        },
        "arcs": {"type": "array", "items": {"type": "array", "items": _ID, "minItems": 2, "maxItems": 2}},
        "marking": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "labels": {"type": "object", "additionalProperties": {"type": "string", "pattern": _LABEL_RE.pattern}},
        "fold": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["back_indices", "classes"],
                    "additionalProperties": False,
                    "properties": {
                        "back_indices": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                        "classes": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["index", "members"],
                                "additionalProperties": False,
                                "properties": {
                                    "index": {"type": "integer", "minimum": 0},
                                    "members": {"type": "array", "items": _ID},
                                },
                            },
                        },
                    },
                },
            ]
        },
    },
}


def net_title(net: Net) -> str:
    if net.spec is None:
        return "net"
    params = ",".join(map(str, net.spec.as_tuple()))
    if not net.is_folded:
        return f"C({params})"
    stop = "^stop" if net.stop_transitions else ""
    title = f"C{stop}_bf({params})" if net.fold.is_total(net.spec.beta) else f"C{stop}_bf({params},D={net.fold})"
    present = {net.labels[t].j for t in net.transitions if t in net.labels}
    for j in range(net.spec.beta):
        if j not in present:
            title += f"-a_{j}"
    return title


def _sorted_marking(m: Mapping) -> list:
    return sorted((p, c) for p, c in m.items() if c)


def export_json(net: Net, m: Mapping | None = None) -> bytes:
    m = m or {}
    doc = {
        "spec": None
        if net.spec is None
        else dict(zip(("alpha", "beta", "gamma", "delta"), net.spec.as_tuple())),
        "nodes": [{"id": str(x), "kind": x.kind} for x in net.nodes],
        "arcs": [[str(a), str(b)] for a, b in sorted(net.arcs)],
        "marking": {str(p): c for p, c in _sorted_marking(m)},
        "labels": {str(x): net.labels[x].short for x in sorted(net.labels)},
        "fold": None
        if net.fold is None
        else {
            "back_indices": sorted(net.fold.back_indices),
            "classes": [{"index": c.index, "members": [str(x) for x in sorted(c.members)]} for c in net.classes],
        },
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def _parse_id(text: str, path: str) -> NodeId:
    try:
        return NodeId.parse(text)
    except ParseError as exc:
        raise ParseError(str(exc).split(": ", 1)[1], path) from None


def import_json(payload: bytes | str) -> tuple[Net, dict]:
    """Inverse of :func:`export_json`."""
    try:
        doc = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    validator = jsonschema.Draft202012Validator(JSON_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        raise ParseError(errors[0].message, errors[0].json_path)

    nodes = {}
    for k, entry in enumerate(doc["nodes"]):
        node = _parse_id(entry["id"], f"$.nodes[{k}].id")
        if node.kind != entry["kind"]:
            raise ParseError(f"kind {entry['kind']} does not match id {entry['id']}", f"$.nodes[{k}].kind")
        nodes[entry["id"]] = node

    def lookup(text, path):
        if text not in nodes:
            raise ParseError(f"unknown node {text!r}", path)
        return nodes[text]

    arcs = frozenset(
        (lookup(a, f"$.arcs[{k}][0]"), lookup(b, f"$.arcs[{k}][1]")) for k, (a, b) in enumerate(doc["arcs"])
    )
    marking = {}
    for key, count in doc["marking"].items():
        place = lookup(key, f"$.marking['{key}']")
        if not place.is_place:
            raise ParseError(f"{key} is not a place", f"$.marking['{key}']")
        if count:
            marking[place] = count
    labels = {}
    for key, text in doc["labels"].items():
        kind, i, j = _LABEL_RE.fullmatch(text).groups()
        labels[lookup(key, f"$.labels['{key}']")] = RegularCoordinate(_LABEL_KIND[kind], int(i), int(j))
    fold, classes = None, ()
    if doc.get("fold") is not None:
        try:
            fold = FoldSpec(frozenset(doc["fold"]["back_indices"]))
        except CycloidError as exc:
            raise ParseError(str(exc), "$.fold.back_indices") from None
        classes = tuple(
            FoldClass(c["index"], frozenset(_parse_id(x, f"$.fold.classes[{k}].members") for x in c["members"]))
            for k, c in enumerate(doc["fold"]["classes"])
        )
    spec = None if doc["spec"] is None else CycloidSpec(**doc["spec"])
    values = list(nodes.values())
    try:
        net = Net(
            spec,
            frozenset(x for x in values if x.is_place),
            frozenset(x for x in values if x.is_transition),
            arcs,
            labels,
            fold,
            classes,
        )
    except CycloidError as exc:
        raise ParseError(str(exc), "$.arcs") from None
    return net, marking


def export_dot(net: Net, m: Mapping | None = None, positions: bool = True) -> bytes:
    """Bipartite digraph: transitions as boxes, places as circles."""
    m = m or {}
    lines = [f'digraph "{net_title(net)}" {{', "  node [fontsize=10];"]
    for x in net.nodes:
        text = [str(x)]
        if x in net.labels:
            text.append(str(net.labels[x]))
        attrs = [f"shape={'box' if x.is_transition else 'circle'}"]
        if m.get(x):
            text.append(f"tokens={m[x]}")
            attrs.append("penwidth=2")
        attrs.insert(1, 'label="{}"'.format("\\n".join(text)))
        if positions and x.kind in ("T", "SF", "SB"):
            dx, dy = {"T": (0, 0), "SF": (50, 0), "SB": (0, 50)}[x.kind]
            attrs.append(f'pos="{100 * x.x + dx},{100 * x.y + dy}!"')
        lines.append(f'  "{x}" [{", ".join(attrs)}];')
    for a, b in sorted(net.arcs):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def export_pnml(net: Net, m: Mapping | None = None) -> bytes:
    """Place/transition net in the PNML core format (no graphics)."""
    m = m or {}
    root = ET.Element("pnml", xmlns=PNML_NS)
    title = net_title(net)
    net_el = ET.SubElement(root, "net", id=title, type=PTNET_TYPE)
    ET.SubElement(ET.SubElement(net_el, "name"), "text").text = title
    page = ET.SubElement(net_el, "page", id="page0")
    for x in net.nodes:
        el = ET.SubElement(page, "transition" if x.is_transition else "place", id=str(x))
        name = str(x) if x not in net.labels else f"{x} {net.labels[x]}"
        ET.SubElement(ET.SubElement(el, "name"), "text").text = name
        if m.get(x):
            ET.SubElement(ET.SubElement(el, "initialMarking"), "text").text = str(m[x])
    for k, (a, b) in enumerate(sorted(net.arcs)):
        ET.SubElement(page, "arc", id=f"a{k}", source=str(a), target=str(b))
    ET.indent(root)
    return b'<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="utf-8", xml_declaration=False) + b"\n"


def export(net: Net, m: Mapping | None = None, format: str = "json") -> bytes:
    if format == "json":
        return export_json(net, m)
    if format == "dot":
        return export_dot(net, m)
    if format == "pnml":
        return export_pnml(net, m)
    raise CycloidError(f"unknown export format {format!r}")
