import json
import re
import xml.etree.ElementTree as ET

import pytest

from cycloids import (
    CycloidSpec,
    FoldSpec,
    ParseError,
    attach_regular_labels,
    backward_fold,
    check_safety,
    delete_process,
    export,
    import_json,
    initial_marking,
    make_stop_resilient,
    reachability,
    synthesize,
)
from cycloids.serialize import PNML_NS


def labelled(*p):
    return attach_regular_labels(synthesize(CycloidSpec(*p)))


def fold_3214():
    return backward_fold(labelled(3, 2, 1, 4), FoldSpec.total(2))


def test_dot_1111_shape():
    net = labelled(1, 1, 1, 1)
    text = export(net, initial_marking(net), "dot").decode()
    assert text.count("shape=box") == 2
    assert text.count("shape=circle") == 4
    assert text.count("->") == 8
    assert text.count("tokens=1") == 2


def test_dot_nodes_in_canonical_order():
    net = fold_3214()
    text = export(net, initial_marking(net), "dot").decode()
    ids = re.findall(r'^  "([^"]+)" \[', text, flags=re.M)
    assert ids == [str(x) for x in net.nodes] == [str(x) for x in sorted(net.nodes)]


def test_dot_positions_follow_grid():
    net = synthesize(CycloidSpec(3, 2, 1, 4))
    text = export(net, None, "dot").decode()
    assert '"t(2,-1)" [shape=box, label="t(2,-1)", pos="200,-100!"];' in text


def test_json_4333_node_count():
    doc = json.loads(export(labelled(4, 3, 3, 3), None, "json"))
    assert len(doc["nodes"]) == 63
    assert list(doc) == ["spec", "nodes", "arcs", "marking", "labels", "fold"]
    assert sum(n["kind"] == "T" for n in doc["nodes"]) == 21


@pytest.mark.parametrize(
    "build",
    [
        lambda: labelled(3, 2, 1, 4),
        fold_3214,
        lambda: backward_fold(labelled(2, 3, 4, 6), FoldSpec({0, 2})),
        lambda: make_stop_resilient(2, 3),
        lambda: delete_process(make_stop_resilient(2, 3), 1),
        lambda: synthesize(CycloidSpec(4, 3, 3, 4)),
    ],
)
def test_json_roundtrip(build):
    net = build()
    m = initial_marking(net) if net.spec.is_regular and not net.stop_transitions else {}
    payload = export(net, m, "json")
    back, m2 = import_json(payload)
    assert back == net
    assert back.labels == net.labels
    assert back.classes == net.classes
    assert m2 == m
    assert export(back, m2, "json") == payload


def test_exports_are_byte_deterministic():
    for fmt in ("json", "dot", "pnml"):
        a = export(fold_3214(), initial_marking(fold_3214()), fmt)
        b = export(fold_3214(), initial_marking(fold_3214()), fmt)
        assert a == b


def test_pnml_structure():
    net = fold_3214()
    m = initial_marking(net)
    root = ET.fromstring(export(net, m, "pnml"))
    ns = {"p": PNML_NS}
    assert root.tag == f"{{{PNML_NS}}}pnml"
    places = root.findall(".//p:place", ns)
    trans = root.findall(".//p:transition", ns)
    arcs = root.findall(".//p:arc", ns)
    assert {p.get("id") for p in places} == {str(x) for x in net.places}
    assert {t.get("id") for t in trans} == {str(x) for x in net.transitions}
    assert {(a.get("source"), a.get("target")) for a in arcs} == {(str(a), str(b)) for a, b in net.arcs}
    marked = {p.get("id"): int(p.find("p:initialMarking/p:text", ns).text) for p in places if p.find("p:initialMarking", ns) is not None}
    assert marked == {str(k): v for k, v in m.items()}
    assert root.find(".//p:graphics", ns) is None


def test_truncated_payload():
    payload = export(fold_3214(), None, "json")
    with pytest.raises(ParseError) as err:
        import_json(payload[: len(payload) // 2])
    assert err.value.path == "$"


def test_schema_violation_reports_json_path():
    doc = json.loads(export(labelled(1, 1, 1, 1), None, "json"))
    doc["nodes"][2]["kind"] = "X"
    with pytest.raises(ParseError) as err:
        import_json(json.dumps(doc))
    assert err.value.path == "$.nodes[2].kind"

    doc = json.loads(export(labelled(1, 1, 1, 1), None, "json"))
    doc["arcs"][3][1] = "t(7,7)"
    with pytest.raises(ParseError) as err:
        import_json(json.dumps(doc))
    assert err.value.path == "$.arcs[3][1]"

    doc = json.loads(export(labelled(1, 1, 1, 1), None, "json"))
    del doc["marking"]
    with pytest.raises(ParseError, match="marking"):
        import_json(json.dumps(doc))


def test_marking_on_transition_rejected():
    doc = json.loads(export(labelled(1, 1, 1, 1), None, "json"))
    doc["marking"] = {"t(0,0)": 1}
    with pytest.raises(ParseError) as err:
        import_json(json.dumps(doc))
    assert err.value.path == "$.marking['t(0,0)']"


def test_hand_edited_double_token_is_flagged_unsafe():
    net = fold_3214()
    doc = json.loads(export(net, initial_marking(net), "json"))
    sf = next(k for k in doc["marking"] if k.startswith("sf("))
    doc["marking"][sf] = 2
    net2, m2 = import_json(json.dumps(doc))
    assert max(m2.values()) == 2
    rep = check_safety(reachability(net2, m2))
    assert not rep.holds and rep.witness["sequence"] == []
