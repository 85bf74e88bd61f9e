import pytest

from cycloids import (
    CycloidSpec,
    FoldSpec,
    Net,
    ResourceError,
    attach_regular_labels,
    backward_fold,
    dual,
    initial_marking,
    isomorphic,
    synthesize,
    validate_mapping,
)
from cycloids.isomorphism import _Graph, _refine, _search
from cycloids.nets import SF, T


def cycle(n, offset=0):
    """Directed ring t0 -> s0 -> t1 -> s1 -> ... of ``n`` transitions."""
    places = [SF(offset + i, 0) for i in range(n)]
    trans = [T(offset + i, 0) for i in range(n)]
    arcs = set()
    for i in range(n):
        arcs.add((trans[i], places[i]))
        arcs.add((places[i], trans[(i + 1) % n]))
    return places, trans, arcs


def union(*parts):
    places, trans, arcs = set(), set(), set()
    for p, t, a in parts:
        places.update(p)
        trans.update(t)
        arcs.update(a)
    return Net(None, frozenset(places), frozenset(trans), frozenset(arcs))


def test_duality_instance():
    rep = isomorphic(synthesize(CycloidSpec(3, 2, 1, 4)), synthesize(CycloidSpec(2, 3, 4, 1)))
    assert rep.holds
    a, b = synthesize(CycloidSpec(3, 2, 1, 4)), synthesize(CycloidSpec(2, 3, 4, 1))
    assert validate_mapping(a, b, rep.witness["mapping"]) == []


def test_shear_instance():
    assert isomorphic(synthesize(CycloidSpec(2, 3, 4, 6)), synthesize(CycloidSpec(2, 3, 2, 9))).holds


def test_size_mismatch_is_rejected_early():
    rep = isomorphic(synthesize(CycloidSpec(4, 3, 3, 3)), synthesize(CycloidSpec(3, 2, 1, 4)))
    assert not rep.holds
    assert "differ" in rep.witness["reason"]


def test_same_counts_different_structure():
    # one 6-ring versus two 3-rings: equal degrees everywhere
    six = union(cycle(6))
    two = union(cycle(3), cycle(3, offset=10))
    assert not isomorphic(six, two).holds
    assert isomorphic(two, union(cycle(3, offset=20), cycle(3, offset=30))).holds


def test_search_without_refinement_help():
    # feed the backtracking search uniform colours so it has to do the work
    six = union(cycle(6))
    two = union(cycle(3), cycle(3, offset=10))
    ga, gb = _Graph(six, None), _Graph(two, None)
    flat_a = [int(x.is_transition) for x in ga.nodes]
    flat_b = [int(x.is_transition) for x in gb.nodes]
    assert _search(ga, gb, flat_a, flat_b) is None
    g2 = _Graph(union(cycle(6, offset=40)), None)
    found = _search(ga, g2, flat_a, [int(x.is_transition) for x in g2.nodes])
    assert found is not None and len(found) == len(ga.nodes)


def test_refinement_colours_are_shared():
    a = _Graph(synthesize(CycloidSpec(2, 2, 1, 2)), None)
    b = _Graph(synthesize(CycloidSpec(2, 2, 1, 2)), None)
    ca, cb = _refine(a, b)
    assert sorted(ca) == sorted(cb)


def test_markings_must_match():
    net = attach_regular_labels(synthesize(CycloidSpec(3, 2, 1, 4)))
    m0, m1 = initial_marking(net), initial_marking(net, "regular", 1)
    assert isomorphic(net, net, (m0, m1)).holds  # the 1-shift is an automorphism
    assert isomorphic(net, net, (m0, m0)).holds
    assert not isomorphic(net, net, (m0, {})).holds


def test_validate_mapping_reports_problems():
    a = synthesize(CycloidSpec(1, 1, 1, 1))
    ident = {x: x for x in a.nodes}
    assert validate_mapping(a, a, ident) == []
    swapped = dict(ident)
    swapped[T(0, 0)], swapped[SF(0, 0)] = SF(0, 0), T(0, 0)
    problems = validate_mapping(a, a, swapped)
    assert any("kind" in p for p in problems)
    assert validate_mapping(a, a, {T(0, 0): T(0, 0)}) == ["mapping is not a bijection between node sets"]


def test_resource_bound():
    big = synthesize(CycloidSpec(6, 6, 6, 6))
    with pytest.raises(ResourceError):
        isomorphic(big, big, max_nodes=50)


def test_fold_is_not_isomorphic_to_base():
    base = attach_regular_labels(synthesize(CycloidSpec(3, 2, 1, 4)))
    assert not isomorphic(base, backward_fold(base, FoldSpec.total(2))).holds


@pytest.mark.parametrize("p", [(4, 3, 3, 6), (2, 5, 3, 1), (1, 1, 4, 4)])
def test_dual_is_isomorphic(p):
    spec = CycloidSpec(*p)
    assert isomorphic(synthesize(spec), synthesize(dual(spec))).holds
