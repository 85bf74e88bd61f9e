import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycloids import (
    CoordKind,
    CycloidSpec,
    ParameterError,
    Point,
    RegularCoordinate,
    dual,
    equivalent,
    fundamental_points,
    metrics,
    minimal_cycle_length,
    normalize,
    parameter_vector,
    regular_label,
    shear,
    stand,
)
from cycloids.algebra import _search_min_cycle
from cycloids.errors import CycloidError
from cycloids.nets import tr

import oracles

params = st.tuples(*(st.integers(1, 6) for _ in range(4)))
coords = st.tuples(st.integers(-40, 40), st.integers(-40, 40))


def test_reference_metrics_4333():
    spec = CycloidSpec(4, 3, 3, 3)
    m = metrics(spec)
    assert (m.area, spec.process_length, m.n) == (21, 7, 7)
    assert m.is_regular


def test_reference_metrics_3214():
    spec = CycloidSpec(3, 2, 1, 4)
    assert (spec.area, spec.process_length, spec.n) == (14, 7, 5)


def test_min_cycle_4336_uses_search():
    spec = CycloidSpec(4, 3, 3, 6)
    assert spec.process_length == 11
    assert minimal_cycle_length(spec) == (9, "search")
    assert oracles.shortest_cycle_bruteforce(spec.as_tuple()) == 9


def test_normalize_worked_example():
    w = normalize(CycloidSpec(4, 3, 3, 3), (-2, -2))
    assert w.representative == Point(1, 1)
    assert (w.m, w.n_steps) == (0, -1)
    assert str(w.representative) == "(1,1)"


def test_regular_coordinate_worked_example():
    # [t_0, a_2] sits at t(-2,-2), which normalizes to t(1,1)
    spec = CycloidSpec(4, 3, 3, 3)
    assert stand(spec, tr(0, 2)) == Point(1, 1)
    assert regular_label(spec, (-2, -2)) == RegularCoordinate(CoordKind.TRANSITION, 0, 2)


@pytest.mark.parametrize("bad", [(0, 1, 1, 1), (1, -2, 1, 1), (1, 1, True, 1), (1, 1, 1, 2.0)])
def test_spec_validation(bad):
    with pytest.raises(ParameterError):
        CycloidSpec(*bad)


def test_parameter_vector_exact():
    pv = parameter_vector(CycloidSpec(4, 3, 3, 3), (3, 3))
    assert (pv.num1, pv.num2, pv.den) == (0, 21, 21)
    assert pv.is_integral
    assert not parameter_vector(CycloidSpec(4, 3, 3, 3), (1, 0)).is_integral


@settings(max_examples=300, deadline=None)
@given(params, coords)
def test_normalize_properties(p, u):
    spec = CycloidSpec(*p)
    w = normalize(spec, u)
    rep = w.representative
    al, be, ga, de = p
    assert rep == (u[0] - w.m * al - w.n_steps * ga, u[1] + w.m * be - w.n_steps * de)
    assert normalize(spec, rep).representative == rep
    assert normalize(spec, rep).m == 0 and normalize(spec, rep).n_steps == 0
    assert 0 <= rep.xi <= al + ga and -be <= rep.eta <= de
    assert oracles.lattice_equivalent(p, u, rep)


@settings(max_examples=300, deadline=None)
@given(params, coords, coords)
def test_equivalence_matches_lattice_search(p, a, b):
    spec = CycloidSpec(*p)
    assert equivalent(spec, a, b) == oracles.lattice_equivalent(p, a, b)
    assert equivalent(spec, a, b) == (normalize(spec, a).representative == normalize(spec, b).representative)


@settings(max_examples=200, deadline=None)
@given(params, coords)
def test_shifting_by_lattice_vectors_is_equivalent(p, u):
    al, be, ga, de = p
    spec = CycloidSpec(*p)
    for shift in ((al, -be), (ga, de), (-al, be), (al + ga, de - be)):
        assert equivalent(spec, u, (u[0] + shift[0], u[1] + shift[1]))


@pytest.mark.parametrize("p", list(oracles.small_specs(3)))
def test_fundamental_points_count_matches_classes(p):
    spec = CycloidSpec(*p)
    pts = fundamental_points(spec)
    assert len(pts) == spec.area
    assert len(set(pts)) == spec.area
    assert oracles.class_count(p) == spec.area


def test_fundamental_points_pairwise_inequivalent():
    spec = CycloidSpec(3, 2, 1, 4)
    pts = fundamental_points(spec)
    for i, a in enumerate(pts):
        for b in pts[i + 1 :]:
            assert not oracles.lattice_equivalent(spec.as_tuple(), a, b)


@pytest.mark.parametrize("p", [p for p in oracles.small_specs(5, regular_only=True)])
def test_min_cycle_formula_matches_search(p):
    spec = CycloidSpec(*p)
    found = minimal_cycle_length(spec, verify=True)
    assert found.value == _search_min_cycle(spec)


@pytest.mark.parametrize("p", [(4, 3, 3, 6), (2, 3, 2, 2), (5, 2, 3, 1), (1, 1, 1, 1), (3, 3, 1, 2)])
def test_min_cycle_search_matches_bruteforce(p):
    assert minimal_cycle_length(CycloidSpec(*p)).value == oracles.shortest_cycle_bruteforce(p)


def test_dual_and_shear():
    assert dual(CycloidSpec(4, 3, 3, 6)) == CycloidSpec(3, 4, 6, 3)
    spec = CycloidSpec(2, 3, 5, 1)
    assert shear(spec, 2, "reduce_gamma") == CycloidSpec(2, 3, 1, 7)
    assert shear(CycloidSpec(2, 3, 1, 7), 2, "reduce_delta") == CycloidSpec(2, 3, 5, 1)
    assert shear(spec, 1, "reduce_gamma").area == spec.area


def test_shear_precondition_message():
    with pytest.raises(ParameterError, match=r"gamma > q\*alpha violated: 4 > 4 is false"):
        shear(CycloidSpec(2, 1, 4, 1), 2, "reduce_gamma")
    with pytest.raises(ParameterError):
        shear(CycloidSpec(2, 1, 4, 1), 0, "reduce_gamma")
    with pytest.raises(ParameterError):
        shear(CycloidSpec(2, 1, 4, 1), 1, "sideways")


@pytest.mark.parametrize("p", [(4, 3, 3, 3), (3, 2, 1, 4), (2, 3, 4, 6), (1, 1, 1, 1), (5, 2, 3, 4)])
def test_stand_is_bijection_onto_fundamental_points(p):
    spec = CycloidSpec(*p)
    P = spec.process_length
    images = {stand(spec, tr(i, j)) for i in range(P) for j in range(spec.beta)}
    assert images == set(fundamental_points(spec))
    for i in range(P):
        for j in range(spec.beta):
            assert regular_label(spec, stand(spec, tr(i, j))) == tr(i, j)


def test_stand_rejects_out_of_range_and_irregular():
    with pytest.raises(CycloidError):
        stand(CycloidSpec(4, 3, 3, 3), tr(7, 0))
    with pytest.raises(CycloidError):
        stand(CycloidSpec(4, 3, 3, 4), tr(0, 0))

