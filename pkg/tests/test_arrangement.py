from fractions import Fraction
from itertools import combinations
from math import factorial, lcm

import pytest
from hypothesis import given, settings, strategies as st

from ellarr.arrangement import (ArrangementSpec, NonEssentialError, SpecError, chamber_graph,
                                codim2_star, coxeter_a, toric_face_category, vertex_orbits)
from ellarr.scwol import validate
from conftest import faces_of, points_on_circle


def planar_counts(columns, offsets):
    """Vertices, edges and chambers of a planar toric arrangement by grid search.

    Assumes pairwise non-parallel normals, so every hyperplane is cut into
    as many edges as it has vertices and chambers follow from chi = 0.
    """
    dets = [abs(a[0] * b[1] - a[1] * b[0]) for a, b in combinations(columns, 2)]
    m = lcm(*dets) * lcm(*[Fraction(b).denominator for b in offsets])
    on = {}
    for i in range(m):
        for j in range(m):
            x = (Fraction(i, m), Fraction(j, m))
            hits = [k for k, (a, b) in enumerate(zip(columns, offsets))
                    if (a[0] * x[0] + a[1] * x[1] - b).denominator == 1]
            if len(hits) >= 2:
                on[x] = hits
    v = len(on)
    e = sum(len(h) for h in on.values())
    return [v, e, e - v]


def test_spec_parsing_errors():
    with pytest.raises(SpecError, match="offsets\\[1\\]"):
        ArrangementSpec.from_dict({"d": 1, "columns": [[1], [1]], "offsets": ["0", "x"]})
    with pytest.raises(SpecError, match="columns\\[0\\]"):
        ArrangementSpec.from_dict({"d": 2, "columns": [[1]], "offsets": ["0"]})
    with pytest.raises(SpecError, match="missing"):
        ArrangementSpec.from_dict({"d": 1, "columns": [[1]]})
    with pytest.raises(SpecError, match="line 1"):
        ArrangementSpec.from_json('{"d": 1, "columns": [[1]],, }')
    with pytest.raises(SpecError, match="repeats"):
        ArrangementSpec.from_dict({"d": 1, "columns": [[1], [-1]], "offsets": ["1/3", "2/3"]})
    with pytest.raises(SpecError, match="\\[0, 1\\)"):
        ArrangementSpec.from_dict({"d": 1, "columns": [[1]], "offsets": ["3/2"]})


def test_non_essential():
    with pytest.raises(NonEssentialError, match="non-essential"):
        ArrangementSpec.from_dict({"d": 2, "columns": [[1, 0], [2, 0]], "offsets": ["0", "0"]})


def test_round_trip():
    spec = coxeter_a(3)
    assert ArrangementSpec.from_dict(spec.to_dict()) == spec


def test_fig2_counts():
    fc = faces_of("a2")
    assert fc.counts() == [1, 3, 2]
    cat = fc.cat
    (v,) = fc.objects_of_dim(0)
    for e in fc.objects_of_dim(1):
        assert len(cat.hom(v, e)) == 2
        for c in fc.objects_of_dim(2):
            assert len(cat.hom(e, c)) == 1
    assert cat.n_morphisms == 18


def test_small_circles():
    fc = toric_face_category(coxeter_a(1))
    assert fc.counts() == [1, 1] and fc.cat.n_morphisms == 2
    fc = toric_face_category(points_on_circle(2))
    assert fc.counts() == [2, 2] and fc.cat.n_morphisms == 4


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_points_on_circle(n):
    assert toric_face_category(points_on_circle(n)).counts() == [n, n]


def test_coordinate_torus():
    fc = faces_of("square")
    assert fc.counts() == [1, 2, 1]
    assert fc.cat.n_morphisms == 12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_coxeter_counts(n):
    fc = faces_of(f"a{n}")
    counts = fc.counts()
    assert counts[-1] == factorial(n)
    assert counts[-2] == factorial(n + 1) // 2
    assert validate(fc.cat) == []


def test_canonical_faces_in_unit_box():
    fc = faces_of("a2")
    for f in fc.faces:
        assert all(0 <= x < 1 for x in f.barycenter)
    assert [f.dim for f in fc.faces] == [0, 1, 1, 1, 2, 2]


def test_margin_cap():
    spec = ArrangementSpec.from_dict({"d": 2, "columns": [[5, 1], [1, 5]], "offsets": ["0", "0"]})
    with pytest.raises(RuntimeError, match="margin cap"):
        vertex_orbits(spec, margin_cap=8)
    assert len(vertex_orbits(spec, margin_cap=64)) == 24


normals = st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any)
offsets = st.sampled_from(["0", "1/2", "1/3", "2/3"])


@st.composite
def planar_specs(draw):
    cols = draw(st.lists(normals, min_size=2, max_size=3))
    for a, b in combinations(cols, 2):
        if a[0] * b[1] - a[1] * b[0] == 0:
            return None
    offs = draw(st.lists(offsets, min_size=len(cols), max_size=len(cols)))
    return [list(c) for c in cols], offs


@settings(max_examples=25, deadline=None)
@given(planar_specs())
def test_planar_counts_match_grid(data):
    if data is None:
        return
    cols, offs = data
    spec = ArrangementSpec.from_dict({"d": 2, "columns": cols, "offsets": offs})
    fc = toric_face_category(spec)
    assert fc.counts() == planar_counts(spec.columns, spec.offsets)
    assert validate(fc.cat) == []


def test_chamber_graphs():
    g = chamber_graph(faces_of("a2"))
    assert len(g.chambers) == 2 and len(g.edges) == 3
    assert all({e.tail, e.head} == set(g.chambers) for e in g.edges)
    g = chamber_graph(faces_of("a1"))
    assert len(g.edges) == 1 and g.edges[0].is_loop
    g = chamber_graph(faces_of("pts3"))
    assert sorted(sorted((e.tail, e.head)) for e in g.edges) == [[3, 4], [3, 5], [4, 5]]


def test_star_of_a2_vertex():
    fc = faces_of("a2")
    g = chamber_graph(fc)
    steps = codim2_star(fc, g, fc.objects_of_dim(0)[0])
    assert len(steps) == 6
    for w in fc.objects_of_dim(1):
        signs = sorted(s.sign for s in steps if s.wall == w)
        assert signs == [-1, 1]
    # consecutive steps share a chamber lift
    for a, b in zip(steps, steps[1:] + steps[:1]):
        assert a.after == b.before


def test_star_of_coordinate_crossing():
    fc = faces_of("square")
    steps = codim2_star(fc, chamber_graph(fc), 0)
    assert len(steps) == 4


def test_star_wrong_dimension():
    fc = faces_of("a2")
    with pytest.raises(ValueError):
        codim2_star(fc, chamber_graph(fc), fc.objects_of_dim(1)[0])
