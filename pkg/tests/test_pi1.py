import json

import pytest
from hypothesis import given, strategies as st

from ellarr.elliptic import CellCheck, CWReport, build_model
from ellarr.homology import homology
from ellarr.pi1 import (Presentation, abelianization, cyclic_reduce, free_reduce, invert,
                        is_spanning_tree, presentation, relator_key, spanning_tree_chambers,
                        tietze_simplify)
from conftest import faces_of, model_of

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(tuple)


def ranks(model, r):
    return sum(1 for x in model.cat.ranks if x == r)


def test_word_helpers():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)
    assert invert((1, -2)) == (2, -1)


@given(words, st.integers(0, 11))
def test_relator_key_is_invariant(w, k):
    k = k % max(len(w), 1)
    assert relator_key(w[k:] + w[:k]) == relator_key(w)
    assert relator_key(invert(w)) == relator_key(w)
    assert relator_key(w + invert(w)) == ()


@pytest.mark.parametrize("name,tree,model_tree", [("a2", 1, 3), ("pts3", 2, 8), ("a3", 5, 35)])
def test_tree_sizes(name, tree, model_tree):
    data = presentation(model_of(name), cross_check=False)
    assert len(data.tree) == tree
    assert len(data.model_tree) == model_tree
    assert is_spanning_tree(model_of(name), data.model_tree, data.graph)


@pytest.mark.parametrize("name", ["a1", "pts2", "pts3", "a2", "square", "det5"])
def test_counts_match_cells(name):
    m = model_of(name)
    data = presentation(m)
    pres = data.presentation
    assert len(pres.generators) == ranks(m, 1) - (ranks(m, 0) - 1)
    assert len(pres.relators) == ranks(m, 2)
    assert len(data.walk_relators) == len(pres.relators)


def test_known_sizes():
    assert len(presentation(model_of("a1")).presentation.generators) == 2
    p = presentation(model_of("pts2")).presentation
    assert (len(p.generators), len(p.relators)) == (5, 2)
    p = presentation(model_of("a2")).presentation
    assert (len(p.generators), len(p.relators)) == (9, 10)


def test_punctured_torus_group_is_free():
    # torus minus n points has free fundamental group of rank n + 1
    for name, n in (("a1", 1), ("pts2", 2), ("pts3", 3)):
        simple = tietze_simplify(presentation(model_of(name)).presentation)
        assert len(simple.generators) == n + 1
        assert simple.relators == []


def test_tietze_small_cases():
    assert tietze_simplify(Presentation(["x"], [(1,)])).generators == []
    out = tietze_simplify(Presentation(["x", "y"], [(2,)]))
    assert out.generators == ["x"] and out.relators == []
    out = tietze_simplify(Presentation(["x", "y"], [(1, 2, -1, -2), (2, 1, -2, -1)]))
    assert len(out.relators) == 1
    out = tietze_simplify(Presentation(["x"], [(1, 1)]))
    assert out.relators == [(1, 1)]


def test_tietze_keeps_abelianization():
    for name in ("a2", "square", "det5"):
        pres = presentation(model_of(name)).presentation
        assert abelianization(tietze_simplify(pres)) == abelianization(pres)


def test_abelianization_basics():
    assert abelianization(Presentation(["x"], [(1, 1)])).torsion == [2]
    ab = abelianization(Presentation(["x", "y"], [(1, 2, -1, -2)]))
    assert (ab.rank, ab.torsion) == (2, [])


@pytest.mark.parametrize("name", ["a1", "pts2", "pts3", "a2", "square", "det5"])
def test_abelianization_is_first_homology(name):
    ab = abelianization(presentation(model_of(name)).presentation)
    h = homology(model_of(name).cat, max_dim=3)
    assert ab.rank == h.betti[1]
    assert ab.torsion == h.torsion[1]


def test_text_round_trip():
    pres = presentation(model_of("a2")).presentation
    back = Presentation.from_text(pres.to_text())
    assert back.relators == pres.relators
    assert len(back.generators) == len(pres.generators)
    doc = json.loads(pres.to_json())
    assert len(doc["generators"]) == 9


def test_bad_text():
    with pytest.raises(ValueError):
        Presentation.from_text("g1 g2\n")
    with pytest.raises(ValueError):
        Presentation.from_text("gens: a\nb\n")


def test_rejects_failed_certificate():
    m = build_model(faces_of("a2"))
    m.certificate = CWReport([CellCheck(0, "x", False, "slice mismatch")])
    with pytest.raises(ValueError, match="not certified"):
        presentation(m)


def test_tree_order_is_irrelevant():
    fc = faces_of("pts3")
    tree = spanning_tree_chambers(fc)
    m = model_of("pts3")
    other = presentation(m, tree=tree[::-1]).presentation
    assert abelianization(other) == abelianization(presentation(m).presentation)
