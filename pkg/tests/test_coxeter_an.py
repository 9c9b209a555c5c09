from itertools import permutations, product
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from ellarr.coxeter_an import (CyclicPartition, WallLabel, an_presentation, an_tree, apply_word,
                               chamber_of, chambers, classify_codim2, column_of_pair,
                               compare_with_geometric, cyclic_partitions,
                               cyclic_partitions_category, geometric_object_map, inversions,
                               lex_first_reduced_word, partition_of_point, source_target,
                               support_pairs, tree_is_spanning, verify_an_iso, walls)
from ellarr.pi1 import abelianization, presentation
from ellarr.scwol import validate
from conftest import faces_of, model_of


def stirling2(n, k):
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, k + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]


def count_by_blocks(n, k):
    # set partitions of n+1 elements into k blocks, blocks arranged on a circle
    return stirling2(n + 1, k) * factorial(k - 1)


def test_parse_and_labels():
    p = CyclicPartition.parse("2|01|")
    assert p.blocks == ((0, 1), (2,))
    assert p.label() == "01|2|"
    assert CyclicPartition.parse("0,10|1,2,3,4,5,6,7,8,9|").label() == "0,10|1,2,3,4,5,6,7,8,9|"
    with pytest.raises(ValueError):
        CyclicPartition.make([[0], [2]])


def test_n2_objects():
    labels = [p.label() for p in cyclic_partitions(2)]
    assert sorted(labels) == sorted(["012|", "01|2|", "02|1|", "0|12|", "0|1|2|", "0|2|1|"])
    assert [p.rank for p in cyclic_partitions(2)] == [0, 1, 1, 1, 2, 2]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_counts_match_stirling(n):
    parts = cyclic_partitions(n)
    for k in range(1, n + 2):
        assert sum(1 for p in parts if len(p.blocks) == k) == count_by_blocks(n, k)


def test_hom_set_sizes():
    cat = cyclic_partitions_category(2)
    idx = {lab: i for i, lab in enumerate(cat.labels)}
    assert len(cat.hom(idx["012|"], idx["0|1|2|"])) == 3
    assert len(cat.hom(idx["01|2|"], idx["0|1|2|"])) == 1
    assert len(cat.hom(idx["0|12|"], idx["0|1|2|"])) == 1
    assert len(cat.hom(idx["0|12|"], idx["0|2|1|"])) == 1
    assert cat.hom(idx["01|2|"], idx["0|12|"]) == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_category_is_valid(n):
    assert validate(cyclic_partitions_category(n)) == []


@given(st.permutations(list(range(5))), st.integers(1, 4))
def test_merge_keeps_order(blocks, k):
    p = CyclicPartition.make([[x] for x in blocks])
    seps = p.blocks[:k]
    q = p.merge(seps)
    assert len(q.blocks) == len(p.blocks) - k
    # merging preserves the cyclic order of elements
    flat = lambda c: [x for b in c.blocks for x in b]
    assert sorted(flat(q)) == list(range(5))


def test_partition_of_point():
    assert partition_of_point(["1/3", "2/3"]).label() == "0|1|2|"
    assert partition_of_point(["2/3", "1/3"]).label() == "0|2|1|"
    assert partition_of_point(["1", "1/2"]).label() == "01|2|"


def brute_lex_first(perm):
    n = len(perm)
    length = inversions(perm)
    for word in product(range(1, n), repeat=length):
        if apply_word(word, n) == tuple(perm):
            return word
    raise AssertionError


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lex_first_words(n):
    for perm in permutations(range(1, n + 1)):
        word = lex_first_reduced_word(perm)
        assert apply_word(word, n) == perm
        assert word == brute_lex_first(perm)


def test_longest_element_a2():
    assert lex_first_reduced_word((3, 2, 1)) == (1, 2, 1)


def test_source_target():
    lab = WallLabel.of(CyclicPartition.parse("0|12|"))
    assert lab.source.label() == "0|1|2|"
    assert lab.target.label() == "0|2|1|"
    s, t = source_target(CyclicPartition.parse("01|2|"))
    assert (s.label(), t.label()) == ("0|1|2|", "0|2|1|")
    with pytest.raises(ValueError):
        WallLabel.of(CyclicPartition.parse("012|"))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_walls_and_tree(n):
    assert len(walls(n)) == factorial(n + 1) // 2
    assert len(chambers(n)) == factorial(n)
    assert chambers(n)[0] == chamber_of(tuple(range(1, n + 1)))
    tree = an_tree(n)
    assert len(tree) == factorial(n) - 1
    assert tree_is_spanning(n, tree)
    if tree:
        assert not tree_is_spanning(n, tree[:-1])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_codim2_counts(n):
    p2, p11 = classify_codim2(n)
    assert len(p2) == comb(n + 1, 3) * factorial(n - 2)
    assert len(p11) == comb(n + 1, 2) * comb(n - 1, 2) // 2 * factorial(n - 2)


@pytest.mark.parametrize("name", ["a2", "a3"])
def test_supports_match_geometry(name):
    fc = faces_of(name)
    n = fc.spec.d
    objs = cyclic_partitions(n)
    for f, k in enumerate(geometric_object_map(fc)):
        pairs = support_pairs(objs[k])
        assert fc.faces[f].support == frozenset(column_of_pair(n, i, j) for i, j in pairs)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_iso_with_geometry(n):
    iso = verify_an_iso(n, faces_of(f"a{n}"))
    assert iso is not None


def test_explicit_presentation_sizes():
    for n, gens, rels in ((1, 2, 0), (2, 9, 10)):
        pres = an_presentation(n).presentation
        assert (len(pres.generators), len(pres.relators)) == (gens, rels)
    # same sizes as the general construction
    for n in (2, 3):
        pres = an_presentation(n).presentation
        gen = presentation(model_of(f"a{n}")).presentation
        assert len(pres.generators) == len(gen.generators)
        assert len(pres.relators) == len(gen.relators)


@pytest.mark.parametrize("n", [2, 3])
def test_explicit_matches_general(n):
    cmp = compare_with_geometric(n, model_of(f"a{n}"))
    assert cmp.relators_match, cmp.mismatched
    assert abelianization(cmp.explicit.presentation) == abelianization(cmp.general.presentation)


def test_relator_kinds_n3():
    ap = an_presentation(3)
    starts = list(ap.families.values()) + [len(ap.presentation.relators)]
    sizes = [b - a for a, b in zip(starts, starts[1:])]
    # 4 triple-block and 3 double-doubleton faces, each against 6 chambers on either side
    assert sizes[1:] == [24, 24, 18, 18]
    assert sum(sizes) == 204
