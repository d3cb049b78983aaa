from random import Random

import pytest

from unipotent.rootsystem import (Ordering, RootSystemError, build_root_system,
                                  check_additive_on, from_word, height_order, inversion_set,
                                  lex_least_w0_word, longest_element, papi_sequence,
                                  random_reduced_word, reduced_word, representation_order,
                                  separation_ordering, simple_reflection, w0_ordering,
                                  weyl_identity, weyl_inverse, weyl_length, weyl_multiply)

GRID = [("A", 2), ("A", 4), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("D", 5)]


@pytest.mark.parametrize("cartan,rank", GRID)
def test_root_count_and_heights(cartan, rank):
    rs = build_root_system(cartan, rank)
    expected = {"A": rank * (rank + 1) // 2, "B": rank**2, "C": rank**2, "D": rank * (rank - 1)}
    assert rs.N == expected[cartan]
    assert sorted(rs.heights[r] for r in rs.simple) == [1] * rank
    assert all(all(c >= 0 for c in co) for co in rs.coeffs)


def test_a2_labels_and_sums():
    rs = build_root_system("A", 2)
    assert [rs.format_root(r) for r in range(3)] == ["a[1,2]", "a[1,3]", "a[2,3]"]
    a12, a13, a23 = (rs.parse_root(x) for x in ("1,2", "a[1,3]", "3"))
    assert rs.sum_table[a12, a23] == a13
    assert rs.heights[a13] == 2


def test_b_short_root_sum():
    rs = build_root_system("B", 2)
    r, s = rs.parse_root("1,2"), rs.parse_root("2,0")
    assert rs.sum_table[r, s] == rs.parse_root("1,0")


def test_parse_root_errors():
    rs = build_root_system("A", 2)
    for bad in ("0", "4", "2,1", "x"):
        with pytest.raises(RootSystemError):
            rs.parse_root(bad)


@pytest.mark.parametrize("cartan,rank", GRID)
def test_ordering_properties(cartan, rank):
    rs = build_root_system(cartan, rank)
    rep = representation_order(rs)
    assert rep.additive == (cartan != "C")
    assert not rep.left_additive
    assert height_order(rs).left_additive
    assert w0_ordering(rs).additive


def test_ordering_must_be_permutation():
    rs = build_root_system("A", 2)
    with pytest.raises(RootSystemError):
        Ordering(rs, (0, 0, 1))


@pytest.mark.parametrize("cartan,rank", GRID)
def test_longest_element(cartan, rank):
    rs = build_root_system(cartan, rank)
    w0 = longest_element(rs)
    assert inversion_set(rs, w0) == frozenset(range(rs.N))
    word = lex_least_w0_word(rs)
    assert len(word) == rs.N
    assert from_word(rs, word) == w0


def test_simple_reflection_inversion_set():
    rs = build_root_system("A", 2)
    assert inversion_set(rs, simple_reflection(rs, 1)) == {rs.parse_root("1,2")}


def test_a2_papi_sequence():
    rs = build_root_system("A", 2)
    seq = papi_sequence(rs, [1, 2, 1])
    assert [rs.format_root(r) for r in seq] == ["a[2,3]", "a[1,3]", "a[1,2]"]


def test_papi_rejects_non_reduced_word():
    rs = build_root_system("A", 2)
    with pytest.raises(RootSystemError):
        papi_sequence(rs, [1, 1])


@pytest.mark.parametrize("cartan,rank", GRID)
def test_reduced_words_and_inverses(cartan, rank):
    rs = build_root_system(cartan, rank)
    rng = Random(3)
    for _ in range(20):
        w = from_word(rs, [rng.randrange(1, rank + 1) for _ in range(rng.randrange(8))])
        word = reduced_word(rs, w)
        assert from_word(rs, word) == w
        assert len(word) == weyl_length(rs, w)
        assert weyl_multiply(w, weyl_inverse(w)) == weyl_identity(rs)
        assert check_additive_on(rs, papi_sequence(rs, word))
        assert set(papi_sequence(rs, word)) == inversion_set(rs, w)


@pytest.mark.parametrize("cartan,rank", GRID)
def test_separation_ordering(cartan, rank):
    rs = build_root_system(cartan, rank)
    rng = Random(5)
    for _ in range(10):
        w = from_word(rs, random_reduced_word(rs, longest_element(rs), rng)[: rng.randrange(rs.N + 1)])
        o = separation_ordering(rs, w)
        k = weyl_length(rs, w)
        assert set(o.order[rs.N - k:]) == inversion_set(rs, w)
        assert o.additive


def test_random_reduced_words_reach_w0():
    rs = build_root_system("C", 3)
    rng = Random(0)
    for _ in range(10):
        word = random_reduced_word(rs, longest_element(rs), rng)
        assert len(word) == rs.N and from_word(rs, word) == longest_element(rs)
