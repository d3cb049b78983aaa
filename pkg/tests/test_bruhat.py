from random import Random

import pytest

from unipotent.bruhat import (BruhatError, bruhat_create, bruhat_equal, bruhat_identity,
                              torus_element)
from unipotent.collect import CollectedElement, identity_element, random_element
from unipotent.presentation import presentation
from unipotent.rings import CountingRing, OpCounter, PrimeField
from unipotent.rootsystem import (build_root_system, from_word, inversion_set, longest_element,
                                  reduced_word, representation_order, simple_reflection)

F = PrimeField(17)


@pytest.fixture
def a2():
    rs = build_root_system("A", 2)
    return rs, presentation(rs, representation_order(rs))


def _sample(rs, pres, rng, word=None):
    w = from_word(rs, word if word is not None else [rng.randrange(1, rs.rank + 1) for _ in range(4)])
    phi = inversion_set(rs, w)
    u = random_element(pres.ordering, F, rng)
    up = CollectedElement(pres.ordering, tuple(
        F.random_element(rng) if r in phi else 0 for r in pres.ordering.order))
    t = [rng.randrange(1, 17) for _ in range(rs.rank)]
    return bruhat_create(pres, F, u, t, w, up)


def test_identity_form(a2):
    rs, pres = a2
    g = bruhat_identity(pres, F)
    assert g.word == () and bruhat_equal(F, g, g)


def test_support_violation(a2):
    rs, pres = a2
    e = identity_element(pres.ordering, F)
    bad = CollectedElement(pres.ordering, (0, 0, 5))
    with pytest.raises(BruhatError):
        bruhat_create(pres, F, e, [1, 1], simple_reflection(rs, 1), bad)


def test_valid_a2_sample(a2):
    rs, pres = a2
    e = identity_element(pres.ordering, F)
    up = CollectedElement(pres.ordering, (3, 0, 0))
    g = bruhat_create(pres, F, e, [2, 5], simple_reflection(rs, 1), up)
    assert g.support == {rs.parse_root("1,2")}
    assert "w(1)" in g.format(F)


def test_torus_and_word_validation(a2):
    rs, pres = a2
    e = identity_element(pres.ordering, F)
    with pytest.raises(BruhatError):
        bruhat_create(pres, F, e, [0, 1], simple_reflection(rs, 1), e)
    with pytest.raises(BruhatError):
        bruhat_create(pres, F, e, [1], simple_reflection(rs, 1), e)
    with pytest.raises(BruhatError):
        bruhat_create(pres, F, e, [1, 1], simple_reflection(rs, 1), e, word=[1, 2, 2])
    with pytest.raises(BruhatError):
        bruhat_create(pres, F, e, [1, 1], simple_reflection(rs, 1), e, word=[2])
    assert torus_element(F, [3]).inverses == (6,)


def test_fuzzed_invalid_support_always_rejected():
    rs = build_root_system("B", 3)
    pres = presentation(rs, representation_order(rs))
    rng = Random(1)
    e = identity_element(pres.ordering, F)
    for _ in range(50):
        w = from_word(rs, [rng.randrange(1, 4) for _ in range(rng.randrange(6))])
        outside = [r for r in range(rs.N) if r not in inversion_set(rs, w)]
        if not outside:
            continue
        bad = [0] * rs.N
        bad[rng.choice(outside)] = rng.randrange(1, 17)
        with pytest.raises(BruhatError):
            bruhat_create(pres, F, e, [1] * 3, w, CollectedElement(pres.ordering, tuple(bad)))


def test_equality_is_an_equivalence():
    rs = build_root_system("C", 3)
    pres = presentation(rs, representation_order(rs))
    rng = Random(2)
    forms = [_sample(rs, pres, Random(k % 3)) for k in range(6)]
    for x in forms:
        assert bruhat_equal(F, x, x)
        for y in forms:
            assert bruhat_equal(F, x, y) == bruhat_equal(F, y, x)
            for z in forms:
                if bruhat_equal(F, x, y) and bruhat_equal(F, y, z):
                    assert bruhat_equal(F, x, z)


def test_differing_torus_stops_early():
    rs = build_root_system("A", 4)
    pres = presentation(rs, representation_order(rs))
    x = _sample(rs, pres, Random(5))
    y = bruhat_create(pres, F, x.u, [F.add(x.t.values[0], 1)] + list(x.t.values[1:]), x.w, x.u_prime)
    c = OpCounter()
    assert not bruhat_equal(CountingRing(F, c), x, y)
    assert c.eq <= rs.rank


@pytest.mark.parametrize("rank", [2, 4, 6])
def test_equality_op_count_bound(rank):
    rs = build_root_system("A", rank)
    pres = presentation(rs, representation_order(rs))
    x = _sample(rs, pres, Random(rank), reduced_word(rs, longest_element(rs)))
    c = OpCounter()
    assert bruhat_equal(CountingRing(F, c), x, x)
    assert c.total() <= rank + 2 * rs.N + len(x.word)
