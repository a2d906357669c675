import pytest
from hypothesis import given, settings, strategies as st

from contextua.epicheck import (diagonal_equivalent, epi_classes, generating_pairs, satisfies)
from contextua.permgrp import OrderTooLarge, PermGroup, inv, mul, parse_cycles

from conftest import FREE, MODULAR, pres
from oracles import brute_generating_pairs


def klein():
    return PermGroup([parse_cycles("(1,2)(3,4)", 4), parse_cycles("(1,3)(2,4)", 4)])


def c6():
    return PermGroup([(1, 2, 3, 4, 5, 0)])


def test_free_onto_c2():
    g = PermGroup([(1, 0)])
    assert len(generating_pairs((), g)) == 3
    assert epi_classes(FREE, g).class_count == 3


def test_free_onto_klein():
    g = klein()
    pairs = generating_pairs((), g)
    assert len(pairs) == 6
    rep = epi_classes(FREE, g)
    assert rep.class_count == 1 and rep.unique
    # |Aut(V4)| = 6 acts freely on generating pairs
    assert rep.class_count * 6 == len(pairs)


def test_modular_onto_c6():
    g = c6()
    pairs = generating_pairs(MODULAR.relators, g)
    assert len(pairs) == 2
    assert epi_classes(MODULAR, g).class_count == 1


def test_pairs_match_oracle():
    for p, g in [(FREE, klein()), (MODULAR, c6()), (pres("a^2", "b^3", "(ab)^5"),
                 PermGroup([parse_cycles("(1,2)(3,4)", 5), parse_cycles("(1,3,5)", 5)]))]:
        ours = sorted(generating_pairs(p.relators, g))
        assert ours == sorted(brute_generating_pairs(p.relators, g.elements(), g.order()))


def test_representatives_valid_and_inequivalent():
    g = PermGroup([parse_cycles("(1,2,3)", 4), parse_cycles("(1,2)(3,4)", 4)])  # A4
    rep = epi_classes(FREE, g)
    for x, y in rep.representatives:
        assert PermGroup([x, y], 4).order() == 12
    reps = rep.representatives
    for i, p in enumerate(reps):
        for q in reps[i + 1:]:
            assert not diagonal_equivalent(p, q)


def test_diagonal_relation_is_equivalence():
    g = PermGroup([parse_cycles("(1,2,3)", 3), parse_cycles("(1,2)", 3)])
    pairs = generating_pairs((), g)
    m = [[diagonal_equivalent(p, q) for q in pairs] for p in pairs]
    k = len(pairs)
    for i in range(k):
        assert m[i][i]
        for j in range(k):
            assert m[i][j] == m[j][i]
            if m[i][j]:
                assert all(m[i][t] == m[j][t] for t in range(k))
    # S3 has 18 generating pairs and |Aut(S3)| = 6
    assert k == 18 and epi_classes(FREE, g).class_count == 3


def test_bound():
    g = PermGroup([parse_cycles("(1,2,3,4,5,6,7)", 7), parse_cycles("(1,2)", 7)])
    with pytest.raises(OrderTooLarge):
        epi_classes(FREE, g, bound=100)


def test_satisfies():
    x, y = parse_cycles("(1,2)", 3), parse_cycles("(1,2,3)", 3)
    assert satisfies(MODULAR.relators, x, y)
    assert not satisfies(MODULAR.relators, y, x)


@settings(max_examples=15, deadline=None)
@given(st.permutations(range(5)))
def test_relabeling_invariance(relabel):
    p = tuple(relabel)
    pi = inv(p)
    a, b = parse_cycles("(1,2)(3,4)", 5), parse_cycles("(1,3,5)", 5)
    g1 = PermGroup([a, b])
    g2 = PermGroup([mul(mul(pi, a), p), mul(mul(pi, b), p)])
    A5 = pres("a^2", "b^3", "(ab)^5")
    assert epi_classes(A5, g1).class_count == epi_classes(A5, g2).class_count
    assert epi_classes(MODULAR, g1).class_count == epi_classes(MODULAR, g2).class_count
