import pytest

from contextua.cosets import table_from_perms
from contextua.lowindex import (NodeBudgetExceeded, canonical_form, count_classes,
                                low_index_classes)
from contextua.permgrp import PermGroup

from conftest import A5, B2, FREE, MODULAR
from oracles import brute_low_index

PRESENTATIONS = {"F2": FREE, "b2": B2, "modular": MODULAR, "A5": A5}


@pytest.mark.parametrize("name", sorted(PRESENTATIONS))
@pytest.mark.parametrize("n", range(1, 8))
def test_matches_exhaustive_oracle(name, n):
    pres = PRESENTATIONS[name]
    got = [ct.encoding() for ct in low_index_classes(pres, n)]
    assert got == brute_low_index(pres.relators, n)


def test_examples(index6_pairs):
    assert len(low_index_classes(FREE, 2)) == 3
    encs = {ct.encoding() for ct in low_index_classes(B2, 6)}
    for a, b in index6_pairs:
        assert canonical_form(table_from_perms(a, b, B2)).encoding() in encs


def test_tables_valid_and_sorted():
    for pres in (B2, MODULAR):
        out = low_index_classes(pres, 8)
        encs = [ct.encoding() for ct in out]
        assert encs == sorted(encs) and len(set(encs)) == len(encs)
        for ct in out:
            ct.table.validate()
            assert ct.n == 8
            assert canonical_form(ct.table).encoding() == ct.encoding()


def test_python_and_parallel_paths_agree():
    ref = [ct.encoding() for ct in low_index_classes(B2, 7)]
    assert [ct.encoding() for ct in low_index_classes(B2, 7, compiled=False)] == ref
    assert [ct.encoding() for ct in low_index_classes(B2, 7, jobs=2, compiled=False)] == ref


def test_counts():
    # subgroup counts of <a,b | b^2>
    assert [count_classes(B2, n) for n in (6, 8, 9, 10)] == [56, 482, 1551, 5916]
    assert count_classes(MODULAR, 10) == 27


def test_canonical_form_relabeling(index6_pairs):
    a, b = index6_pairs[1]
    base = canonical_form(table_from_perms(a, b)).encoding()
    g = (3, 0, 5, 1, 2, 4)
    inv = [0] * 6
    for i, x in enumerate(g):
        inv[x] = i
    a2 = tuple(g[a[inv[i]]] for i in range(6))
    b2 = tuple(g[b[inv[i]]] for i in range(6))
    assert PermGroup([a2, b2]).order() == PermGroup([a, b]).order()
    for s in range(6):
        assert canonical_form(table_from_perms(a2, b2, start=s)).encoding() == base


def test_index2_separation():
    encs = {ct.encoding() for ct in low_index_classes(FREE, 2)}
    assert len(encs) == 3


def test_node_budget():
    with pytest.raises(NodeBudgetExceeded):
        low_index_classes(FREE, 6, node_budget=50)
    with pytest.raises(ValueError):
        low_index_classes(FREE, 0)
