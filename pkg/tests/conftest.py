import json
from pathlib import Path

import pytest

from contextua.permgrp import from_cycles, load_perm_pair
from contextua.words import Presentation, parse_word

FIXTURES = Path(__file__).parent / "fixtures"


def pres(*relators, name=None):
    return Presentation(tuple(parse_word(r) for r in relators), name)


FREE = pres()
B2 = pres("b^2")
MODULAR = pres("a^2", "b^3")
A5 = pres("a^2", "b^3", "(ab)^5")
B2A6 = pres("b^2", "a^6")

# finite groups with a faithful permutation model (x, y) and known order
FINITE = [
    (pres("a^2", "b^3", "(ab)^2"), ((1, 0, 2), (1, 2, 0)), 6),
    (pres("a^2", "b^3", "(ab)^3"), (from_cycles([[1, 2], [3, 4]], 4), from_cycles([[1, 2, 3]], 4)), 12),
    (pres("a^2", "b^3", "(ab)^4"), (from_cycles([[1, 2]], 4), from_cycles([[2, 3, 4]], 4)), 24),
    (A5, (from_cycles([[1, 2], [3, 4]], 5), from_cycles([[1, 3, 5]], 5)), 60),
    (pres("a^2", "b^2", "(ab)^5"), (from_cycles([[2, 5], [3, 4]], 5), from_cycles([[1, 2], [3, 5]], 5)), 10),
    (pres("a^3", "b^2", "(ab)^4"), (from_cycles([[1, 2, 3]], 4), from_cycles([[3, 4]], 4)), 24),
    (pres("a^4", "b^2", "abab"), (from_cycles([[1, 2, 3, 4]], 4), from_cycles([[1, 3]], 4)), 8),
    (pres("a^6", "b^2", "abab"), (from_cycles([[1, 2, 3, 4, 5, 6]], 6), from_cycles([[2, 6], [3, 5]], 6)), 12),
    (pres("a^5", "b^3", "aba^-1b^-1"), ((1, 2, 3, 4, 0, 5, 6, 7), (0, 1, 2, 3, 4, 6, 7, 5)), 15),
]

SUBGROUPS = [[], ["a"], ["b"], ["ab"], ["a", "bab^-1"], ["b^2a"], ["aba"], ["a", "b"]]


def load_gq_pair():
    return load_perm_pair(json.loads((FIXTURES / "gq22_perm.json").read_text()))


@pytest.fixture(scope="session")
def gq_pair():
    return load_gq_pair()


def _index6():
    return [load_perm_pair(d) for d in json.loads((FIXTURES / "b2_index6_pairs.json").read_text())]


@pytest.fixture(scope="session")
def index6_pairs():
    """Two index-6 actions of <a,b | b^2> whose permutation group has order 36.

    A third recorded pair generates a group of order 120 and is kept apart
    in ``index6_odd_pair``.
    """
    pairs = _index6()
    return [pairs[0], pairs[2]]


@pytest.fixture(scope="session")
def index6_odd_pair():
    return _index6()[1]


# one PASS/FAIL line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE = {}


def accept(number, ok, detail):
    ACCEPTANCE[number] = (bool(ok), detail)
    print(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
