import math

import pytest
from hypothesis import given, settings, strategies as st

from contextua.lowindex import low_index_classes
from contextua.modular import NotModularAction, dessin_genus, modular_invariants

from conftest import MODULAR


def projective_line(N):
    """Points of P^1(Z/N) with the action of S = [[0,-1],[1,0]] and
    U = ST = [[0,-1],[1,1]] on row vectors; cosets of Gamma_0(N)."""
    units = [u for u in range(1, N) if math.gcd(u, N) == 1] or [1]
    seen, points, index = set(), [], {}
    for c in range(N):
        for d in range(N):
            if math.gcd(math.gcd(c, d), N) != 1 or (c, d) in seen:
                continue
            orbit = {((u * c) % N, (u * d) % N) for u in units}
            for q in orbit:
                index[q] = len(points)
            seen |= orbit
            points.append((c, d))

    def act(m):
        (a, b), (c2, d2) = m
        return tuple(index[((c * a + d * c2) % N, (c * b + d * d2) % N)] for c, d in points)

    return act(((0, -1), (1, 0))), act(((0, -1), (1, 1)))


# index, nu2, nu3, cusp widths, genus for Gamma_0(N) from the standard formulas
GAMMA0 = {
    2: (3, 1, 0, (2, 1), 0),
    3: (4, 0, 1, (3, 1), 0),
    4: (6, 0, 0, (4, 1, 1), 0),
    5: (6, 2, 0, (5, 1), 0),
    6: (12, 0, 0, (6, 3, 2, 1), 0),
    7: (8, 0, 2, (7, 1), 0),
    11: (12, 0, 0, (11, 1), 1),
}


@pytest.mark.parametrize("N", sorted(GAMMA0))
def test_gamma0_invariants(N):
    alpha, beta = projective_line(N)
    m = modular_invariants(alpha, beta)
    idx, nu2, nu3, widths, genus = GAMMA0[N]
    assert (m.index, m.nu2, m.nu3, m.cusp_widths, m.genus) == (idx, nu2, nu3, widths, genus)
    assert m.level == N
    assert dessin_genus(alpha, beta) == genus


def test_rejects_non_modular_pairs():
    with pytest.raises(NotModularAction):
        modular_invariants((1, 2, 0), (1, 2, 0))
    with pytest.raises(NotModularAction):
        modular_invariants((1, 0, 2, 3), (0, 1, 3, 2))  # not transitive
    with pytest.raises(NotModularAction):
        modular_invariants((1, 0), (0, 1, 2))


@pytest.mark.parametrize("n", range(1, 11))
def test_riemann_hurwitz_matches_euler_characteristic(n):
    for ct in low_index_classes(MODULAR, n):
        a, b = ct.table.alpha, ct.table.beta
        m = modular_invariants(a, b)
        assert sum(m.cusp_widths) == n
        assert (n - m.nu2) % 2 == 0 and (n - m.nu3) % 3 == 0
        assert m.genus == dessin_genus(a, b)
        assert m.level == math.lcm(*m.cusp_widths)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 9), st.data())
def test_invariants_under_relabeling(n, data):
    classes = low_index_classes(MODULAR, n)
    ct = classes[data.draw(st.integers(0, len(classes) - 1))]
    p = data.draw(st.permutations(range(n)))
    a, b = ct.table.alpha, ct.table.beta
    pinv = [0] * n
    for i, x in enumerate(p):
        pinv[x] = i
    conj = lambda x: tuple(p[x[pinv[i]]] for i in range(n))
    assert modular_invariants(conj(a), conj(b)) == modular_invariants(a, b)
