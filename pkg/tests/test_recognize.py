import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from contextua.geometry import Geometry, collinearity_graph, spectrum
from contextua.recognize import (TooLarge, UnknownEntry, catalog_build, catalog_names,
                                 fingerprint, geometry_isomorphic, gh21, gq22, grid,
                                 match_catalog, multipartite, multipartite_parts, orthogonal_array,
                                 shrikhande)

# (points, lines, point degree, line size) from the defining constructions
SHAPES = {
    "Mermin square": (9, 6, 2, 3),
    "Mermin pentagram": (10, 5, 2, 4),
    "Pappus": (9, 9, 3, 3),
    "K(3,3)": (6, 9, 3, 2),
    "K(3,3,3)": (9, 27, 9, 3),
    "GQ(2,2)": (15, 15, 3, 3),
    "Shrikhande": (16, 32, 6, 3),
    "GH(2,1)": (21, 14, 2, 3),
    "3x3x3 grid": (27, 27, 3, 3),
    "T(6)": (15, 6, 2, 5),
    "OA(5,3)": (25, 15, 3, 5),
}


def shuffled(geom, rng):
    perm = list(range(geom.n_points))
    rng.shuffle(perm)
    lines = [list(l) for l in geom.relabeled(perm).lines]
    rng.shuffle(lines)
    return Geometry(geom.n_points, lines)


def test_catalog_shapes():
    assert set(catalog_names()) == set(SHAPES)
    for name, (p, l, deg, size) in SHAPES.items():
        g = catalog_build(name)
        assert (g.n_points, g.n_lines) == (p, l), name
        assert set(g.point_degrees()) == {deg} and set(g.line_sizes()) == {size}, name


def test_catalog_entries_match_themselves_and_nothing_else():
    for name in catalog_names():
        assert match_catalog(catalog_build(name)) == name
    for a, b in itertools.combinations(catalog_names(), 2):
        assert not geometry_isomorphic(catalog_build(a), catalog_build(b)), (a, b)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(sorted(SHAPES)), st.integers(0, 2**32))
def test_recognition_survives_relabeling(name, seed):
    g = catalog_build(name)
    h = shuffled(g, random.Random(seed))
    assert geometry_isomorphic(g, h)
    assert match_catalog(h) == name
    assert fingerprint(g) == fingerprint(h)


def test_known_spectra():
    spec = lambda g: spectrum(collinearity_graph(g)).as_dict()
    # strongly regular parameters (15,6,1,3), (16,6,2,2); line graph of the Heawood graph
    assert spec(gq22()) == {6: 1, 1: 9, -3: 5}
    assert spec(shrikhande()) == {6: 1, 2: 6, -2: 9}
    assert fingerprint(gh21()).triangles == 14


def test_multipartite_detector():
    assert multipartite_parts(multipartite(4, 4, 4)) == (4, 4, 4)
    assert match_catalog(multipartite(2, 5)) == "K(2,5)"
    assert multipartite_parts(grid(3, 3)) is None
    assert match_catalog(shuffled(multipartite(3, 3, 3), random.Random(1))) == "K(3,3,3)"


def test_parametric_entries():
    assert catalog_build("grid", (3, 4)).n_points == 12
    assert catalog_build("K", (8, 8, 8)).n_lines == 512
    assert catalog_build("OA", (5, 3)).notation() == "[25_3,15_5]"
    with pytest.raises(ValueError):
        orthogonal_array(4, 3)
    with pytest.raises(UnknownEntry):
        catalog_build("no such geometry")


def test_non_isomorphic_with_equal_counts():
    # 9 points, 6 lines of 3, each point on 2 lines: the grid, and two disjoint triangles of lines
    tri = [(0, 1, 2), (2, 3, 4), (4, 5, 0)]
    other = Geometry(9, tri + [(6, 7, 1), (7, 8, 3), (8, 6, 5)])
    assert not geometry_isomorphic(grid(3, 3), other)
    assert match_catalog(other) is None


def test_size_bound():
    big = multipartite(40, 40)
    with pytest.raises(TooLarge):
        geometry_isomorphic(big, big)
    assert match_catalog(big) == "K(40,40)"
