from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from trispine.errors import PreconditionViolated
from trispine.explorer import _one_tet_gluings
from trispine.generators import random_closed_valid
from trispine.moves import apply_23, legal_23
from trispine.skeleton import Skeleton, validate
from trispine.spine import check_two_cells_are_discs, dualize, duality_report, singular_graph, to_dot
from trispine.triangulation import double_tetrahedron, gieseking


def test_double_tetrahedron_spine():
    spine = dualize(double_tetrahedron())
    assert spine.counts() == (2, 4, 6, 4)
    assert all(r.euler_characteristic == 2 and r.orientable for r in spine.regions)
    nodes, arcs = singular_graph(spine)
    assert len(nodes) == 2 and len(arcs) == 4


def test_gieseking_spine():
    spine = dualize(gieseking())
    assert spine.counts()[0] == 1
    (region,) = spine.regions
    assert region.euler_characteristic == 0 and not region.orientable
    nodes, arcs = singular_graph(spine)
    assert len(nodes) == 1 and len(arcs) == 2
    assert all(a == b == 0 for _, a, b in arcs)


def test_23_adds_a_spine_vertex_and_a_two_cell():
    tri = double_tetrahedron()
    after = dualize(apply_23(tri, 0))
    before = dualize(tri)
    assert after.counts()[0] == before.counts()[0] + 1
    assert after.counts()[2] == before.counts()[2] + 1


def test_invalid_triangulation_is_refused():
    bad = next(tri for tri in _one_tet_gluings() if not validate(tri).valid)
    with pytest.raises(PreconditionViolated):
        dualize(bad)


def test_dot_and_report():
    spine = dualize(double_tetrahedron())
    dot = to_dot(spine)
    assert dot.startswith("graph singular {") and dot.count("--") == 4
    assert "two-cells: 6" in duality_report(spine)


def test_two_cell_words_go_round_the_edge():
    tri = double_tetrahedron()
    skel = Skeleton(tri)
    spine = dualize(tri, skel)
    for cell in spine.two_cells:
        assert len(cell.word) == len(skel.edge_members[cell.index])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_duality_dictionary(n, seed):
    tri = random_closed_valid(n, random.Random(seed))
    skel = Skeleton(tri)
    spine = dualize(tri, skel)
    assert spine.counts() == (tri.tet_count, skel.num_triangles, skel.num_edges, skel.num_vertices)
    nodes, arcs = singular_graph(spine)
    assert len(arcs) == 2 * len(nodes)
    ends = [0] * len(nodes)
    for _, a, b in arcs:
        ends[a] += 1
        ends[b] += 1
    assert ends == [4] * len(nodes)
    assert all(check_two_cells_are_discs(spine))
    for region, link in zip(spine.regions, skel.links):
        assert region.euler_characteristic == link.euler_characteristic
        assert region.orientable == link.orientable


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_23_on_random_triangulations(n, seed):
    rng = random.Random(seed)
    tri = random_closed_valid(n, rng)
    legal = [k for k in range(Skeleton(tri).num_triangles) if legal_23(tri, k)]
    if not legal:
        return
    before = dualize(tri).counts()
    after = dualize(apply_23(tri, rng.choice(legal))).counts()
    assert after[0] == before[0] + 1 and after[2] == before[2] + 1 and after[3] == before[3]
