from __future__ import annotations

import random

import pytest

from trispine.errors import IllegalMove, PillowSelfGlued
from trispine.explorer import census_one_tet
from trispine.generators import random_closed_valid
from trispine.macros import (
    MACROS,
    arch_with_membrane,
    barycentric,
    barycentric_direct,
    find_pillows,
    one_four_plus_arch,
    one_four_plus_arch_direct,
    stellar_edge,
    stellar_edge_direct,
    stellar_face,
    stellar_face_direct,
    transport_vertex,
    triangular_02,
    triangular_20,
    v_move,
    v_move_direct,
)
from trispine.moves import MoveEvent, apply_event_tracked, insert_arch, legal_41, replay
from trispine.perm import edge_index
from trispine.signature import canonical_signature, isomorphic
from trispine.skeleton import Skeleton, classify_vertices, euler_characteristic, validate
from trispine.triangulation import double_tetrahedron, gieseking


def _check_replay(tri, result):
    assert canonical_signature(replay(tri, result.script)) == canonical_signature(result.output)
    assert result.script.comments[0].startswith("macro: ")


def _kinds(result):
    return [ev.kind for ev in result.script.events]


def test_registry_names_every_macro():
    assert set(MACROS) == {
        "triangular-02", "triangular-20", "stellar-face", "stellar-edge", "barycentric",
        "v-move", "arch-with-membrane", "one-four-plus-arch", "transport-vertex",
    }


# -- triangular pillows ---------------------------------------------------------------

def test_triangular_02_on_double_tetrahedron():
    base = double_tetrahedron()
    for k in range(4):
        r = triangular_02(base, k)
        _check_replay(base, r)
        assert r.output.tet_count == 4
        assert Skeleton(r.output).num_vertices == 5
        assert validate(r.output).valid
        assert classify_vertices(r.output)[1] == 5
        assert r.landmarks["pillow_vertex"] in find_pillows(r.output)


def test_triangular_02_then_20():
    base = double_tetrahedron()
    r = triangular_02(base, 1)
    back = triangular_20(r.output, r.landmarks["pillow_vertex"])
    _check_replay(r.output, back)
    assert isomorphic(back.output, base)


def test_pillow_with_glued_outer_faces():
    from trispine.perm import IDENTITY, Perm4
    from trispine.triangulation import Triangulation

    # two tetrahedra sharing faces 1, 2, 3; the outer faces 0 glued to each other
    swap = Perm4((0, 1, 3, 2))
    rows = [
        [(1, 0, swap), (1, 1, IDENTITY), (1, 2, IDENTITY), (1, 3, IDENTITY)],
        [(0, 0, swap), (0, 1, IDENTITY), (0, 2, IDENTITY), (0, 3, IDENTITY)],
    ]
    tri = Triangulation(rows)
    pillows = find_pillows(tri)
    assert pillows
    with pytest.raises(PillowSelfGlued):
        triangular_20(tri, pillows[0])


# -- stellar moves --------------------------------------------------------------------

def test_stellar_face_on_double_tetrahedron():
    base = double_tetrahedron()
    for k in range(4):
        r = stellar_face(base, k)
        _check_replay(base, r)
        assert r.output.tet_count == 6
        assert _kinds(r) == ["14", "23"]
        direct = stellar_face_direct(base, k)
        assert isomorphic(r.output, direct)
        # the counts move by the sum of a 1-4 and a 2-3 move
        before, after = Skeleton(base).counts(), Skeleton(r.output).counts()
        assert tuple(b - a for a, b in zip(before, after)) == (1, 5, 8, 4)
        assert Skeleton(direct).counts() == after


def test_stellar_edge_of_degree_three():
    base = double_tetrahedron()
    tri, tr = apply_event_tracked(base, MoveEvent("23", 0))
    t, a, b = tr.info["new_edge"]
    e = Skeleton(tri).edge_of[t][edge_index(a, b)]
    r = stellar_edge(tri, e)
    _check_replay(tri, r)
    assert r.output.tet_count == tri.tet_count + 3
    # one 1-4, d - 2 moves 2-3 and a closing 3-2
    assert _kinds(r) == ["14", "23", "32"]
    assert isomorphic(r.output, stellar_edge_direct(tri, e))


def test_stellar_edge_of_degree_two():
    base = double_tetrahedron()
    for e in range(6):
        r = stellar_edge(base, e)
        assert r.output.tet_count == 4
        assert _kinds(r) == ["14", "32"]
        assert isomorphic(r.output, stellar_edge_direct(base, e))


def test_stellar_edge_rejects_repeated_edge():
    with pytest.raises(IllegalMove, match="repeated"):
        stellar_edge(gieseking(), 0)


def test_stellar_oracles_on_random_inputs():
    rng = random.Random(21)
    for _ in range(15):
        tri = random_closed_valid(rng.randint(2, 3), rng)
        skel = Skeleton(tri)
        k = rng.randrange(skel.num_triangles)
        (t0, _), (t1, _) = skel.triangle_members[k]
        if t0 != t1:
            assert isomorphic(stellar_face(tri, k).output, stellar_face_direct(tri, k))
        e = rng.randrange(skel.num_edges)
        try:
            r = stellar_edge(tri, e)
        except IllegalMove:
            continue
        assert isomorphic(r.output, stellar_edge_direct(tri, e))


# -- barycentric subdivision ----------------------------------------------------------

def test_barycentric_one_tet_sphere():
    base = next(e.tri for e in census_one_tet() if e.counts[0] == 2)
    r = barycentric(base)
    _check_replay(base, r)
    assert r.output.tet_count == 24
    assert isomorphic(r.output, barycentric_direct(base))


def test_barycentric_double_tetrahedron():
    base = double_tetrahedron()
    r = barycentric(base)
    assert r.output.tet_count == 48
    assert isomorphic(r.output, barycentric_direct(base))
    assert euler_characteristic(r.output) == 0
    assert len(r.landmarks["original_vertices"]) == 4


# -- V-move and arches ----------------------------------------------------------------

def test_v_move_on_double_tetrahedron():
    base = double_tetrahedron()
    for t in range(2):
        r = v_move(base, t, 0)
        _check_replay(base, r)
        assert r.output.tet_count == 4
        assert _kinds(r) == ["23", "23", "23", "32"]
        assert Skeleton(r.output).num_vertices == 4
        assert isomorphic(r.output, v_move_direct(base, t, 0, 1))


def test_v_move_needs_a_second_tetrahedron():
    with pytest.raises(IllegalMove):
        v_move(gieseking(), 0, 0)


def test_arch_with_membrane_on_double_tetrahedron():
    base = double_tetrahedron()
    r = arch_with_membrane(base, 0)
    _check_replay(base, r)
    assert r.output.tet_count == 4
    assert _kinds(r) == ["23", "23", "23", "32", "23", "32"]
    skel = Skeleton(r.output)
    assert skel.num_vertices == 4
    # the membrane bigon is dual to a degree-two edge, the neck monogon to a degree-one edge
    assert len(skel.edge_members[r.landmarks["membrane"]]) == 2
    assert len(skel.edge_members[r.landmarks["neck"]]) == 1


def test_one_four_plus_arch_on_double_tetrahedron():
    base = double_tetrahedron()
    for t in range(2):
        for v in range(4):
            r = one_four_plus_arch(base, t, v)
            _check_replay(base, r)
            assert len(r.script.events) == 8
            assert r.output.tet_count == 6
            assert classify_vertices(r.output)[1] == 4
            assert isomorphic(r.output, one_four_plus_arch_direct(base, t, v))


def test_one_four_plus_arch_matches_public_primitives():
    base = double_tetrahedron()
    r = one_four_plus_arch(base, 0, 0)
    mid, tr = apply_event_tracked(base, MoveEvent("14", 0))
    skel = Skeleton(mid)
    new = skel.vertex_of[tr.new_tets[0]][0]
    old = skel.vertex_of[tr.corner(0, 0)[0]][tr.corner(0, 0)[1]]
    # some triangle spanned by the new vertex and the old one reproduces the macro
    hits = []
    for k, members in enumerate(skel.triangle_members):
        t, f = members[0]
        corners = [skel.vertex_of[t][x] for x in range(4) if x != f]
        if new in corners and old in corners:
            hits.append(isomorphic(insert_arch(mid, k, (new, old), skel), r.output))
    assert any(hits)


def test_transport_vertex():
    rng = random.Random(4)
    done = 0
    while done < 5:
        base = random_closed_valid(3, rng)
        t = rng.randrange(3)
        tri, tr = apply_event_tracked(base, MoveEvent("14", t))
        c_t, c_v = tr.info["new_vertex"]
        w = Skeleton(tri).vertex_of[c_t][c_v]
        cone = set(tr.new_tets)
        for i, nt in enumerate(tr.new_tets):
            target = tri.gluing(nt, i)[0]
            if target in cone:
                continue
            try:
                r = transport_vertex(tri, w, target)
            except IllegalMove:
                continue
            _check_replay(tri, r)
            assert _kinds(r) == ["32", "23"]
            assert r.output.tet_count == tri.tet_count
            assert legal_41(r.output, r.landmarks["vertex"])
            done += 1


def test_transport_there_and_back():
    base = double_tetrahedron()
    tri, tr = apply_event_tracked(base, MoveEvent("14", 0))
    w = Skeleton(tri).vertex_of[tr.info["new_vertex"][0]][tr.info["new_vertex"][1]]
    nt = tr.new_tets[0]
    r = transport_vertex(tri, w, tri.gluing(nt, 0)[0])
    # from the new position, the old coarse tetrahedron is a neighbour again
    out = r.output
    w2 = r.landmarks["vertex"]
    skel = Skeleton(out)
    cone = {t for t, _ in skel.vertex_members[w2]}
    back = None
    for t, c in skel.vertex_members[w2]:
        target = out.gluing(t, c)[0]
        if target in cone:
            continue
        cand = transport_vertex(out, w2, target).output
        if isomorphic(cand, tri):
            back = cand
    assert back is not None
