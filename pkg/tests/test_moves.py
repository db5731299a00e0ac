from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from trispine.errors import IllegalMove, ParseError, SignatureMismatch
from trispine.explorer import census_one_tet, legal_events
from trispine.generators import random_closed_valid
from trispine.moves import (
    ARCH_GADGET,
    DELTAS,
    MoveEvent,
    MoveScript,
    apply_14,
    apply_23,
    apply_32,
    apply_41,
    apply_event,
    apply_event_tracked,
    insert_arch,
    legal_23,
    legal_32,
    legal_41,
    remove_arch,
    replay,
)
from trispine.perm import edge_index
from trispine.signature import canonical_signature, isomorphic
from trispine.skeleton import Skeleton, classify_vertices, euler_characteristic, validate
from trispine.triangulation import double_tetrahedron, figure_eight, gieseking


def _counts(tri):
    return Skeleton(tri).counts()


def _delta(a, b):
    return tuple(y - x for x, y in zip(_counts(a), _counts(b)))


def _new_edge(tri, tracker):
    t, a, b = tracker.info["new_edge"]
    return Skeleton(tri).edge_of[t][edge_index(a, b)]


def _new_vertex(tri, tracker):
    t, c = tracker.info["new_vertex"]
    return Skeleton(tri).vertex_of[t][c]


# -- 2-3 and 3-2 ----------------------------------------------------------------------

def test_23_on_double_tetrahedron():
    base = double_tetrahedron()
    for k in range(4):
        tri, tr = apply_event_tracked(base, MoveEvent("23", k))
        skel = Skeleton(tri)
        assert tri.tet_count == 3 and tri.is_closed() and validate(tri).valid
        assert len(skel.edge_members[_new_edge(tri, tr)]) == 3
        assert _delta(base, tri) == (0, 1, 2, 1)


def test_23_then_32_is_identity():
    base = double_tetrahedron()
    tri, tr = apply_event_tracked(base, MoveEvent("23", 0))
    assert isomorphic(apply_32(tri, _new_edge(tri, tr)), base)


def test_no_23_or_32_on_one_tet_triangulations():
    for entry in census_one_tet():
        skel = Skeleton(entry.tri)
        assert not any(legal_23(entry.tri, k, skel) for k in range(skel.num_triangles))
        assert not any(legal_32(entry.tri, e, skel) for e in range(skel.num_edges))
        with pytest.raises(IllegalMove):
            apply_23(entry.tri, 0)


def test_32_on_gieseking_is_illegal():
    tri = gieseking()
    for e in range(Skeleton(tri).num_edges):
        assert not legal_32(tri, e)
        with pytest.raises(IllegalMove):
            apply_32(tri, e)


def test_32_deltas_on_random_four_tet():
    rng = random.Random(3)
    seen = 0
    while seen < 10:
        tri = random_closed_valid(4, rng)
        for e in range(Skeleton(tri).num_edges):
            if legal_32(tri, e):
                assert _delta(tri, apply_32(tri, e)) == (0, -1, -2, -1)
                seen += 1


# -- 1-4 and 4-1 ----------------------------------------------------------------------

def test_14_on_one_tet_sphere():
    s3 = next(e.tri for e in census_one_tet() if e.all_material)
    tri, tr = apply_event_tracked(s3, MoveEvent("14", 0))
    assert tri.tet_count == 4
    assert Skeleton(tri).num_vertices == Skeleton(s3).num_vertices + 1
    v = _new_vertex(tri, tr)
    assert Skeleton(tri).links[v].classification == "Sphere"


def test_14_41_roundtrip():
    rng = random.Random(9)
    for _ in range(20):
        base = random_closed_valid(rng.randint(1, 3), rng)
        t = rng.randrange(base.tet_count)
        tri, tr = apply_event_tracked(base, MoveEvent("14", t))
        v = _new_vertex(tri, tr)
        assert legal_41(tri, v)
        back = apply_41(tri, v)
        assert isomorphic(back, base)
        assert _delta(tri, back) == DELTAS["41"]


def test_41_on_double_tetrahedron_is_illegal():
    tri = double_tetrahedron()
    for v in range(4):
        assert not legal_41(tri, v)
        with pytest.raises(IllegalMove):
            apply_41(tri, v)


def test_14_out_of_range():
    with pytest.raises(IllegalMove):
        apply_14(double_tetrahedron(), 2)


# -- count deltas, property style -----------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6), st.sampled_from(["23", "32", "14", "41"]))
def test_count_deltas_and_invariants(n, seed, kind):
    rng = random.Random(seed)
    tri = random_closed_valid(n, rng)
    events = [ev for ev in legal_events(tri, ("23", "32", "14", "41")) if ev.kind == kind]
    if not events:
        return
    ev = rng.choice(events)
    new = apply_event(tri, ev)
    assert _delta(tri, new) == DELTAS[kind]
    assert new.is_closed() and validate(new).valid
    assert euler_characteristic(new) == euler_characteristic(tri)
    _, mat0, ideal0 = classify_vertices(tri)
    _, mat1, ideal1 = classify_vertices(new)
    assert ideal1 == ideal0
    assert mat1 - mat0 == {"23": 0, "32": 0, "14": 1, "41": -1}[kind]


# -- arches ---------------------------------------------------------------------------

def test_arch_gadget_is_frozen():
    assert ARCH_GADGET["interior_faces"] == (2, 3)


def test_arch_on_double_tetrahedron():
    base = double_tetrahedron()
    skel = Skeleton(base)
    for k in range(4):
        t, f = skel.triangle_members[k][0]
        corners = [skel.vertex_of[t][v] for v in range(4) if v != f]
        for a in corners:
            for b in corners:
                if a == b:
                    continue
                tri = insert_arch(base, k, (a, b), skel)
                assert _counts(tri)[0] == 3 and tri.tet_count == 3
                assert tri.is_closed() and validate(tri).valid


def test_arch_same_vertex_is_illegal():
    tri = figure_eight()
    with pytest.raises(IllegalMove):
        insert_arch(tri, 0, (0, 0))


def test_arch_then_unarch():
    base = double_tetrahedron()
    tri, tr = apply_event_tracked(base, MoveEvent("arch", 0, (1, 2)))
    back = remove_arch(tri, tr.info["gadget"])
    assert isomorphic(back, base)


def test_arch_vertex_count_drops_by_one():
    rng = random.Random(2)
    for _ in range(30):
        tri = random_closed_valid(rng.randint(1, 3), rng)
        skel = Skeleton(tri)
        k = rng.randrange(skel.num_triangles)
        t, f = skel.triangle_members[k][0]
        corners = sorted({skel.vertex_of[t][v] for v in range(4) if v != f})
        if len(corners) < 2:
            continue
        a, b = corners[:2]
        if not (skel.links[a].is_sphere or skel.links[b].is_sphere):
            continue
        new = insert_arch(tri, k, (a, b), skel)
        assert Skeleton(new).num_vertices == skel.num_vertices - 1
        assert new.is_closed() and validate(new).valid


# -- scripts --------------------------------------------------------------------------

def test_empty_script():
    tri = double_tetrahedron()
    assert replay(tri, MoveScript(canonical_signature(tri), [])) == tri


def test_14_41_script():
    tri = double_tetrahedron()
    mid, tr = apply_event_tracked(tri, MoveEvent("14", 0))
    script = MoveScript(canonical_signature(tri), [MoveEvent("14", 0), MoveEvent("41", _new_vertex(mid, tr))])
    assert isomorphic(replay(tri, script), tri)


def test_script_text_roundtrip():
    tri = double_tetrahedron()
    script = MoveScript(canonical_signature(tri), [MoveEvent("23", 1), MoveEvent("14", 2), MoveEvent("arch", 0, (1, 2))], ["demo"])
    text = script.to_text()
    assert "base " in text and "23 t1" in text and "14 T2" in text and "arch t0 v1 v2" in text
    back = MoveScript.parse(text)
    assert back.events == script.events and back.base_signature == script.base_signature


def test_script_base_mismatch():
    script = MoveScript(canonical_signature(gieseking()), [])
    with pytest.raises(SignatureMismatch):
        replay(double_tetrahedron(), script)


def test_script_reports_failing_event():
    tri = double_tetrahedron()
    script = MoveScript(canonical_signature(tri), [MoveEvent("23", 0), MoveEvent("41", 0)])
    with pytest.raises(IllegalMove, match="1"):
        replay(tri, script)


def test_bad_script_line():
    with pytest.raises(ParseError):
        MoveScript.parse("base 00\n99 x1\n")
