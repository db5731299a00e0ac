from __future__ import annotations

import random

import pytest

from trispine.errors import CapExceeded, CountMismatch, NotFoundWithinCaps, PreconditionViolated
from trispine.explorer import bfs_component, census_csv, census_one_tet, find_path, legal_events, scramble
from trispine.moves import MoveEvent, apply_event, replay
from trispine.signature import canonical_signature, from_signature, isomorphic
from trispine.skeleton import classify_vertices
from trispine.triangulation import double_tetrahedron, gieseking


def _material():
    return [e for e in census_one_tet() if e.all_material]


# -- census ---------------------------------------------------------------------------

def test_four_closed_one_tet_classes():
    closed = _material()
    assert len(closed) == 4
    assert sorted(e.counts[0] for e in closed) == [1, 1, 1, 2]
    assert all(set(e.links) == {"Sphere"} for e in closed)


def test_gieseking_is_the_ideal_class():
    ideal = [e for e in census_one_tet() if not e.all_material]
    assert len(ideal) == 1
    assert ideal[0].links == ("KleinBottle",)
    assert isomorphic(ideal[0].tri, gieseking())


def test_census_csv():
    text = census_csv(census_one_tet())
    lines = text.splitlines()
    assert lines[0] == "signature,V,E,F,T,links,all_material"
    assert len(lines) == 6
    assert sum(line.endswith(",1") for line in lines[1:]) == 4


def test_one_tet_components_are_single_nodes():
    for e in _material():
        graph = bfs_component(e.tri)
        assert graph.nodes == [canonical_signature(e.tri)] and graph.edges == []


# -- breadth-first closure ------------------------------------------------------------

def test_double_tetrahedron_component():
    base = double_tetrahedron()
    graph = bfs_component(base, tet_cap=4)
    assert canonical_signature(apply_event(base, MoveEvent("23", 0))) in graph.nodes
    pairs = {(a, b) for a, _, b in graph.edges}
    assert all((b, a) in pairs for a, b in pairs)
    counts = classify_vertices(base)[1:]
    for a, ev, b in graph.edges:
        src = from_signature(graph.nodes[a])
        assert canonical_signature(apply_event(src, ev)) == graph.nodes[b]
        assert classify_vertices(src)[1:] == counts
    assert max(from_signature(s).tet_count for s in graph.nodes) <= 4


def test_flip_graph_output():
    graph = bfs_component(double_tetrahedron(), tet_cap=4)
    assert graph.to_text().startswith("moves 23,32 tet-cap 4 nodes 3 edges 9\n")
    assert graph.to_dot().count("->") == 9


def test_node_cap_reports_partial_graph():
    with pytest.raises(CapExceeded) as info:
        bfs_component(double_tetrahedron(), tet_cap=5, node_cap=2)
    assert len(info.value.partial.nodes) == 2
    assert not info.value.partial.complete


def test_bad_seed_and_moves():
    with pytest.raises(PreconditionViolated):
        bfs_component(double_tetrahedron(), moves=("22",))
    with pytest.raises(PreconditionViolated):
        bfs_component(double_tetrahedron(), tet_cap=0)


def test_legal_events_order():
    tri = apply_event(double_tetrahedron(), MoveEvent("23", 0))
    kinds = [ev.kind for ev in legal_events(tri, ("23", "32", "14", "41"))]
    assert kinds == sorted(kinds, key=["23", "32", "14", "41"].index)
    assert kinds.count("14") == 3


# -- paths ----------------------------------------------------------------------------

def test_same_triangulation_gives_empty_path():
    assert len(find_path(gieseking(), gieseking()).events) == 0


def test_vertex_counts_must_agree():
    one, two = sorted(_material(), key=lambda e: e.counts[0])[::3]
    with pytest.raises(CountMismatch):
        find_path(one.tri, two.tri)


def test_isolated_nodes_are_inconclusive():
    ones = [e.tri for e in _material() if e.counts[0] == 1]
    with pytest.raises(NotFoundWithinCaps):
        find_path(ones[0], ones[1])


def test_scramble_and_recover():
    rng = random.Random(2)
    base = double_tetrahedron()
    for _ in range(5):
        script, target, largest = scramble(base, 8, rng)
        assert largest <= base.tet_count + 2
        assert canonical_signature(replay(base, script)) == canonical_signature(target)
        path = find_path(base, target, tet_cap=largest + 2)
        assert canonical_signature(replay(base, path)) == canonical_signature(target)


def test_with_one_four_moves():
    base = double_tetrahedron()
    target = apply_event(base, MoveEvent("14", 1))
    path = find_path(base, target, moves=("23", "32", "14", "41"), tet_cap=5)
    assert len(path.events) == 1
    assert isomorphic(replay(base, path), target)


# -- determinism ----------------------------------------------------------------------

def test_workers_do_not_change_results():
    base = double_tetrahedron()
    one = bfs_component(base, tet_cap=5, workers=1).to_text()
    four = bfs_component(base, tet_cap=5, workers=4).to_text()
    assert one == four
    _, target, largest = scramble(base, 10, random.Random(6))
    a = find_path(base, target, tet_cap=largest + 2, workers=1).to_text()
    b = find_path(base, target, tet_cap=largest + 2, workers=4).to_text()
    assert a == b
