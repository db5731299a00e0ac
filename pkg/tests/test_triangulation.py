from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from trispine.errors import ParseError
from trispine.explorer import _one_tet_gluings
from trispine.generators import random_closed_valid, random_gluing
from trispine.perm import ALL_PERMS, EDGE_VERTICES, IDENTITY, Perm4, edge_index
from trispine.signature import canonical_signature, find_isomorphism, from_signature, isomorphic, random_relabel
from trispine.skeleton import (
    Skeleton,
    classify_vertices,
    euler_characteristic,
    is_orientable,
    is_simplicial,
    validate,
)
from trispine.triangulation import Triangulation, double_tetrahedron, figure_eight, gieseking, parse, serialize

perms = st.sampled_from(ALL_PERMS)


# -- permutations ---------------------------------------------------------------------

def test_24_permutations():
    assert len(set(ALL_PERMS)) == 24
    assert all(sorted(p) == [0, 1, 2, 3] for p in ALL_PERMS)


@given(perms, perms, perms)
def test_composition_is_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(perms)
def test_inverse(p):
    assert p * p.inverse() == IDENTITY
    assert p.inverse() * p == IDENTITY


@given(perms, perms)
def test_product_applies_right_factor_first(p, q):
    assert all((p * q)[i] == p[q[i]] for i in range(4))


@given(perms, perms)
def test_sign_is_a_homomorphism(p, q):
    assert (p * q).sign == p.sign * q.sign


def test_bad_permutation_strings():
    for text in ("0125", "012", "0113"):
        with pytest.raises(ValueError):
            Perm4.from_string(text)


def test_edge_order():
    assert EDGE_VERTICES == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert [edge_index(b, a) for a, b in EDGE_VERTICES] == list(range(6))


# -- parsing --------------------------------------------------------------------------

def test_gieseking_gluing_pairs_faces_as_drawn():
    tri = gieseking()
    assert tri.tet_count == 1 and tri.is_closed()
    # 012 -> 023 (face 3 onto face 1) and 013 -> 123 (face 2 onto face 0)
    _, f, p = tri.gluing(0, 3)
    assert f == 1 and [p[v] for v in (0, 1, 2)] == [0, 2, 3]
    _, f, p = tri.gluing(0, 2)
    assert f == 0 and [p[v] for v in (0, 1, 3)] == [1, 2, 3]


def test_parse_roundtrip():
    for tri in (gieseking(), double_tetrahedron(), figure_eight()):
        text = serialize(tri)
        assert parse(text) == tri
        assert serialize(parse(text)) == text


def test_parse_ignores_whitespace_and_comments():
    text = "# a comment\n\n  " + serialize(gieseking()).replace(" ", "   ")
    assert parse(text) == gieseking()


def test_empty_table():
    tri = parse("tets 0\n")
    assert tri.tet_count == 0
    assert validate(tri).valid
    assert euler_characteristic(tri) == 0


def test_malformed_permutation_is_rejected():
    text = serialize(gieseking()).replace(str(gieseking().gluing(0, 0)[2]), "0125", 1)
    with pytest.raises(ParseError):
        parse(text)


def test_wrong_record_count_is_rejected():
    with pytest.raises(ParseError):
        parse("tets 2\n0: - - - -\n")


def test_non_involutive_table_is_rejected():
    rows = [[(0, 1, IDENTITY), None, None, None]]
    with pytest.raises(Exception):
        Triangulation(rows)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_gluing_is_an_involution(n, seed):
    tri = random_gluing(n, random.Random(seed))
    for t in range(n):
        for f in range(4):
            g = tri.gluing(t, f)
            if g is None:
                continue
            u, h, p = g
            assert p[f] == h
            assert tri.gluing(u, h) == (t, f, p.inverse())


# -- skeleton -------------------------------------------------------------------------

def test_double_tetrahedron_skeleton():
    tri = double_tetrahedron()
    skel = Skeleton(tri)
    assert skel.counts() == (4, 6, 4, 2)
    assert [link.classification for link in skel.links] == ["Sphere"] * 4
    assert classify_vertices(tri)[1:] == (4, 0)
    assert euler_characteristic(tri) == 0
    assert not is_simplicial(tri)


def test_figure_eight_skeleton():
    tri = figure_eight()
    skel = Skeleton(tri)
    assert skel.num_vertices == 1
    assert sorted(len(m) for m in skel.edge_members) == [6, 6]
    link = skel.links[0]
    assert link.classification == "Torus" and link.orientable and link.euler_characteristic == 0
    assert classify_vertices(tri)[1:] == (0, 1)
    assert validate(tri).valid


def test_gieseking_skeleton():
    tri = gieseking()
    skel = Skeleton(tri)
    link = skel.links[0]
    assert skel.num_vertices == 1
    assert link.classification == "KleinBottle"
    assert link.euler_characteristic == 0 and not link.orientable
    assert classify_vertices(tri)[1:] == (0, 1)
    assert validate(tri).valid
    assert euler_characteristic(tri) == 1 - skel.num_edges + 2 - 1
    assert not is_orientable(tri)


def test_unglued_tetrahedron():
    tri = Triangulation([[None] * 4])
    assert Skeleton(tri).counts() == (4, 6, 4, 1)
    assert is_simplicial(tri)
    assert not tri.is_closed()


def _orbit_oracle(tri):
    """Edge classes by brute-force closure of the gluing relation on ordered edges."""
    seen = {}
    cls = 0
    for t in range(tri.tet_count):
        for a, b in EDGE_VERTICES:
            if (t, a, b) in seen or (t, b, a) in seen:
                continue
            todo = [(t, a, b)]
            seen[(t, a, b)] = cls
            while todo:
                u, x, y = todo.pop()
                for f in range(4):
                    if f in (x, y) or tri.gluing(u, f) is None:
                        continue
                    w, _, p = tri.gluing(u, f)
                    nxt = (w, p[x], p[y])
                    if nxt not in seen:
                        seen[nxt] = cls
                        todo.append(nxt)
            cls += 1
    return cls


def test_edge_classes_match_orbit_oracle():
    rng = random.Random(7)
    for _ in range(40):
        tri = random_gluing(rng.randint(1, 4), rng)
        assert Skeleton(tri).num_edges == _orbit_oracle(tri)


def test_invalid_one_tet_table_names_the_edge():
    bad = [tri for tri in _one_tet_gluings() if not validate(tri).valid]
    assert bad  # the exhaustive search finds orientation-reversing edges
    report = validate(bad[0])
    assert report.reversed_edges
    assert all(0 <= e < Skeleton(bad[0]).num_edges for e in report.reversed_edges)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_closed_counting(n, seed):
    tri = random_closed_valid(n, random.Random(seed))
    skel = Skeleton(tri)
    assert 2 * skel.num_triangles == 4 * tri.tet_count
    assert sum(len(m) for m in skel.edge_members) == 6 * tri.tet_count
    for link in skel.links:
        assert link.closed
        # projective-plane links (chi 1) are allowed in a pseudo-manifold
        assert link.euler_characteristic <= 2
        if link.orientable:
            assert link.euler_characteristic % 2 == 0
        assert (link.classification == "Sphere") == (link.euler_characteristic == 2)


def test_second_subdivision_is_simplicial():
    from trispine.macros import barycentric_direct

    tri = barycentric_direct(barycentric_direct(double_tetrahedron()))
    assert tri.tet_count == 2 * 24 * 24
    assert is_simplicial(tri)


# -- signatures -----------------------------------------------------------------------

def test_gieseking_relabel_invariance():
    sig = canonical_signature(gieseking())
    for p in ALL_PERMS:
        assert canonical_signature(gieseking().relabel([0], [p])) == sig


def test_distinct_triangulations_have_distinct_signatures():
    assert not isomorphic(double_tetrahedron(), figure_eight())
    assert canonical_signature(double_tetrahedron()) != canonical_signature(figure_eight())


def test_random_relabel_keeps_signature():
    rng = random.Random(11)
    for _ in range(100):
        tri = random_closed_valid(3, rng)
        assert canonical_signature(random_relabel(tri, rng)) == canonical_signature(tri)


def test_from_signature_roundtrip():
    rng = random.Random(5)
    for _ in range(20):
        tri = random_closed_valid(rng.randint(1, 3), rng)
        back = from_signature(canonical_signature(tri))
        assert isomorphic(back, tri)
        assert find_isomorphism(tri, back) is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10**6))
def test_isomorphic_triangulations_agree_on_invariants(n, seed):
    rng = random.Random(seed)
    tri = random_closed_valid(n, rng)
    other = random_relabel(tri, rng)
    a, b = Skeleton(tri), Skeleton(other)
    assert a.counts() == b.counts()
    assert sorted(l.classification for l in a.links) == sorted(l.classification for l in b.links)
    assert bool(validate(tri)) == bool(validate(other))
