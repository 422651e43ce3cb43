from itertools import combinations, product as iproduct
import json
import random

from hypothesis import given, settings, strategies as st
import pytest

from polychain.complex import (NotClosed, PolytopalComplex, complex_from_json, dumps, make_cube,
                               make_path, make_polygon, make_simplex, materialize, order_complex,
                               power, product, subcomplex, validate)
from polychain.suite import hexagon, random_subcomplex


def fvec(P):
    return [sum(1 for _ in P.faces(d)) for d in range(P.dimension + 1)]


def test_simplex_counts():
    assert fvec(make_simplex(0)) == [1]
    assert fvec(make_simplex(2)) == [3, 3, 1]
    assert sum(fvec(make_simplex(4))) == 31


def test_cube_counts():
    assert fvec(make_cube(1)) == [2, 1]
    assert fvec(make_cube(3)) == [8, 12, 6, 1]
    assert fvec(make_cube(4)) == [16, 32, 24, 8, 1]


@pytest.mark.parametrize("P", [make_simplex(3), make_cube(3), make_cube(4), hexagon(),
                               make_path(3), order_complex(make_cube(2))],
                         ids=["simplex3", "cube3", "cube4", "hexagon", "path3", "sd_square"])
def test_constructors_validate(P):
    assert validate(P) == []


def test_point_times_q_is_q():
    Q = make_cube(2)
    PQ = product(make_simplex(0), Q)
    assert fvec(PQ) == fvec(Q)


def test_edge_times_edge_is_square():
    sq = product(make_simplex(1), make_simplex(1))
    assert fvec(sq) == [4, 4, 1]


def test_face_counts_multiply():
    # generating polynomials multiply: f(P x Q)(x) = f(P)(x) f(Q)(x)
    P, Q = make_simplex(2), make_cube(1)
    fp, fq = fvec(P), fvec(Q)
    want = [0] * (len(fp) + len(fq) - 1)
    for i, a in enumerate(fp):
        for j, b in enumerate(fq):
            want[i + j] += a * b
    assert fvec(product(P, Q)) == want


def test_power():
    P = make_simplex(2)
    assert fvec(power(P, 1)) == fvec(P)
    assert fvec(power(make_cube(1), 3)) == fvec(make_cube(3))
    assert sum(1 for _ in power(P, 3).vertices()) == 27


def test_power_of_edge_lattice_matches_cube():
    # (edge)^3 and the 3-cube: same face lattice once vertices are matched by coordinates
    C = make_cube(3)
    E3 = power(make_cube(1), 3)
    key = lambda P, f: frozenset(tuple(int(x) for x in P.coords(v)) for v in P.face_vertices(f))
    assert {key(C, f) for f in C.faces()} == {key(E3, f) for f in E3.faces()}


def test_product_associative_up_to_relabeling():
    P, Q, R = make_simplex(1), make_cube(1), make_simplex(2)
    left = product(product(P, Q), R)
    right = product(P, product(Q, R))
    key = lambda X, f: frozenset(tuple(X.coords(v)) for v in X.face_vertices(f))
    assert {key(left, f) for f in left.faces()} == {key(right, f) for f in right.faces()}


def test_subcomplex_examples():
    sq = make_cube(2)
    assert fvec(subcomplex(sq, lambda f: True)) == fvec(sq)
    bd = subcomplex(sq, lambda f: len(f) < 4)
    assert fvec(bd) == [4, 4]
    with pytest.raises(NotClosed):
        subcomplex(sq, lambda f: len(f) != 2)


def test_validate_flags_bad_intersection():
    # two triangles sharing two vertices without the common edge as a face
    coords = [(0, 0), (1, 0), (0, 1), (1, 1)]
    faces = [[0], [1], [2], [3], [0, 1], [0, 2], [1, 2], [1, 3], [2, 3], [0, 1, 2], [1, 2, 3]]
    P = PolytopalComplex(coords, [f for f in faces if f != [1, 2]])
    kinds = {v.kind for v in validate(P)}
    assert "IntersectionNotAFace" in kinds


def test_validate_flags_missing_edge():
    sq = make_cube(2)
    faces = [f for f in sq.faces() if f != frozenset((0, 1))]
    P = PolytopalComplex([sq.coords(v) for v in sq.vertices()], faces)
    assert "MissingSubface" in {v.kind for v in validate(P)}


def test_validate_flags_nonconvex_position():
    # a "square" whose vertex order crosses: the declared edges are not faces
    P = make_polygon([(0, 0), (1, 1), (1, 0), (0, 1)])
    assert validate(P)


def test_minimal_face_examples():
    sq = make_cube(2)
    assert sq.minimal_face_containing({2}) == frozenset({2})
    assert sq.minimal_face_containing({0, 3}) == frozenset({0, 1, 2, 3})
    two = PolytopalComplex([(0,), (1,), (5,)], [[0], [1], [2], [0, 1]])
    assert two.minimal_face_containing({0, 2}) is None


@pytest.mark.parametrize("P", [make_cube(3), make_simplex(4), hexagon(), product(make_simplex(1), make_simplex(2))],
                         ids=["cube3", "simplex4", "hexagon", "prism"])
def test_minimal_face_brute_force(P):
    faces = list(P.faces())
    assert len(faces) <= 500
    sets = {f: frozenset(P.face_vertices(f)) for f in faces}
    rng = random.Random(1)
    verts = list(P.vertices())
    for _ in range(60):
        S = set(rng.sample(verts, rng.randint(1, min(4, len(verts)))))
        got = P.minimal_face_containing(S)
        containing = [f for f in faces if S <= sets[f]]
        if not containing:
            assert got is None
            continue
        best = min(containing, key=lambda f: len(sets[f]))
        assert sets[got] == sets[best]
        assert all(sets[got] <= sets[f] for f in containing)


def test_order_complex_examples():
    O1 = order_complex(make_simplex(1))
    assert fvec(O1) == [3, 2]
    O2 = order_complex(make_cube(2))
    assert fvec(O2)[0] == 9 and fvec(O2)[-1] == 8
    for P in (make_simplex(2), make_cube(3)):
        O = order_complex(P)
        assert O.dimension == P.dimension
        assert all(len(f) == O.dim(f) + 1 for f in O.faces())
    assert validate(order_complex(make_cube(2))) == []


def test_order_complex_barycenters_are_exact():
    O = order_complex(make_simplex(2))
    top = O.vertex_of(frozenset({0, 1, 2}))
    assert all(x.denominator == 3 for x in O.coords(top))


def test_json_round_trip():
    for P in (make_cube(2), hexagon()):
        Q = complex_from_json(json.loads(dumps(P)))
        assert fvec(Q) == fvec(P)
        assert [Q.coords(v) for v in Q.vertices()] == [P.coords(v) for v in P.vertices()]
    prod = product(make_simplex(1), make_cube(1))
    again = complex_from_json(json.loads(dumps(prod)))
    assert fvec(again) == fvec(prod)


def test_product_vertex_encoding():
    prod = product(make_simplex(2), make_cube(2))
    codes = set()
    for v in prod.vertices():
        c = prod.encode_vertex(v)
        assert prod.decode_vertex(c) == v
        codes.add(c)
    assert codes == set(range(12))
    assert validate(materialize(prod)) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_random_subcomplexes_are_closed_and_valid(seed):
    P = random_subcomplex(random.Random(seed), 4)
    assert validate(P) == []
