from math import comb

import pytest

from polychain.chains import Chain, boundary
from polychain.complex import make_cube, make_simplex, order_complex, power
from polychain.dold import (JoinComplex, OrbitNotFree, build_g, default_necklace, eta_chain_map,
                            expected_rung, phi_operator, proper_part, sd_chain_map, solve_phi,
                            verify_pairing)
from polychain.linalg import Inconsistent
from polychain.necklace import build_L, shift_on_L


@pytest.mark.parametrize("p,m", [(p, m) for p in (2, 3) for m in range(1, 5)])
def test_join_face_counts(p, m):
    J = JoinComplex(p, m)
    assert J.dimension == m - 1
    for d in range(m):
        assert len(J.faces(d)) == comb(m, d + 1) * p ** (d + 1)


def test_join_shift_is_free_and_keeps_orientation():
    J = JoinComplex(3, 3)
    for f in J.faces():
        assert J.shift_face(f) != f
        assert J.shift_face(f, 3) == f
        c = Chain.of(J.dim(f), f)
        if J.dim(f):
            assert boundary(J, J.shift(c)) == J.shift(boundary(J, c))


def test_sd_of_an_edge():
    E = power(make_simplex(1), 1)
    sd = sd_chain_map(E)
    edge = next(iter(E.faces(1)))
    img = sd.on_face(edge)
    assert len(img) == 2
    # the two halves join up: their boundary is the boundary of the edge
    assert boundary(sd.target, img) == sd(boundary(E, Chain.of(1, edge)))


def test_sd_of_a_square():
    sq = power(make_cube(2), 1)
    sd = sd_chain_map(sq)
    top = next(iter(sq.faces(2)))
    img = sd.on_face(top)
    assert len(img) == 8 and set(map(abs, img.terms.values())) == {1}


@pytest.mark.parametrize("L", [power(make_simplex(2), 1), power(make_cube(2), 1)], ids=["triangle", "square"])
def test_sd_commutes_with_boundary(L):
    sd = sd_chain_map(L)
    order = sd.target
    for f in L.faces():
        d = L.dim(f)
        if d:
            c = Chain.of(d, f)
            assert boundary(order, sd(c)) == sd(boundary(L, c))


def test_top_face_of_L_is_fixed():
    L = build_L(1, 3)
    with pytest.raises(OrbitNotFree):
        build_g(L, 3, order=order_complex(L))


@pytest.mark.parametrize("t,p", [(1, 2), (1, 3), (2, 2)])
def test_g_properties(t, p):
    L = build_L(t, p)
    g = build_g(L, p)
    nu = shift_on_L(L)
    order = g.order
    for F in order.elements:
        v = order.vertex_of(F)
        c, k = g.join.decode(g(v))
        assert c == L.dim(F) + 1
        w = order.vertex_of(nu.face(F)[0])
        assert frozenset({g(w)}) == g.join.shift_face(frozenset({g(v)}))
    for F in order.elements:
        if L.dim(F) == 0:
            assert g.join.decode(g(order.vertex_of(F)))[0] == 1
    for face in order.faces():
        img = {g(v) for v in face}
        assert len({g.join.decode(x)[0] for x in img}) == len(face)


@pytest.mark.parametrize("t,p", [(1, 2), (1, 3), (2, 2)])
def test_eta_is_an_equivariant_chain_map(t, p):
    L = build_L(t, p)
    eta = eta_chain_map(L, p)
    J = eta.g.join
    nu = shift_on_L(L)
    for d in range(L.dimension):
        for f in L.faces(d):
            c = Chain.of(d, f)
            out = eta(c)
            assert out.degree == d and all(J.dim(x) == d for x in out.terms)
            if d:
                assert boundary(J, out) == eta(boundary(L, c))
            g, s = nu.face(f)
            assert eta(Chain.of(d, g, s)) == J.shift(out)


def test_phi_zero():
    phi = solve_phi(2, 2)
    J = phi.join
    for f in J.faces(0):
        (v,) = f
        assert phi(0, Chain.of(0, f)) == (1 if J.decode(v)[1] == 0 else 0)


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (2, 3), (3, 3), (5, 2)])
def test_phi_recurrences(p, m):
    phi = solve_phi(p, m)
    assert phi.defects() == []
    assert phi.top == m - 1


def test_single_vertex_phi_is_inconsistent():
    assert solve_phi(3, 1, mode="single").defects() == []
    with pytest.raises(Inconsistent):
        solve_phi(3, 2, mode="single")


def test_phi_operator_at_p2():
    J = JoinComplex(2, 2)
    f = next(iter(J.faces(1)))
    c = Chain.of(1, f)
    assert phi_operator(J, 1, c) == c - J.shift(c)


def test_expected_rungs():
    assert [expected_rung(d, 3) for d in range(6)] == [1, 2, 2, 1, 1, 2]


def test_pairing_small_cases():
    rep = verify_pairing("ab", 2)
    assert rep.rungs[0]["value"] == 1 and rep.ok
    rep = verify_pairing("aaa", 3)
    assert [r["value"] for r in rep.rungs] == [1, 2]
    assert rep.final_nonzero and rep.overlap > 0


def test_pairing_report_json():
    rep = verify_pairing(default_necklace(3, 2), 2)
    data = rep.to_json(timing=False)
    assert "seconds" not in data and data["ok"]
    assert "seconds" in rep.to_json()
