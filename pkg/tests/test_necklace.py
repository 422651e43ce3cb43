from itertools import product as iproduct

from hypothesis import given, settings, strategies as st
import pytest

from polychain.chains import Chain, boundary
from polychain.necklace import (CyclicShift, Necklace, Splitting, TooLarge, _power_boundary,
                                brute_force_split, build_h, build_K, build_L, build_S,
                                check_equivariance, decode_splitting, find_fair_split,
                                full_image_mask, s_vertex, verify_splitting, winner_map, winners)
from polychain.polymap import induce_chain_map, validate_polytopal


def sv(k, r, n):
    return s_vertex(k, r, n)


def test_build_S_counts():
    for n, p in [(1, 2), (2, 3), (4, 5)]:
        S = build_S(n, p)
        assert S.n_vertices == 1 + p * n
        assert len(S.faces(1)) == p * n


def test_K_small_case():
    K = build_K(1, 1, 2)
    verts = set(K.vertices())
    assert verts == {v for v in iproduct(range(3), repeat=2) if v != (0, 0)}
    assert K.dimension == 1
    assert build_K(2, 2, 2).dimension == 2


def test_K_face_rule_matches_vertex_rule():
    # a product face is in K iff every one of its vertices has a coordinate at position n
    n, p = 2, 2
    K = build_K(n, 1, p)
    ends = {sv(n, r, n) for r in range(1, p + 1)}
    P = K.parent
    for f in P.faces():
        by_vertices = all(any(x in ends for x in v) for v in P.face_vertices(f))
        assert (f in K) == by_vertices


def test_nu_moves_every_vertex_of_K():
    K = build_K(2, 1, 3)
    nu = CyclicShift(("S",), 2, 3)
    assert all(nu.vertex(v) != v for v in K.vertices())
    assert all(nu.vertex(v, 3) == v for v in K.vertices())


def test_decode_whole_necklace():
    nk = Necklace.from_string("abab")
    s = decode_splitting((sv(4, 2, 4), sv(4, 2, 4)), nk, 2)
    assert s == Splitting((), (2,))


def test_decode_depends_on_coordinate_order():
    nk = Necklace.from_string("aabb")
    v = (sv(2, 1, 4), sv(4, 2, 4))
    assert decode_splitting(v, nk, 2) == Splitting((2,), (1, 2))
    # the same cuts listed the other way round: the first part now goes to thief 2
    assert decode_splitting(v[::-1], nk, 2) == Splitting((2,), (2, 2))


def test_decode_ignores_origin():
    nk = Necklace.from_string("abc")
    assert decode_splitting((0, sv(3, 3, 3), 0), nk, 3) == Splitting((), (3,))


def test_winner_examples():
    nk = Necklace.from_string("aa")
    assert winners(nk, Splitting((), (2,)), 2) == (2,)
    assert winners(nk, Splitting((1,), (1, 2)), 2) == (1,)
    assert winners(nk, Splitting((1,), (2, 1)), 2) == (2,)


@pytest.mark.parametrize("beads,p", [("ab", 2), ("aab", 2), ("abba", 3), ("abab", 2), ("aba", 3)])
def test_winner_map_matches_reference(beads, p):
    nk = Necklace.from_string(beads)
    lam = winner_map(nk, p)
    for v in lam.source.vertices():
        ref = winners(nk, decode_splitting(v, nk, p), p)
        assert lam(v) == tuple(r - 1 for r in ref)


@pytest.mark.parametrize("n,t,p", [(n, 1, 2) for n in range(1, 5)] + [(n, 1, 3) for n in range(1, 5)]
                         + [(2, 2, 2), (2, 2, 3)])
def test_equivariance_exhaustive(n, t, p):
    nk = Necklace(tuple(chr(97 + k % t) for k in range(n))) if n >= t else None
    lam = winner_map(nk, p)
    assert check_equivariance(lam, strict=True) == []


@pytest.mark.parametrize("beads,p", [("ab", 2), ("aa", 3), ("ab", 3)])
def test_polytopal_on_all_faces(beads, p):
    lam = winner_map(Necklace.from_string(beads), p)
    assert validate_polytopal(lam) == []
    for f in lam.source.faces():
        assert lam.image_dim(f) <= lam.source.dim(f)


@pytest.mark.parametrize("n,t,p", [(2, 1, 2), (3, 1, 3), (2, 2, 2), (4, 1, 2)])
def test_h_relations_mod_p(n, t, p):
    hc = build_h(n, t, p)
    nu = CyclicShift(("S",), n, p)
    K = hc.K
    for d in range(1, t * (p - 1) + 1):
        op = nu.norm if d % 2 == 1 else nu.diff
        assert _power_boundary(hc.h[d], n).mod(p) == op(hc.h[d - 1]).mod(p)
    assert hc.h[0].terms == {(frozenset({sv(n, 1, n)}),) + (frozenset({0}),) * (t * (p - 1)): 1}
    for d, h in enumerate(hc.h):
        assert h.degree == d and all(f in K for f in h.terms)


def test_fast_boundary_matches_generic():
    hc = build_h(2, 1, 3)
    for h in hc.h[1:]:
        assert _power_boundary(h, 2) == boundary(hc.K, h)


def test_h_cannot_hold_over_the_integers():
    # boundaries have total coefficient 0 while the norm of a vertex has total p
    hc = build_h(2, 1, 2)
    nu = CyclicShift(("S",), 2, 2)
    assert sum(nu.norm(hc.h[0]).terms.values()) == 2
    assert sum(_power_boundary(hc.h[1], 2).terms.values()) == 0


@pytest.mark.parametrize("beads,p", [("abba", 3), ("aab", 2), ("abab", 2), ("abc", 2), ("aabbab", 3)])
def test_full_image_mask_matches_image_dim(beads, p):
    nk = Necklace.from_string(beads)
    hc = build_h(nk.n, nk.t, p)
    lam = winner_map(nk, p, K=hc.K)
    faces, full = full_image_mask(nk, hc)
    top = nk.t * (p - 1)
    assert [lam.image_dim(f) == top for f in faces] == list(full)


@pytest.mark.parametrize("beads,p", [("ab", 2), ("aab", 3), ("abab", 2), ("abcab", 2), ("aabbab", 3)])
def test_witnesses_map_onto_top_face(beads, p):
    nk = Necklace.from_string(beads)
    hc = build_h(nk.n, nk.t, p)
    lam = winner_map(nk, p, K=hc.K)
    sharp = induce_chain_map(lam)
    image = sharp(hc.top).mod(p)
    assert image
    L = lam.target
    assert set(image.terms) == {max(L.faces(), key=lambda f: L.dim(f))}
    for f in hc.top.terms:
        if sharp.alpha(f) % p:
            sets = lam.winner_sets(f)
            assert all(len(s) == p for s in sets)
            assert any(verify_splitting(nk, decode_splitting(v, nk, p), p).fair
                       for v in hc.K.face_vertices(f))


def test_split_examples():
    assert find_fair_split("aa", 2) == Splitting((1,), (1, 2)) or find_fair_split("aa", 2).cuts == (1,)
    for beads, q in [("aabb", 2), ("aab", 2), ("aaaabbbb", 4), ("abbaabab", 3), ("abcabc", 2)]:
        nk = Necklace.from_string(beads)
        rep = verify_splitting(nk, find_fair_split(nk, q), q)
        assert rep.ok, (beads, q, rep.flags)


def test_aab_gets_one_a_each():
    nk = Necklace.from_string("aab")
    rep = verify_splitting(nk, find_fair_split(nk, 2), 2)
    assert [row[0] for row in rep.counts] == [1, 1]
    assert sorted(row[1] for row in rep.counts) == [0, 1]


def test_verify_flags():
    nk = Necklace.from_string("aabb")
    assert not verify_splitting(nk, Splitting((), (1,)), 2).fair
    many = Splitting((1, 2, 3), (1, 2, 2, 1))
    rep = verify_splitting(nk, many, 2)
    assert rep.fair and not rep.within_budget and not rep.ok
    assert verify_splitting(nk, Splitting((1.5,), (1, 2)), 2).flags


def test_brute_force_examples():
    # one bead per type: floor/ceil fairness lets a single thief take both
    assert brute_force_split(Necklace.from_string("ab"), 2, 0) == Splitting((), (1,))
    nk = Necklace.from_string("aabb")
    assert brute_force_split(nk, 2, 0) is None
    assert brute_force_split(nk, 2, 1) is None
    assert brute_force_split(nk, 2, 2) is not None
    s = brute_force_split(Necklace.from_string("aaaaaa"), 3, 2)
    assert s is not None and len(s.cuts) == 2
    with pytest.raises(TooLarge):
        brute_force_split(Necklace.from_string("a" * 13), 2)


def test_splitting_json_round_trip():
    s = Splitting((2, 5), (1, 3, 2))
    assert Splitting.from_json(s.to_json()) == s
    assert s.bead_owners(6) == [1, 1, 3, 3, 3, 2]
    assert Splitting.from_bead_owners([1, 1, 3, 3, 3, 2]) == s


def test_non_prime_core_rejected():
    with pytest.raises(ValueError):
        build_K(2, 1, 4)


necklaces = st.text(alphabet="ab", min_size=2, max_size=6)


@settings(max_examples=25, deadline=None)
@given(necklaces, st.sampled_from([2, 3]))
def test_random_necklaces_split_fairly(beads, q):
    nk = Necklace.from_string(beads)
    rep = verify_splitting(nk, find_fair_split(nk, q), q)
    assert rep.ok


@settings(max_examples=10, deadline=None)
@given(st.text(alphabet="abc", min_size=3, max_size=4).filter(lambda s: len(set(s)) == 3))
def test_three_types_two_thieves(beads):
    nk = Necklace.from_string(beads)
    rep = verify_splitting(nk, find_fair_split(nk, 2), 2)
    assert rep.ok


@settings(max_examples=10, deadline=None)
@given(st.text(alphabet="ab", min_size=2, max_size=8))
def test_composite_four_thieves(beads):
    nk = Necklace.from_string(beads)
    assert verify_splitting(nk, find_fair_split(nk, 4), 4).ok
