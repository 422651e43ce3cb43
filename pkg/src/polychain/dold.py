"""Chain-level Dold argument: eta_# = g_# sd_#, the functionals phi_d and the pairing ladder.

The shift nu fixes the top face of L = (Delta_{p-1})^t, so the subdivision is
taken over the proper faces only. Their dimensions run over 0..D-1 with
D = t(p-1), which is exactly what D copies of Z_p in the join can absorb.
"""

from dataclasses import dataclass, field
import time

from .chains import Chain, boundary
from .complex import OrderComplex, PolytopalComplex, Subcomplex
from .linalg import Inconsistent, permutation_sign, solve_mod_p
from .necklace import (CyclicShift, Necklace, _witness_faces, build_h, shift_on_L,
                       winner_map)
from .polymap import induce_chain_map


class OrbitNotFree(ValueError):
    pass


class PairingMismatch(AssertionError):
    pass


# ---------------------------------------------------------------- join

class JoinComplex(PolytopalComplex):
    """Z_p^{*m}: vertex (c, g) has id (c-1) p + g, realized on the basis of R^{mp}."""

    def __init__(self, p, m):
        if p < 2 or m < 1:
            raise ValueError("need p >= 2 and m >= 1")
        self.p, self.m = p, m
        nv = p * m
        coords = [[int(i == j) for j in range(nv)] for i in range(nv)]
        faces = []

        def grow(face, c):
            for c2 in range(c, m + 1):
                for g in range(p):
                    f = face + [self.vertex(c2, g)]
                    faces.append(f)
                    grow(f, c2 + 1)

        grow([], 1)
        super().__init__(coords, faces, name="join(p=%d,m=%d)" % (p, m))

    def vertex(self, c, g):
        return (c - 1) * self.p + g % self.p

    def decode(self, v):
        c, g = divmod(v, self.p)
        return c + 1, g

    def shift_face(self, face, k=1):
        # copy order is preserved, so the sorted orientation is kept
        return frozenset(self.vertex(c, g + k) for c, g in map(self.decode, face))

    def shift(self, chain, k=1):
        out = {}
        for f, m in chain.terms.items():
            g = self.shift_face(f, k)
            out[g] = out.get(g, 0) + m
        return Chain(chain.degree, out)


# ---------------------------------------------------------------- chain maps

def _simplex_term(tup):
    """(face, sign) of an ordered vertex tuple against the sorted orientation."""
    return frozenset(tup), permutation_sign(tup)


class FaceChainMap:
    """Linear extension of a memoized face -> chain rule."""

    def __init__(self, rule, source, target):
        self.rule = rule
        self.source, self.target = source, target
        self._memo = {}

    def on_face(self, face):
        out = self._memo.get(face)
        if out is None:
            out = self._memo[face] = self.rule(face)
        return out

    def __call__(self, chain):
        out = {}
        for f, m in chain.terms.items():
            for g, c in self.on_face(f).terms.items():
                out[g] = out.get(g, 0) + m * c
        return Chain(chain.degree, out)


def proper_part(L):
    top = L.dimension
    return Subcomplex(L, lambda f: L.dim(f) < top, name="proper(%s)" % getattr(L, "name", "L"))


def _cone(b, chain):
    out = {}
    for f, m in chain.terms.items():
        g, s = _simplex_term((b,) + tuple(sorted(f)))
        out[g] = out.get(g, 0) + s * m
    return Chain(chain.degree + 1, out)


def sd_chain_map(L, order=None):
    """Barycentric subdivision C(L) -> C(order complex); sd(s) = cone(b_s, sd(ds)).

    `order` may be the order complex of a subcomplex; sd is then defined on its faces.
    """
    if order is None:
        order = OrderComplex(L)
    sd = None

    def rule(face):
        b = order.vertex_of(face)
        if L.dim(face) == 0:
            return Chain.of(0, frozenset((b,)))
        return _cone(b, sd(boundary(L, Chain.of(L.dim(face), face))))

    sd = FaceChainMap(rule, L, order)
    return sd


@dataclass
class OrbitMap:
    """Equivariant vertex map from the order complex to the join."""

    order: object
    join: JoinComplex
    images: dict
    representatives: list

    def __call__(self, v):
        return self.images[v]

    def chain_map(self):
        def rule(face):
            img = tuple(self.images[v] for v in sorted(face))
            g, s = _simplex_term(img)
            if len(g) < len(img):
                return Chain(len(face) - 1)
            return Chain.of(len(face) - 1, g, s)

        return FaceChainMap(rule, self.order, self.join)


def _lex(face):
    return tuple(tuple(sorted(x)) for x in face)


def build_g(L, p, m=None, order=None):
    """g(rep) = (copy dim+1, 0) on the lexicographically smallest face of each orbit."""
    if order is None:
        order = OrderComplex(proper_part(L))
    need = 1 + max(L.dim(f) for f in order.elements)
    m = need if m is None else m
    if m < need:
        raise ValueError("join needs at least %d copies, got %d" % (need, m))
    nu = shift_on_L(L)
    J = JoinComplex(p, m)
    images, reps = {}, []
    for F in order.elements:
        if order.vertex_of(F) in images:
            continue
        orbit = [F]
        for _ in range(p - 1):
            orbit.append(nu.face(orbit[-1])[0])
        if len(set(orbit)) < p:
            raise OrbitNotFree("nu fixes an element of the orbit of %r" % (_lex(F),))
        rep = min(orbit, key=_lex)
        reps.append(rep)
        G = rep
        for k in range(p):
            images[order.vertex_of(G)] = J.vertex(L.dim(G) + 1, k)
            G = nu.face(G)[0]
    return OrbitMap(order, J, images, reps)


class EtaMap(FaceChainMap):
    def __init__(self, sd, g):
        self.sd, self.g = sd, g
        gs = g.chain_map()
        super().__init__(lambda face: gs(sd.on_face(face)), sd.source, g.join)


def eta_chain_map(L, p, m=None):
    order = OrderComplex(proper_part(L))
    return EtaMap(sd_chain_map(L, order), build_g(L, p, m, order))


# ---------------------------------------------------------------- phi

def phi_operator(J, d, chain):
    """The operator that phi_d is pulled back along: nu^{-1} - nu for odd d, the norm for even d."""
    p = J.p
    if d % 2 == 0:
        out = Chain(chain.degree)
        for k in range(1, p + 1):
            out = out + J.shift(chain, k)
        return out
    if p == 2:
        # nu^{-1} - nu vanishes at p = 2; 1 - nu matches the ladder's nu - 1
        return chain - J.shift(chain, 1)
    return J.shift(chain, p - 1) - J.shift(chain, 1)


@dataclass
class PhiSequence:
    p: int
    m: int
    join: JoinComplex
    values: list = field(default_factory=list)
    mode: str = "orbit"

    @property
    def top(self):
        return len(self.values) - 1

    def __call__(self, d, chain):
        phi = self.values[d]
        return sum(m * phi.get(f, 0) for f, m in chain.terms.items()) % self.p

    def defects(self):
        """Basis simplices where a recurrence fails."""
        bad = []
        for d in range(1, self.top + 1):
            for s in self.join.faces(d):
                c = Chain.of(d, s)
                lhs = self(d, phi_operator(self.join, d, c))
                rhs = self(d - 1, boundary(self.join, c))
                if lhs != rhs:
                    bad.append((d, tuple(sorted(s)), lhs, rhs))
        return bad


def solve_phi(p, m, degrees=None, mode="orbit"):
    """phi_0..phi_top over Z/p with free coordinates set to 0.

    mode "orbit" puts phi_0 = 1 on the group element 0 of every copy; mode
    "single" uses a single vertex of copy 1, which makes degree 1 inconsistent
    as soon as m >= 2.
    """
    top = m - 1 if degrees is None else max(degrees)
    if top > m - 1:
        raise ValueError("phi_%d needs at least %d copies" % (top, top + 1))
    J = JoinComplex(p, m)
    if mode == "orbit":
        phi0 = {frozenset((J.vertex(c, 0),)): 1 for c in range(1, m + 1)}
    elif mode == "single":
        phi0 = {frozenset((J.vertex(1, 0),)): 1}
    else:
        raise ValueError("unknown mode %r" % mode)
    seq = PhiSequence(p, m, J, [phi0], mode)
    for d in range(1, top + 1):
        basis = list(J.faces(d))
        col = {f: i for i, f in enumerate(basis)}
        rows, rhs = [], []
        for s in basis:
            c = Chain.of(d, s)
            rows.append({col[f]: v for f, v in phi_operator(J, d, c).terms.items()})
            rhs.append(seq(d - 1, boundary(J, c)))
        try:
            sol = solve_mod_p(rows, rhs, p)
        except Inconsistent as e:
            raise Inconsistent("phi_%d has no solution (p=%d, m=%d, mode=%s); system: %r"
                               % (d, p, m, mode, list(zip(rows, rhs))), e.rows) from e
        seq.values.append({basis[i]: v for i, v in sol.items()})
    return seq


# ---------------------------------------------------------------- pairing

def default_necklace(n, t):
    """Beads cycling through t types: abab... for t = 2."""
    if n < t:
        raise ValueError("need at least one bead per type")
    return Necklace(tuple(chr(ord("a") + k % t) for k in range(n)))


def expected_rung(d, p):
    l = d // 2
    return ((-1) ** l if d % 2 == 0 else (-1) ** (l + 1)) % p


@dataclass
class PairingReport:
    necklace: str
    n: int
    t: int
    p: int
    copies: int
    rungs: list
    closing: int
    final_nonzero: bool
    witness_faces: int
    necklace_witnesses: int
    overlap: int
    seconds: float = 0.0

    @property
    def ok(self):
        return (all(r["ok"] for r in self.rungs) and self.final_nonzero
                and self.closing == self.rungs[-1]["value"] and self.overlap > 0)

    def to_json(self, timing=True):
        out = {"necklace": self.necklace, "n": self.n, "t": self.t, "p": self.p,
               "copies": self.copies, "rungs": self.rungs, "closing": self.closing,
               "final_nonzero": self.final_nonzero, "witness_faces": self.witness_faces,
               "necklace_witnesses": self.necklace_witnesses, "overlap": self.overlap,
               "ok": self.ok}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def verify_pairing(necklace, p, eta=None, phi=None, strict=True):
    """Run the ladder phi_d eta lambda (Op h_d) for d = 0..D-1 and the final step."""
    t0 = time.perf_counter()
    if isinstance(necklace, str):
        necklace = Necklace.from_string(necklace)
    n, t = necklace.n, necklace.t
    D = t * (p - 1)
    hc = build_h(n, t, p)
    lam = winner_map(necklace, p, K=hc.K)
    sharp = induce_chain_map(lam)
    L = lam.target
    eta = eta or eta_chain_map(L, p, D)
    phi = phi or solve_phi(p, D)
    nu = CyclicShift(("S",), n, p)
    rungs = []
    for d in range(D):
        x = nu.norm(hc.h[d]) if d % 2 == 0 else nu.diff(hc.h[d])
        value = phi(d, eta(sharp(x)))
        want = expected_rung(d, p)
        rungs.append({"degree": d, "operator": "norm" if d % 2 == 0 else "diff",
                      "value": value, "expected": want, "ok": value == want})
    image = sharp(hc.top).mod(p)
    closing = phi(D - 1, eta(boundary(L, image)))
    mine = {f for f in hc.top.terms if sharp.alpha(f) % p}
    theirs = set(_witness_faces(lam, hc, sharp))
    rep = PairingReport(str(necklace), n, t, p, eta.g.join.m, rungs, closing, bool(image),
                        len(mine), len(theirs), len(mine & theirs),
                        time.perf_counter() - t0)
    if strict and not rep.ok:
        raise PairingMismatch("pairing ladder failed: %r" % rep.to_json(timing=False))
    return rep
