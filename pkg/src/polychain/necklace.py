"""Fair necklace splitting through the cut complex K and the winner map.

Thieves are numbered 1..p. In the graph S the origin o has id 0 and the
vertex (k, r) has id 1 + (r-1) n + (k-1); the path of thief r lies on the
ray through the r-th basis vector. Vertices of K are tuples of S ids.
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, product as iproduct
import logging

import numpy as np

from sympy import factorint, isprime

from .chains import Chain, tensor
from .complex import PolytopalComplex, ProductComplex, Subcomplex, make_simplex, power
from .linalg import permutation_sign
from .polymap import PolytopalMap, induce_chain_map

log = logging.getLogger(__name__)


class WitnessNotFound(RuntimeError):
    pass


class TooLarge(ValueError):
    pass


class TieBreakNonEquivariant(AssertionError):
    pass


# ---------------------------------------------------------------- necklaces

@dataclass(frozen=True)
class Necklace:
    beads: tuple

    def __post_init__(self):
        if not self.beads:
            raise ValueError("empty necklace")

    @classmethod
    def from_string(cls, s):
        return cls(tuple(s))

    @property
    def n(self):
        return len(self.beads)

    @cached_property
    def types(self):
        return tuple(sorted(set(self.beads)))

    @cached_property
    def t(self):
        return len(self.types)

    @cached_property
    def type_index(self):
        idx = {x: i for i, x in enumerate(self.types)}
        return tuple(idx[b] for b in self.beads)

    @cached_property
    def counts(self):
        out = [0] * self.t
        for i in self.type_index:
            out[i] += 1
        return tuple(out)

    def __str__(self):
        if all(isinstance(b, str) and len(b) == 1 for b in self.beads):
            return "".join(self.beads)
        return repr(list(self.beads))


@dataclass(frozen=True)
class Splitting:
    """Interior cut positions (0 < k < n, increasing) and one owner per segment."""

    cuts: tuple
    owners: tuple

    def segments(self, n):
        ends = (0,) + tuple(self.cuts) + (n,)
        return list(zip(ends[:-1], ends[1:]))

    def bead_owners(self, n):
        out = []
        for (a, b), r in zip(self.segments(n), self.owners):
            out.extend([r] * (b - a))
        return out

    @classmethod
    def from_bead_owners(cls, owners):
        cuts, segs = [], [owners[0]]
        for k in range(1, len(owners)):
            if owners[k] != owners[k - 1]:
                cuts.append(k)
                segs.append(owners[k])
        return cls(tuple(cuts), tuple(segs))

    def to_json(self):
        return {"cuts": list(self.cuts), "owners": list(self.owners)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["cuts"]), tuple(data["owners"]))


def holdings(necklace, splitting, q):
    """counts[r-1][i]: number of type-i beads thief r receives."""
    out = [[0] * necklace.t for _ in range(q)]
    for i, r in zip(necklace.type_index, splitting.bead_owners(necklace.n)):
        out[r - 1][i] += 1
    return out


@dataclass
class SplitReport:
    counts: list
    n_cuts: int
    budget: int
    fair: bool
    within_budget: bool
    flags: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.flags

    def to_json(self):
        return {"counts": self.counts, "cuts": self.n_cuts, "budget": self.budget,
                "fair": self.fair, "within_budget": self.within_budget,
                "flags": self.flags, "ok": self.ok}

    def table(self, necklace):
        head = "thief " + " ".join("%4s" % x for x in necklace.types)
        rows = ["%5d " % (r + 1) + " ".join("%4d" % c for c in row)
                for r, row in enumerate(self.counts)]
        return "\n".join([head] + rows)


def verify_splitting(necklace, s, q):
    n, budget = necklace.n, necklace.t * (q - 1)
    flags = []
    cuts = list(s.cuts)
    if any(not isinstance(c, int) or isinstance(c, bool) for c in cuts):
        flags.append("non-integer cut position")
    elif any(not 0 < c < n for c in cuts) or cuts != sorted(set(cuts)):
        flags.append("cut positions must be increasing and strictly inside (0, n)")
    if len(s.owners) != len(cuts) + 1:
        flags.append("need one owner per segment")
    if any(not 1 <= r <= q for r in s.owners):
        flags.append("owner outside 1..q")
    if flags:
        return SplitReport([], len(cuts), budget, False, len(cuts) <= budget, flags)
    counts = holdings(necklace, s, q)
    fair = True
    for i, a in enumerate(necklace.counts):
        lo, hi = a // q, -(-a // q)
        for r in range(q):
            if not lo <= counts[r][i] <= hi:
                fair = False
                flags.append("thief %d gets %d of type %r (allowed %d..%d)"
                             % (r + 1, counts[r][i], necklace.types[i], lo, hi))
    within = len(cuts) <= budget
    if not within:
        flags.append("%d cuts exceed the budget %d" % (len(cuts), budget))
    return SplitReport(counts, len(cuts), budget, fair, within, flags)


# ---------------------------------------------------------------- S, K, L

def s_vertex(k, r, n):
    return 0 if k == 0 else 1 + (r - 1) * n + (k - 1)


def s_decode(v, n):
    """(position, thief) of an S vertex; the origin is (0, None)."""
    if v == 0:
        return 0, None
    r, k = divmod(v - 1, n)
    return k + 1, r + 1


def build_S(n, p):
    if n < 1 or p < 2:
        raise ValueError("need n >= 1 and p >= 2")
    coords = [[0] * p]
    for r in range(1, p + 1):
        for k in range(1, n + 1):
            coords.append([k if j == r - 1 else 0 for j in range(p)])
    faces = [[v] for v in range(1 + p * n)]
    for r in range(1, p + 1):
        faces.append([0, s_vertex(1, r, n)])
        for k in range(1, n):
            faces.append([s_vertex(k, r, n), s_vertex(k + 1, r, n)])
    cx = PolytopalComplex(coords, faces, name="S(n=%d,p=%d)" % (n, p))
    cx.n, cx.p = n, p
    return cx


def _check_prime(p):
    if not isprime(p):
        raise ValueError("p must be prime, got %r" % (p,))


def build_K(n, t, p):
    """Faces of S^(t(p-1)+1) with a coordinate frozen at some (n, r)."""
    _check_prime(p)
    S = build_S(n, p)
    ends = frozenset(frozenset((s_vertex(n, r, n),)) for r in range(1, p + 1))

    def keep(face):
        return any(x in ends for x in face)

    K = Subcomplex(power(S, t * (p - 1) + 1), keep, name="K(n=%d,t=%d,p=%d)" % (n, t, p))
    K.S, K.n, K.t, K.p = S, n, t, p
    return K


def build_L(t, p):
    L = power(make_simplex(p - 1), t)
    L.t, L.p = t, p
    return L


# ---------------------------------------------------------------- Z/p action

class CyclicShift:
    """The shift r -> r+1 (mod p) acting factor-wise on a product complex.

    Each factor is 'S' (paths of S, origin fixed) or 'simplex' (vertices
    0..p-1 of the (p-1)-simplex).
    """

    def __init__(self, kinds, n, p):
        self.kinds = tuple(kinds)
        self.n, self.p = n, p
        self._memo = {}

    def vertex_factor(self, kind, v, k=1):
        if kind == "simplex":
            return (v + k) % self.p
        if v == 0:
            return 0
        pos, r = s_decode(v, self.n)
        return s_vertex(pos, (r - 1 + k) % self.p + 1, self.n)

    def vertex(self, v, k=1):
        kinds = self.kinds if len(self.kinds) == len(v) else (self.kinds[0],) * len(v)
        return tuple(self.vertex_factor(kind, x, k) for kind, x in zip(kinds, v))

    def _factor_face(self, kind, f):
        key = (kind, f)
        out = self._memo.get(key)
        if out is None:
            img = tuple(self.vertex_factor(kind, v) for v in sorted(f))
            sign = permutation_sign(img) if kind == "simplex" else 1
            out = (frozenset(img), sign)
            self._memo[key] = out
        return out

    def face(self, face, k=1):
        kinds = self.kinds if len(self.kinds) == len(face) else (self.kinds[0],) * len(face)
        sign = 1
        for _ in range(k % self.p):
            new = []
            for kind, f in zip(kinds, face):
                g, s = self._factor_face(kind, f)
                new.append(g)
                sign *= s
            face = tuple(new)
        return face, sign

    def chain(self, c, k=1):
        out = {}
        for f, m in c.terms.items():
            g, s = self.face(f, k)
            out[g] = out.get(g, 0) + s * m
        return Chain(c.degree, out)

    def norm(self, c):
        """sum_{r=1}^p nu^r c"""
        out = {}
        for k in range(1, self.p + 1):
            for f, m in c.terms.items():
                g, s = self.face(f, k)
                out[g] = out.get(g, 0) + s * m
        return Chain(c.degree, out)

    def diff(self, c):
        """nu - nu^{-1}; for p = 2 this vanishes, so nu - 1 is used instead."""
        if self.p == 2:
            return self.chain(c, 1) - c
        return self.chain(c, 1) - self.chain(c, self.p - 1)


def shift_on_K(K):
    return CyclicShift(("S",), K.n, K.p)


def shift_on_L(L):
    return CyclicShift(("simplex",), 0, L.p)


# ---------------------------------------------------------------- decoding

def decode_splitting(v, necklace, p):
    n = necklace.n
    coords = [s_decode(x, n) for x in v]
    if not any(k == n for k, _ in coords):
        raise ValueError("not a vertex of K: no coordinate at position n")
    cuts = sorted({k for k, _ in coords if 0 < k < n})
    owners = []
    for right in cuts + [n]:
        owners.append(next(r for k, r in coords if k >= right))
    return Splitting(tuple(cuts), tuple(owners))


def winners(necklace, splitting, p):
    """The i-winner for each type i (thieves 1..p)."""
    owner = splitting.bead_owners(necklace.n)
    counts = [[0] * p for _ in range(necklace.t)]
    for i, r in zip(necklace.type_index, owner):
        counts[i][r - 1] += 1
    out = []
    for i in range(necklace.t):
        best = max(counts[i])
        tied = {r + 1 for r in range(p) if counts[i][r] == best}
        if len(tied) == 1:
            out.append(tied.pop())
            continue
        # earliest type-i bead among the tied thieves decides
        out.append(next(r for j, r in zip(necklace.type_index, owner)
                        if j == i and r in tied))
    return tuple(out)


class WinnerMap(PolytopalMap):
    """Vertex v of K -> (winner of type 1, ..., winner of type t), 0-based."""

    def __init__(self, necklace, K, L):
        self.necklace = necklace
        self._cache = {}
        n, t = necklace.n, necklace.t
        idx = necklace.type_index
        self._prefix = [[0] * (n + 1) for _ in range(t)]
        for i in range(t):
            for k in range(n):
                self._prefix[i][k + 1] = self._prefix[i][k] + (idx[k] == i)
        # first type-i bead at or after position a
        self._next = [[n] * (n + 1) for _ in range(t)]
        for i in range(t):
            for a in reversed(range(n)):
                self._next[i][a] = a if idx[a] == i else self._next[i][a + 1]
        self._decoded = [s_decode(x, n) for x in range(1 + K.p * n)]
        super().__init__(K, L, self._value)

    def _value(self, v):
        out = self._cache.get(v)
        if out is None:
            out = self._compute(v)
            self._cache[v] = out
        return out

    def _compute(self, v):
        n, p = self.necklace.n, self.source.p
        coords = [self._decoded[x] for x in v]
        ends = sorted({k for k, _ in coords if k > 0})
        if not ends or ends[-1] != n:
            raise ValueError("not a vertex of K: no coordinate at position n")
        segs, a = [], 0
        for b in ends:
            segs.append((a, b, next(r for k, r in coords if k >= b)))
            a = b
        out = []
        for pre, nxt in zip(self._prefix, self._next):
            count = [0] * (p + 1)
            first = [n] * (p + 1)
            for a, b, r in segs:
                c = pre[b] - pre[a]
                if c:
                    count[r] += c
                    if first[r] == n:
                        first[r] = nxt[a]
            best = max(count)
            out.append(min((first[r], r) for r in range(1, p + 1) if count[r] == best)[1] - 1)
        return tuple(out)

    def winner_sets(self, face):
        sets = [set() for _ in range(self.necklace.t)]
        for v in self.source.face_vertices(face):
            for i, w in enumerate(self(v)):
                sets[i].add(w)
        return sets

    def image_dim(self, face):
        return sum(len(s) - 1 for s in self.winner_sets(face))


def winner_map(necklace, p, K=None, L=None):
    _check_prime(p)
    t = necklace.t
    K = K or build_K(necklace.n, t, p)
    L = L or build_L(t, p)
    return WinnerMap(necklace, K, L)


def check_equivariance(lam, vertices=None, strict=False):
    """Vertices v with lambda(nu v) != nu lambda(v); strict raises on the first one."""
    K, L = lam.source, lam.target
    nu_K, p = shift_on_K(K), K.p
    bad = []
    for v in (K.vertices() if vertices is None else vertices):
        lhs = lam(nu_K.vertex(v))
        rhs = tuple((w + 1) % p for w in lam(v))
        if lhs != rhs:
            if strict:
                raise TieBreakNonEquivariant("lambda(nu %r) = %r but nu lambda = %r" % (v, lhs, rhs))
            bad.append(v)
    return bad


# ---------------------------------------------------------------- h chains

def _power_boundary(c, n):
    """Boundary of a chain on a power of S (edges {a<b} have boundary b - a)."""
    out = {}
    for face, m in c.terms.items():
        sign = 1
        for j, f in enumerate(face):
            if len(f) == 2:
                a, b = sorted(f)
                for v, s in ((b, 1), (a, -1)):
                    g = face[:j] + (frozenset((v,)),) + face[j + 1:]
                    out[g] = out.get(g, 0) + sign * s * m
                sign = -sign
    return Chain(c.degree - 1, out)


@dataclass
class HChains:
    n: int
    t: int
    p: int
    K: object
    htilde: list
    h: list

    @property
    def top(self):
        return self.h[-1]

    def corners(self):
        """Support of h_top with its corner vertices, encoded once per (n, t, p).

        Returns (faces, codes, inverse): `codes` are the distinct vertex codes
        sum_j id_j * base**j and inverse[f, c] indexes the c-th corner of face f.
        """
        cached = getattr(self, "_corners", None)
        if cached is not None:
            return cached
        faces = list(self.top.terms)
        D = self.t * (self.p - 1)
        base = 1 + self.p * self.n
        lo = np.array([[min(f) for f in face] for face in faces], dtype=np.int64).reshape(len(faces), D + 1)
        hi = np.array([[max(f) for f in face] for face in faces], dtype=np.int64).reshape(len(faces), D + 1)
        weights = base ** np.arange(D + 1, dtype=np.int64)
        code_lo = lo @ weights
        is_edge = hi != lo
        # weighted steps of the D edge coordinates of each face, in coordinate order
        steps = ((hi - lo) * weights)[is_edge].reshape(len(faces), D)
        bits = (np.arange(2 ** D)[:, None] >> np.arange(D)[None, :]) & 1
        codes = code_lo[:, None] + steps @ bits.T
        uniq, inverse = np.unique(codes, return_inverse=True)
        self._corners = (faces, uniq, inverse.reshape(codes.shape))
        return self._corners


    def owners(self):
        cached = getattr(self, "_owners", None)
        if cached is None:
            codes = self.corners()[1]
            cached = self._owners = bead_owner_array(codes, self.n, self.p, self.t * (self.p - 1) + 1)
        return cached


@lru_cache(maxsize=32)
def build_h(n, t, p):
    """Chains h_0..h_{t(p-1)} of K with coefficients mod p.

    d h_{2l+1} = N h_{2l} and d h_{2l+2} = Delta h_{2l+1} hold over Z/p,
    where N is the norm sum_r nu^r and Delta = nu - nu^{-1} (nu - 1 if p = 2).
    """
    _check_prime(p)
    K = build_K(n, t, p)
    D = t * (p - 1)
    N = D + 1
    nu = CyclicShift(("S",), n, p)
    o = Chain(0, {frozenset((0,)): 1})
    end = Chain(0, {frozenset((s_vertex(n, 1, n),)): 1})
    path1 = Chain(1, {frozenset((s_vertex(k, 1, n), s_vertex(k + 1, 1, n))): 1 for k in range(n)})
    ht = [Chain(0, {(): 1})]
    for d in range(D):
        x = tensor(ht[d], path1)
        y = nu.norm(x) if d % 2 == 0 else nu.diff(x)
        ht.append(((-1) ** (d + 1) * y).mod(p))
    hs = []
    for d in range(D + 1):
        pad = [o] * (N - d - 1)
        a = tensor(_power_boundary(ht[d], n), path1, *pad) if d else Chain(d)
        b = tensor(ht[d], end, *pad)
        hs.append((a + (-1) ** d * b).mod(p))
    return HChains(n, t, p, K, ht, hs)


# ---------------------------------------------------------------- solver

def bead_owner_array(codes, n, p, N):
    """Owner (thief 1..p) of every bead for many encoded K vertices."""
    base = 1 + p * n
    ids = (codes[:, None] // base ** np.arange(N)[None, :]) % base
    pos = np.where(ids == 0, 0, (ids - 1) % n + 1)
    thief = np.where(ids == 0, 0, (ids - 1) // n + 1)
    beads = np.arange(1, n + 1)
    first = np.argmax(pos[:, :, None] >= beads[None, None, :], axis=1)
    return np.take_along_axis(thief, first, axis=1).astype(np.int8)


def winner_array(necklace, p, owner):
    """Winners (0-based) per type, one row per row of the owner array."""
    n = necklace.n
    types = np.array(necklace.type_index)
    out = np.empty((len(owner), necklace.t), dtype=np.int64)
    for i in range(necklace.t):
        where = np.nonzero(types == i)[0]
        sel = owner[:, where]
        score = np.empty((len(owner), p), dtype=np.int64)
        for r in range(1, p + 1):
            mine = sel == r
            earliest = np.where(mine.any(axis=1), where[np.argmax(mine, axis=1)], n)
            # more beads wins; among equals the earliest type-i bead wins
            score[:, r - 1] = mine.sum(axis=1) * (n + 1) - earliest
        out[:, i] = np.argmax(score, axis=1)
    return out


def full_image_mask(necklace, hc):
    """Support faces of h_top whose winner image is the whole top face of L."""
    faces, codes, inverse = hc.corners()
    win = winner_array(necklace, hc.p, hc.owners())
    # one bit per (type, thief); a face is full when every bit shows up on a corner
    bits = np.bitwise_or.reduce(1 << (win + hc.p * np.arange(hc.t)), axis=1)
    full = np.bitwise_or.reduce(bits[inverse], axis=1) == (1 << (hc.p * hc.t)) - 1
    return faces, full


def _witness_faces(lam, hc, sharp=None):
    """Support faces of h_top with nonzero image (mod p) under lambda_#."""
    sharp = sharp or induce_chain_map(lam)
    faces, full = full_image_mask(lam.necklace, hc)
    for k in np.nonzero(full)[0]:
        if sharp.alpha(faces[k]) % hc.p:
            yield faces[k]


def _fair_vertex(lam, face, p):
    nk = lam.necklace
    for v in lam.source.face_vertices(face):
        s = decode_splitting(v, nk, p)
        if verify_splitting(nk, s, p).fair:
            return v, s
    return None


def split_prime(necklace, p):
    _check_prime(p)
    hc = build_h(necklace.n, necklace.t, p)
    lam = winner_map(necklace, p, K=hc.K)
    for face in _witness_faces(lam, hc):
        hit = _fair_vertex(lam, face, p)
        if hit is None:
            raise WitnessNotFound("witness face %r has no fair vertex (necklace %s, p=%d)"
                                  % (face, necklace, p))
        return hit[1]
    raise WitnessNotFound("lambda_#(h_top) vanishes mod %d for necklace %s" % (p, necklace))


def find_fair_split(necklace, q, method="chain"):
    if isinstance(necklace, str):
        necklace = Necklace.from_string(necklace)
    if q < 2:
        raise ValueError("need at least two thieves")
    if method == "brute":
        s = brute_force_split(necklace, q, necklace.t * (q - 1))
        if s is None:
            raise WitnessNotFound("brute force found no splitting")
        return s
    if method != "chain":
        raise ValueError("unknown method %r" % method)
    if isprime(q):
        return split_prime(necklace, q)
    q1 = min(factorint(q))
    q2 = q // q1
    first = split_prime(necklace, q1)
    owner = first.bead_owners(necklace.n)
    final = [0] * necklace.n
    for s in range(1, q1 + 1):
        idx = [k for k in range(necklace.n) if owner[k] == s]
        if not idx:
            continue
        sub = Necklace(tuple(necklace.beads[k] for k in idx))
        inner = find_fair_split(sub, q2, method).bead_owners(sub.n)
        for k, r in zip(idx, inner):
            final[k] = (s - 1) * q2 + r
    out = Splitting.from_bead_owners(final)
    if not verify_splitting(necklace, out, q).ok:
        if necklace.n > 12:
            raise WitnessNotFound("composite recursion failed on a large necklace")
        log.warning("composite recursion unfair for %s, q=%d; using brute force", necklace, q)
        out = find_fair_split(necklace, q, "brute")
    return out


def brute_force_split(necklace, q, max_cuts=None):
    n = necklace.n
    if n > 12:
        raise TooLarge("brute force is limited to n <= 12")
    if max_cuts is None:
        max_cuts = necklace.t * (q - 1)
    idx = necklace.type_index
    prefix = [[0] * necklace.t]
    for i in idx:
        row = list(prefix[-1])
        row[i] += 1
        prefix.append(row)
    lo = [a // q for a in necklace.counts]
    hi = [-(-a // q) for a in necklace.counts]
    for k in range(0, min(max_cuts, n - 1) + 1):
        for cuts in combinations(range(1, n), k):
            ends = (0,) + cuts + (n,)
            segs = [[prefix[b][i] - prefix[a][i] for i in range(necklace.t)]
                    for a, b in zip(ends[:-1], ends[1:])]
            for owners in iproduct(range(1, q + 1), repeat=k + 1):
                tot = [[0] * necklace.t for _ in range(q)]
                for seg, r in zip(segs, owners):
                    for i, c in enumerate(seg):
                        tot[r - 1][i] += c
                if all(lo[i] <= tot[r][i] <= hi[i] for r in range(q) for i in range(necklace.t)):
                    return Splitting(cuts, owners)
    return None
