"""Orientations, integer chains, the boundary operator and chain tensors.

Coefficients are stored against per-face reference orientations, so a chain
is a plain mapping face -> nonzero int. Induced orientations put the extra
vertex first: eps|tau(v_0..v_{d-1}) = eps(x, v_0..v_{d-1}) with x outside
tau, which gives d[v0, v1] = v1 - v0.
"""

from dataclasses import dataclass

from .complex import ProductComplex, Subcomplex, independent_tuple
from .linalg import det_sign, echelon, permutation_sign


class WrongArity(ValueError):
    pass


class Chain:
    """Finite formal sum of faces of one degree with integer coefficients."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree, terms=None):
        self.degree = degree
        self.terms = {f: c for f, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, degree, face, coeff=1):
        return cls(degree, {face: coeff})

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, face):
        return self.terms.get(face, 0)

    def support(self):
        return set(self.terms)

    def _check(self, other):
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError("degree mismatch: %d vs %d" % (self.degree, other.degree))

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for f, c in other.terms.items():
            out[f] = out.get(f, 0) + c
        return Chain(self.degree if self.terms else other.degree, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Chain(self.degree, {f: -c for f, c in self.terms.items()})

    def __rmul__(self, k):
        return Chain(self.degree, {f: k * c for f, c in self.terms.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def mod(self, p):
        """Coefficients reduced into 0..p-1 (zeros dropped)."""
        return Chain(self.degree, {f: c % p for f, c in self.terms.items()})

    def __repr__(self):
        items = sorted(self.terms.items(), key=lambda kv: repr(kv[0]))
        body = " + ".join("%d*%s" % (c, _face_str(f)) for f, c in items[:6])
        if len(items) > 6:
            body += " + ... (%d terms)" % len(items)
        return "Chain[%d](%s)" % (self.degree, body or "0")


def _face_str(f):
    if isinstance(f, frozenset):
        return "{%s}" % ",".join(map(str, sorted(f)))
    if isinstance(f, tuple):
        return "x".join(_face_str(x) for x in f) if f else "()"
    return repr(f)


def chain_sum(chains, degree):
    out = {}
    for c in chains:
        for f, k in c.terms.items():
            out[f] = out.get(f, 0) + k
    return Chain(degree, out)


# ---------------------------------------------------------------- orientations

def _root(P):
    while isinstance(P, Subcomplex):
        P = P.parent
    return P


def reference_tuple(P, face):
    P = _root(P)
    key = ("ref", face)
    out = P._cache.get(key)
    if out is None:
        if isinstance(P, ProductComplex):
            out = _staircase([reference_tuple(f, x) for f, x in zip(P.factors, face)])
        else:
            out = independent_tuple(P, face)
        P._cache[key] = out
    return out


def _staircase(tuples):
    """(v_0,w_0),...,(v_d,w_0),(v_d,w_1),...,(v_d,w_d') for any number of factors."""
    if not tuples:
        return ((),)
    cur = [t[0] for t in tuples]
    out = [tuple(cur)]
    for j, t in enumerate(tuples):
        for v in t[1:]:
            cur[j] = v
            out.append(tuple(cur))
    return tuple(out)


@dataclass(frozen=True)
class Orientation:
    """One of the two orientations of a face: sign times the reference one."""

    complex: object
    face: object
    sign: int = 1

    def __neg__(self):
        return Orientation(self.complex, self.face, -self.sign)

    def __call__(self, tup):
        return evaluate(self, tup)


def reference_orientation(P, face):
    return Orientation(P, face, 1)


def _frame(P, face):
    P = _root(P)
    key = ("frame", face)
    fr = P._cache.get(key)
    if fr is None:
        ref = reference_tuple(P, face)
        base = P.coords(ref[0])
        rows = [[a - b for a, b in zip(P.coords(v), base)] for v in ref[1:]]
        _, piv, _ = echelon(rows) if rows else (None, [], 1)
        sub = [[r[c] for c in piv] for r in rows]
        simplex = (not isinstance(P, ProductComplex)) and len(face) == len(ref)
        fr = (ref, piv, det_sign(sub), simplex)
        P._cache[key] = fr
    return fr


def evaluate(orientation, tup):
    P, face = orientation.complex, orientation.face
    ref, piv, ref_sign, simplex = _frame(P, face)
    tup = tuple(tup)
    if len(tup) != len(ref):
        raise WrongArity("expected %d vertices, got %d" % (len(ref), len(tup)))
    if simplex:
        if len(set(tup)) < len(tup):
            return 0
        return orientation.sign * permutation_sign(tup)
    base = P.coords(tup[0])
    rows = [[P.coords(v)[c] - base[c] for c in piv] for v in tup[1:]]
    return orientation.sign * ref_sign * det_sign(rows)


# ---------------------------------------------------------------- boundary

def incidence(P, face, facet, geometric=False):
    """Coefficient of `facet` in the boundary of the reference-oriented `face`."""
    P = _root(P)
    if isinstance(P, ProductComplex) and not geometric:
        sign = 1
        for f, x, y in zip(P.factors, face, facet):
            if x != y:
                return sign * incidence(f, x, y)
            if f.dim(x) % 2:
                sign = -sign
        raise ValueError("not a facet")
    outside = set(P.face_vertices(face)) - set(P.face_vertices(facet))
    x = min(outside)
    return evaluate(reference_orientation(P, face), (x,) + reference_tuple(P, facet))


def boundary_face(P, face, geometric=False):
    root = _root(P)
    key = ("bdry", face, geometric)
    out = root._cache.get(key)
    if out is None:
        d = root.dim(face)
        out = Chain(d - 1, {g: incidence(root, face, g, geometric) for g in root.facets(face)})
        root._cache[key] = out
    return out


def boundary(P, c, geometric=False):
    out = {}
    for f, k in c.terms.items():
        for g, s in boundary_face(P, f, geometric).terms.items():
            out[g] = out.get(g, 0) + k * s
    return Chain(c.degree - 1, out)


# ---------------------------------------------------------------- tensor

def _as_tuple(face):
    return face if isinstance(face, tuple) else (face,)


def tensor(*chains):
    """Tensor product; faces of the product are flat tuples of factor faces."""
    terms = {(): 1}
    degree = 0
    for c in chains:
        new = {}
        for f, k in terms.items():
            for g, m in c.terms.items():
                key = f + _as_tuple(g)
                new[key] = new.get(key, 0) + k * m
        terms = new
        degree += c.degree
    return Chain(degree, terms)


# ---------------------------------------------------------------- json

def chain_to_json(P, c):
    out = []
    for f, k in c.terms.items():
        vs = P.face_vertices(f)
        root = _root(P)
        if isinstance(root, ProductComplex):
            vs = [root.encode_vertex(v) for v in vs]
        out.append({"face": sorted(vs), "coeff": k})
    out.sort(key=lambda t: (t["face"], t["coeff"]))
    return out


def chain_from_json(P, data, degree):
    root = _root(P)
    terms = {}
    for item in data:
        vs = item["face"]
        if isinstance(root, ProductComplex):
            vs = [root.decode_vertex(v) for v in vs]
        f = P.minimal_face_containing(vs)
        if f is None or len(P.face_vertices(f)) != len(vs):
            raise ValueError("not a face: %r" % (item["face"],))
        terms[f] = terms.get(f, 0) + item["coeff"]
    return Chain(degree, terms)
