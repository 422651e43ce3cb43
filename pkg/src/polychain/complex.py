"""Polytopal complexes with exact rational realizations.

Three concrete kinds share one duck-typed interface:

* PolytopalComplex -- explicit face lattice, faces are frozensets of int ids.
* ProductComplex   -- implicit cartesian product, faces are tuples of
  factor faces and vertices are tuples of factor vertices.
* Subcomplex       -- a downward closed filter of another complex.

Interface: vertices(), n_vertices, coords(v), faces(d=None), dim(face),
face_vertices(face), vertex_face(v), facets(face), __contains__,
minimal_face_containing(S), dimension.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as iproduct
import json

from .linalg import affine_rank, det_sign, echelon


class NotClosed(ValueError):
    """A subcomplex keeps a face but drops one of its subfaces."""


@dataclass(frozen=True)
class Violation:
    kind: str
    faces: tuple
    detail: str = ""


class PolytopalComplex:
    """Explicit finite polytopal complex.

    `coords` lists one coordinate vector per vertex (vertex ids are the
    indices), `faces` lists vertex-id collections. No closure is imposed
    here; use validate() to check the complex axioms.
    """

    def __init__(self, coords, faces, name=None):
        self._coords = tuple(tuple(Fraction(x) for x in c) for c in coords)
        self.name = name
        self._dim = {}
        for f in faces:
            f = frozenset(f)
            if f in self._dim:
                continue
            if not f or not all(0 <= v < len(self._coords) for v in f):
                raise ValueError("face %r has unknown vertices" % sorted(f))
            self._dim[f] = affine_rank(self._coords[v] for v in sorted(f))
        self._by_dim = {}
        for f, d in self._dim.items():
            self._by_dim.setdefault(d, []).append(f)
        for d in self._by_dim:
            self._by_dim[d].sort(key=sorted)
        self._containing = {}
        for f in self._dim:
            for v in f:
                self._containing.setdefault(v, []).append(f)
        self._facets = {}
        self._cache = {}

    # basic queries
    def vertices(self):
        return range(len(self._coords))

    @property
    def n_vertices(self):
        return len(self._coords)

    @property
    def ambient_dim(self):
        return len(self._coords[0]) if self._coords else 0

    @property
    def dimension(self):
        return max(self._by_dim) if self._by_dim else -1

    def coords(self, v):
        return self._coords[v]

    def faces(self, d=None):
        if d is None:
            return [f for k in sorted(self._by_dim) for f in self._by_dim[k]]
        return list(self._by_dim.get(d, []))

    def f_vector(self):
        return [len(self._by_dim.get(d, [])) for d in range(self.dimension + 1)]

    def dim(self, face):
        return self._dim[face]

    def face_vertices(self, face):
        return tuple(sorted(face))

    def vertex_face(self, v):
        return frozenset((v,))

    def __contains__(self, face):
        return face in self._dim

    def __len__(self):
        return len(self._dim)

    def facets(self, face):
        out = self._facets.get(face)
        if out is None:
            d = self._dim[face]
            cands = set()
            for v in face:
                cands.update(self._containing.get(v, ()))
            out = sorted((g for g in cands if self._dim[g] == d - 1 and g < face),
                         key=sorted)
            self._facets[face] = out
        return out

    def subfaces(self, face):
        """All faces of the complex contained in `face` (itself included)."""
        cands = set()
        for v in face:
            cands.update(self._containing.get(v, ()))
        return [g for g in cands if g <= face]

    def minimal_face_containing(self, vertex_set):
        s = frozenset(vertex_set)
        if not s:
            return None
        v = next(iter(s))
        best = None
        for f in self._containing.get(v, ()):
            if s <= f and (best is None or self._dim[f] < self._dim[best]
                           or (self._dim[f] == self._dim[best] and len(f) < len(best))):
                best = f
        return best

    def __repr__(self):
        label = self.name or "PolytopalComplex"
        return "<%s dim=%d f=%s>" % (label, self.dimension, self.f_vector())

    # serialization
    def to_json(self):
        return {
            "vertices": [[_num_to_json(x) for x in c] for c in self._coords],
            "faces": [sorted(f) for f in self.faces()],
        }


def _num_to_json(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


class ProductComplex:
    """Implicit cartesian product of complexes (nested products are flattened)."""

    def __init__(self, factors):
        flat = []
        for f in factors:
            if isinstance(f, ProductComplex):
                flat.extend(f.factors)
            else:
                flat.append(f)
        self.factors = tuple(flat)
        self._cache = {}

    @property
    def n_vertices(self):
        n = 1
        for f in self.factors:
            n *= f.n_vertices
        return n

    @property
    def dimension(self):
        return sum(f.dimension for f in self.factors)

    def vertices(self):
        return iproduct(*(f.vertices() for f in self.factors))

    def coords(self, v):
        out = ()
        for f, x in zip(self.factors, v):
            out += f.coords(x)
        return out

    def dim(self, face):
        return sum(f.dim(x) for f, x in zip(self.factors, face))

    def faces(self, d=None):
        for face in iproduct(*(f.faces() for f in self.factors)):
            if d is None or self.dim(face) == d:
                yield face

    def face_vertices(self, face):
        return tuple(iproduct(*(f.face_vertices(x) for f, x in zip(self.factors, face))))

    def vertex_face(self, v):
        return tuple(f.vertex_face(x) for f, x in zip(self.factors, v))

    def __contains__(self, face):
        return (isinstance(face, tuple) and len(face) == len(self.factors)
                and all(x in f for f, x in zip(self.factors, face)))

    def facets(self, face):
        out = []
        for j, (f, x) in enumerate(zip(self.factors, face)):
            for y in f.facets(x):
                out.append(face[:j] + (y,) + face[j + 1:])
        return out

    def minimal_face_containing(self, vertex_set):
        vs = list(vertex_set)
        if not vs:
            return None
        out = []
        for j, f in enumerate(self.factors):
            g = f.minimal_face_containing({v[j] for v in vs})
            if g is None:
                return None
            out.append(g)
        return tuple(out)

    # dense numbering of product vertices
    def encode_vertex(self, v):
        code = 0
        for f, x in zip(self.factors, v):
            code = code * f.n_vertices + x
        return code

    def decode_vertex(self, code):
        out = []
        for f in reversed(self.factors):
            code, x = divmod(code, f.n_vertices)
            out.append(x)
        return tuple(reversed(out))

    def to_json(self):
        return {"product": [f.to_json() for f in self.factors]}

    def __repr__(self):
        return "<ProductComplex of %d factors dim=%d>" % (len(self.factors), self.dimension)


class Subcomplex:
    """Faces of `parent` accepted by `keep`; `keep` must be downward closed."""

    def __init__(self, parent, keep, name=None):
        self.parent = parent
        self.keep = keep
        self.name = name
        self._cache = {}

    @property
    def factors(self):
        return self.parent.factors

    @property
    def dimension(self):
        return max((self.dim(f) for f in self.faces()), default=-1)

    def vertices(self):
        return (v for v in self.parent.vertices() if self.keep(self.parent.vertex_face(v)))

    @property
    def n_vertices(self):
        return sum(1 for _ in self.vertices())

    def coords(self, v):
        return self.parent.coords(v)

    def dim(self, face):
        return self.parent.dim(face)

    def faces(self, d=None):
        return (f for f in self.parent.faces(d) if self.keep(f))

    def face_vertices(self, face):
        return self.parent.face_vertices(face)

    def vertex_face(self, v):
        return self.parent.vertex_face(v)

    def __contains__(self, face):
        return face in self.parent and self.keep(face)

    def facets(self, face):
        return [g for g in self.parent.facets(face) if self.keep(g)]

    def minimal_face_containing(self, vertex_set):
        g = self.parent.minimal_face_containing(vertex_set)
        if g is None or not self.keep(g):
            return None
        return g

    def to_json(self):
        faces = list(self.faces())
        return {"subcomplex_of": self.parent.to_json(),
                "faces": [sorted(_vertex_ids(self.parent, f)) for f in faces]}


def _vertex_ids(cx, face):
    vs = cx.face_vertices(face)
    if isinstance(cx, ProductComplex):
        return [cx.encode_vertex(v) for v in vs]
    return list(vs)


# ---------------------------------------------------------------- constructors

def make_simplex(d: int) -> PolytopalComplex:
    if d < 0:
        raise ValueError("d must be >= 0")
    n = d + 1
    coords = [[int(i == j) for j in range(n)] for i in range(n)]
    faces = [c for k in range(1, n + 1) for c in combinations(range(n), k)]
    return PolytopalComplex(coords, faces, name="simplex%d" % d)


def make_cube(d: int) -> PolytopalComplex:
    """[0,1]^d; vertex ids enumerate {0,1}^d in lexicographic order."""
    if d < 0:
        raise ValueError("d must be >= 0")
    pts = list(iproduct((0, 1), repeat=d))
    index = {p: i for i, p in enumerate(pts)}
    faces = []
    for pattern in iproduct((0, 1, None), repeat=d):
        free = [i for i, x in enumerate(pattern) if x is None]
        verts = []
        for bits in iproduct((0, 1), repeat=len(free)):
            p = list(pattern)
            for i, b in zip(free, bits):
                p[i] = b
            verts.append(index[tuple(p)])
        faces.append(verts)
    cx = PolytopalComplex(pts, faces, name="cube%d" % d)
    cx.vertex_index = index
    return cx


def make_path(n: int) -> PolytopalComplex:
    """The path v_0 ... v_n as a 1-dimensional cubical complex on a line."""
    faces = [[i] for i in range(n + 1)] + [[i, i + 1] for i in range(n)]
    return PolytopalComplex([[i] for i in range(n + 1)], faces, name="path%d" % n)


def make_polygon(points) -> PolytopalComplex:
    """A convex polygon given by its vertices in cyclic order."""
    k = len(points)
    faces = [[i] for i in range(k)] + [[i, (i + 1) % k] for i in range(k)] + [list(range(k))]
    return PolytopalComplex(points, faces, name="polygon%d" % k)


def product(P, Q) -> ProductComplex:
    return ProductComplex([P, Q])


def power(P, s: int) -> ProductComplex:
    if s < 0:
        raise ValueError("s must be >= 0")
    return ProductComplex([P] * s)


def subcomplex(P, keep, check=True) -> Subcomplex:
    sub = Subcomplex(P, keep)
    if check:
        for f in sub.faces():
            for g in P.facets(f):
                if not keep(g):
                    raise NotClosed("face %r kept but subface %r dropped" % (f, g))
    return sub


def materialize(P) -> PolytopalComplex:
    """Explicit copy of any complex (desk scale only)."""
    verts = list(P.vertices())
    index = {v: i for i, v in enumerate(verts)}
    faces = [[index[v] for v in P.face_vertices(f)] for f in P.faces()]
    cx = PolytopalComplex([P.coords(v) for v in verts], faces)
    cx.vertex_index = index
    return cx


class OrderComplex(PolytopalComplex):
    """Order complex of the face poset, realized at barycenters."""

    def __init__(self, P):
        elems = sorted(P.faces(), key=lambda f: (P.dim(f), P.face_vertices(f)))
        self.source = P
        self.elements = elems
        self.index = {f: i for i, f in enumerate(elems)}
        coords = []
        for f in elems:
            vs = P.face_vertices(f)
            pts = [P.coords(v) for v in vs]
            coords.append([Fraction(sum(c)) / len(pts) for c in zip(*pts)])
        # up-sets for chain enumeration
        above = {f: [] for f in elems}
        for f in elems:
            for g in _all_subfaces(P, f):
                if g != f:
                    above[g].append(f)
        faces = []

        def extend(chain):
            faces.append([self.index[x] for x in chain])
            for g in above[chain[-1]]:
                extend(chain + [g])

        for f in elems:
            extend([f])
        super().__init__(coords, faces, name="order_complex")

    def element(self, v):
        return self.elements[v]

    def vertex_of(self, face):
        return self.index[face]


def _all_subfaces(P, face):
    seen = {face}
    stack = [face]
    while stack:
        f = stack.pop()
        for g in P.facets(f):
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return seen


def order_complex(P) -> OrderComplex:
    return OrderComplex(P)


def minimal_face_containing(P, vertex_set):
    return P.minimal_face_containing(vertex_set)


# ---------------------------------------------------------------- validation

def validate(P) -> list:
    if isinstance(P, ProductComplex):
        return [v for f in P.factors for v in validate(f)]
    if isinstance(P, Subcomplex):
        out = validate(P.parent)
        for f in P.faces():
            for g in P.parent.facets(f):
                if not P.keep(g):
                    out.append(Violation("MissingSubface", (f, g)))
        return out
    return _validate_explicit(P)


def _validate_explicit(P):
    out = []
    faces = P.faces()
    vertex_faces = {next(iter(f)) for f in P.faces(0)}
    for v in P.vertices():
        if v not in vertex_faces:
            out.append(Violation("MissingSubface", (frozenset((v,)),), "vertex is not a face"))
    for f in faces:
        d = P.dim(f)
        if d == 0:
            if len(f) != 1:
                out.append(Violation("Degenerate", (f,), "coincident vertices"))
            continue
        fac = P.facets(f)
        pts = {v: P.coords(v) for v in f}
        covered = set().union(*fac) if fac else set()
        if covered != set(f):
            out.append(Violation("MissingSubface", (f,), "facets do not cover the face"))
        for t in fac:
            on = {v for v in f if affine_rank([pts[u] for u in sorted(t)] + [pts[v]]) == d - 1}
            if on != set(t):
                out.append(Violation("Degenerate", (f, t), "facet is not a true face"))
                continue
            sides = {_side(P, f, t, x) for x in f - t}
            if len(sides) != 1 or 0 in sides:
                out.append(Violation("NotAFace", (f, t), "facet hyperplane is not supporting"))
        # ridges lie in exactly two facets
        if d == 1:
            if len(fac) != 2:
                out.append(Violation("MissingSubface", (f,), "edge needs two endpoints"))
        else:
            ridges = {}
            for t in fac:
                for r in P.facets(t):
                    ridges.setdefault(r, []).append(t)
            for r, ts in ridges.items():
                if len(ts) != 2:
                    out.append(Violation("MissingSubface", (f, r), "ridge in %d facets" % len(ts)))
            if ridges and not fac:
                out.append(Violation("MissingSubface", (f,)))
        subs = [g for g in P.subfaces(f) if g != f]
        for a, b in combinations(subs, 2):
            if P.dim(a) == P.dim(b) and affine_rank(pts[v] for v in sorted(a | b)) == P.dim(a):
                out.append(Violation("Degenerate", (a, b), "same affine hull"))
    face_set = set(faces)
    for a, b in combinations(faces, 2):
        c = a & b
        if c and c not in face_set:
            out.append(Violation("IntersectionNotAFace", (a, b)))
    return out


def independent_tuple(P, vertex_ids):
    """Lexicographically first affinely independent spanning tuple (greedy)."""
    vs = sorted(vertex_ids)
    chosen = [vs[0]]
    base = P.coords(vs[0])
    rows = []
    for v in vs[1:]:
        row = [a - b for a, b in zip(P.coords(v), base)]
        if len(echelon(rows + [row])[1]) > len(rows):
            rows.append(row)
            chosen.append(v)
    return tuple(chosen)


def _side(P, f, t, x):
    """Orientation sign of x relative to facet t inside the affine hull of f."""
    ref = independent_tuple(P, f)
    base = P.coords(ref[0])
    span = [[a - b for a, b in zip(P.coords(v), base)] for v in ref[1:]]
    _, piv, _ = echelon(span)
    tv = independent_tuple(P, t)
    t0 = P.coords(tv[0])
    rows = [[P.coords(v)[c] - t0[c] for c in piv] for v in tv[1:]]
    rows.append([P.coords(x)[c] - t0[c] for c in piv])
    return det_sign(rows)


# ---------------------------------------------------------------- json

def complex_from_json(data):
    if "product" in data:
        return ProductComplex([complex_from_json(x) for x in data["product"]])
    coords = [[Fraction(x) for x in c] for c in data["vertices"]]
    return PolytopalComplex(coords, data["faces"])


def dumps(P) -> str:
    return json.dumps(P.to_json(), sort_keys=True)
