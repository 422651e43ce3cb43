"""Polytopal maps, induced chain maps and chain homotopies."""

from dataclasses import dataclass
from itertools import combinations

from .chains import Chain, boundary, boundary_face, tensor
from .linalg import permutation_sign


class TargetVertexUnknown(ValueError):
    pass


class InductionBroken(RuntimeError):
    """The boundary image is not a multiple of the boundary of the target face."""


class Mismatch(ValueError):
    pass


class NotAHomotopy(ValueError):
    pass


class PolytopalMap:
    """Vertex map between complexes; `vertex_map` is a dict or a callable."""

    def __init__(self, source, target, vertex_map):
        self.source = source
        self.target = target
        if callable(vertex_map):
            self._fn = vertex_map
            self.vertex_map = None
        else:
            self.vertex_map = dict(vertex_map)
            self._fn = self.vertex_map.__getitem__

    def __call__(self, v):
        return self._fn(v)

    def image(self, face):
        return {self._fn(v) for v in self.source.face_vertices(face)}

    def image_face(self, face):
        return self.target.minimal_face_containing(self.image(face))

    def to_json(self):
        if self.vertex_map is None:
            raise TypeError("callable vertex maps do not serialize")
        return {"vertex_map": sorted([s, t] for s, t in self.vertex_map.items())}


def compose_maps(outer, inner):
    """outer o inner as a polytopal map."""
    if inner.target is not outer.source:
        raise Mismatch("inner target is not outer source")
    return PolytopalMap(inner.source, outer.target, lambda v: outer(inner(v)))


@dataclass(frozen=True)
class MapViolation:
    face: object
    dim: int
    image_dim: int  # dimension of the minimal face containing the image, -1 if none


def validate_polytopal(lam, faces=None):
    tgt = lam.target
    known = None
    if lam.vertex_map is not None and hasattr(tgt, "_coords"):
        known = set(tgt.vertices())
        for v, w in lam.vertex_map.items():
            if w not in known:
                raise TargetVertexUnknown("%r -> %r" % (v, w))
    out = []
    for f in (lam.source.faces() if faces is None else faces):
        d = lam.source.dim(f)
        g = lam.image_face(f)
        gd = -1 if g is None else tgt.dim(g)
        if g is None or gd > d:
            out.append(MapViolation(f, d, gd))
    return out


def is_feh_cubical(lam):
    """The Fan / Ehrenborg-Hetyei cubical map condition."""
    for f in lam.source.faces():
        g = lam.image_face(f)
        if g is None:
            return False
        if lam.source.dim(f) == 1 and lam.target.dim(g) > 1:
            return False
    return True


def is_simplicial_map(lam):
    """Classical condition: every simplex goes onto a simplex of the target."""
    for f in lam.source.faces():
        img = lam.image(f)
        g = lam.target.minimal_face_containing(img)
        if g is None or len(lam.target.face_vertices(g)) != len(img):
            return False
    return True


class ChainMap:
    """Chain map induced by a polytopal map, built degree by degree.

    The memo is keyed by face and values are pure functions of the face,
    so concurrent readers at worst recompute an entry.
    """

    def __init__(self, lam):
        self.map = lam
        self.source = lam.source
        self.target = lam.target
        self._memo = {}

    def on_face(self, face):
        out = self._memo.get(face)
        if out is None:
            out = self._compute(face)
            self._memo[face] = out
        return out

    def _compute(self, face):
        src, tgt, lam = self.source, self.target, self.map
        d = src.dim(face)
        if d == 0:
            (v,) = src.face_vertices(face)
            return Chain(0, {tgt.vertex_face(lam(v)): 1})
        g = lam.image_face(face)
        if g is None:
            raise InductionBroken("image of %r lies in no face" % (face,))
        if tgt.dim(g) < d:
            return Chain(d)
        if tgt.dim(g) > d:
            raise InductionBroken("image of a %d-face spans a %d-face" % (d, tgt.dim(g)))
        img = self(boundary_face(src, face))
        if not img:
            return Chain(d)
        dg = boundary_face(tgt, g)
        first = next(iter(dg.terms))
        alpha = img[first] * dg[first]
        if img != alpha * dg:
            raise InductionBroken("coefficients on the facets of %r are not all equal" % (g,))
        return Chain(d, {g: alpha})

    def __call__(self, chain):
        out = {}
        for f, k in chain.terms.items():
            for g, m in self.on_face(f).terms.items():
                out[g] = out.get(g, 0) + k * m
        return Chain(chain.degree, out)

    def alpha(self, face):
        """Signed multiplicity of `face` on its image face (0 if it vanishes)."""
        img = self.on_face(face)
        return next(iter(img.terms.values()), 0)


def induce_chain_map(lam):
    return ChainMap(lam)


class ComposedChainMap:
    def __init__(self, first, second):
        if first.target is not second.source:
            raise Mismatch("chain maps are not composable")
        self.first, self.second = first, second
        self.source, self.target = first.source, second.target
        self._memo = {}

    def on_face(self, face):
        out = self._memo.get(face)
        if out is None:
            out = self.second(self.first.on_face(face))
            self._memo[face] = out
        return out

    def __call__(self, chain):
        out = {}
        for f, k in chain.terms.items():
            for g, m in self.on_face(f).terms.items():
                out[g] = out.get(g, 0) + k * m
        return Chain(chain.degree, out)


def compose(first, second):
    """second o first, applying `first` before `second`."""
    return ComposedChainMap(first, second)


def simplicial_chain_map(lam, face):
    """Textbook simplicial chain map on a reference-oriented simplex."""
    src_vs = lam.source.face_vertices(face)
    img = [lam(v) for v in src_vs]
    d = len(src_vs) - 1
    if len(set(img)) < len(img):
        return Chain(d)
    g = lam.target.minimal_face_containing(img)
    return Chain(d, {g: permutation_sign(img)})


class ChainHomotopy:
    """D = +-phi_# o (- x path) with D d + d D = lambda_# - mu_#."""

    def __init__(self, phi, path_chain):
        self.phi = phi
        self.phi_sharp = induce_chain_map(phi)
        self.path_chain = path_chain

    def on_face(self, face, degree):
        c = Chain(degree, {face: (-1) ** (degree + 1)})
        return self.phi_sharp(tensor(c, self.path_chain))

    def __call__(self, chain):
        out = Chain(chain.degree + 1)
        for f, k in chain.terms.items():
            out = out + k * self.on_face(f, chain.degree)
        return out


def prism_homotopy(phi, lam, mu):
    """Chain homotopy from a polytopal map phi: K x P_n -> L.

    The last factor of phi.source must be a path v_0..v_n (make_path or
    make_cube(1)); phi(., v_0) must equal lam and phi(., v_n) must equal mu.
    """
    factors = phi.source.factors
    path = factors[-1]
    n = path.n_vertices - 1
    K = lam.source
    for v in K.vertices():
        key = v if isinstance(v, tuple) else (v,)
        if phi(key + (0,)) != lam(v) or phi(key + (n,)) != mu(v):
            raise NotAHomotopy("restriction of phi at %r disagrees" % (v,))
    edges = Chain(1, {frozenset((i, i + 1)): 1 for i in range(n)})
    return ChainHomotopy(phi, edges)


def homotopy_defect(K, D, lam_sharp, mu_sharp, face):
    """D d + d D - (lambda_# - mu_#) on one face; zero for a chain homotopy."""
    d = K.dim(face)
    c = Chain(d, {face: 1})
    lhs = D(boundary(K, c)) if d > 0 else Chain(d)
    lhs = lhs + boundary(lam_sharp.target, D(c))
    return lhs - (lam_sharp(c) - mu_sharp(c))
