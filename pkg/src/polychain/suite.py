"""Seeded instance generators and the invariant checks shared by tests and the CLI."""

from dataclasses import dataclass, field
from itertools import combinations
import random

from .chains import Chain, boundary, boundary_face, evaluate, reference_orientation, tensor
from .complex import (Subcomplex, make_cube, make_path, make_polygon, make_simplex,
                      order_complex, power, product)
from .linalg import affine_rank, permutation_sign, solve
from .polymap import (PolytopalMap, compose, compose_maps, homotopy_defect, induce_chain_map,
                      prism_homotopy, simplicial_chain_map)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {"name": self.name, "checked": self.checked, "failures": len(self.failures),
                "examples": [repr(f) for f in self.failures[:5]], "ok": self.ok}


HEXAGON = [(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)]


def hexagon():
    return make_polygon(HEXAGON)


# ---------------------------------------------------------------- generators

def random_subcomplex(rng, max_dim=4):
    """Downward closure of a few random faces of a simplex or a cube."""
    d = rng.randint(1, max_dim)
    P = make_simplex(d) if rng.random() < 0.5 else make_cube(min(d, 4))
    faces = list(P.faces())
    gens = rng.sample(faces, rng.randint(1, min(4, len(faces))))
    gen_sets = [frozenset(P.face_vertices(g)) for g in gens]
    return Subcomplex(P, lambda f: any(f <= g for g in gen_sets), name="random_sub(%s)" % P.name)


def random_simplicial_map(rng, max_dim=4):
    """A vertex map between random simplicial complexes that sends simplices to simplices."""
    src = random_subcomplex_of_simplex(rng, max_dim)
    while True:
        tgt = random_subcomplex_of_simplex(rng, max_dim)
        tv = sorted(tgt.vertices())
        table = {v: rng.choice(tv) for v in src.vertices()}
        lam = PolytopalMap(src, tgt, table)
        if all(tgt.minimal_face_containing(lam.image(f)) is not None
               and len(tgt.face_vertices(tgt.minimal_face_containing(lam.image(f)))) == len(lam.image(f))
               for f in src.faces()):
            return lam


def random_subcomplex_of_simplex(rng, max_dim=4):
    d = rng.randint(1, max_dim)
    P = make_simplex(d)
    faces = list(P.faces())
    gens = [frozenset(P.face_vertices(g)) for g in rng.sample(faces, rng.randint(1, 3))]
    gens.append(frozenset(P.vertices()) if rng.random() < 0.3 else frozenset())
    keep = [g for g in gens if g]
    # every vertex stays, so vertex maps are total
    return Subcomplex(P, lambda f: len(f) == 1 or any(f <= g for g in keep),
                      name="random_simplicial(%d)" % d)


def random_cube_map(rng, d, e, source=None, target=None):
    """Coordinate map on {0,1}^d: each target coordinate copies, flips or fixes a source one."""
    src = source or make_cube(d)
    tgt = target or make_cube(e)
    # a source coordinate feeds at most one target coordinate, else edges hit diagonals
    free = list(range(d))
    rng.shuffle(free)
    rules = []
    for _ in range(e):
        kind = rng.choice(("copy", "flip", "const")) if free else "const"
        rules.append((kind, free.pop() if kind != "const" else 0, rng.randint(0, 1)))

    def f(v):
        x = tuple(int(c) for c in src.coords(v))
        y = tuple(x[i] if k == "copy" else 1 - x[i] if k == "flip" else c for k, i, c in rules)
        return tgt.vertex_index[y]

    return PolytopalMap(src, tgt, {v: f(v) for v in src.vertices()})


def hexagon_double_wrap():
    H = hexagon()
    T = make_simplex(2)
    return PolytopalMap(H, T, {i: i % 3 for i in range(6)})


CUBICAL_TABLE = {
    (0, 0, 0): (0, 0, 0, 0),
    (1, 0, 0): (1, 0, 0, 0),
    (0, 1, 0): (0, 1, 0, 0),
    (1, 1, 0): (0, 0, 0, 0),
    (0, 0, 1): (0, 0, 0, 1),
    (1, 0, 1): (0, 0, 0, 0),
    (0, 1, 1): (0, 0, 0, 0),
    (1, 1, 1): (0, 0, 1, 0),
}


def cubical_counterexample():
    """3-cube -> 4-cube map that is cubical in the weaker adjacency sense only."""
    C3, C4 = make_cube(3), make_cube(4)
    return PolytopalMap(C3, C4, {C3.vertex_index[x]: C4.vertex_index[y]
                                 for x, y in CUBICAL_TABLE.items()})


# ---------------------------------------------------------------- checks

def check_dd(P, name=None):
    res = SuiteResult(name or "dd:%s" % getattr(P, "name", P))
    for d in range(2, P.dimension + 1):
        for f in P.faces(d):
            res.checked += 1
            if boundary(P, boundary_face(P, f)):
                res.failures.append(f)
    return res


def standard_dd_complexes(max_simplex=5, max_cube=4):
    out = [make_simplex(d) for d in range(max_simplex + 1)]
    out += [make_cube(d) for d in range(max_cube + 1)]
    out.append(product(make_simplex(2), make_cube(2)))
    out.append(order_complex(make_cube(2)))
    out.append(hexagon())
    return out


def _same_side(pts, rest, a, b):
    """Whether a and b lie on the same side of aff(rest) inside aff(rest + a)."""
    o = pts[rest[0]]
    dirs = [[x - y for x, y in zip(pts[r], o)] for r in rest[1:]]
    ab = [x - y for x, y in zip(pts[b], pts[a])]
    # a + s (b - a) = o + sum c_j dir_j
    cols = [ab] + [[-x for x in dj] for dj in dirs]
    rows = [list(r) for r in zip(*cols)]
    rhs = [x - y for x, y in zip(o, pts[a])]
    sol = solve(rows, rhs)
    if sol is None:
        return True
    return not (0 <= sol[0] <= 1)


def orientation_functions(P, face):
    """All sign functions on the face obeying the orientation axioms.

    Values live on the affinely independent (d+1)-subsets (alternation and
    vanishing are built in); the half-space rule is propagated from one seed
    tuple and then checked on every exchange. Returns the consistent ones as
    dicts keyed by sorted vertex tuples.
    """
    vs = sorted(P.face_vertices(face))
    d = P.dim(face)
    pts = {v: P.coords(v) for v in vs}
    subsets = [S for S in combinations(vs, d + 1) if affine_rank(pts[v] for v in S) == d]
    known = set(subsets)
    found = []
    for seed in (1, -1):
        val = {subsets[0]: seed}
        stack = [subsets[0]]
        ok = True
        while stack:
            S = stack.pop()
            for a in S:
                rest = tuple(x for x in S if x != a)
                e_a = val[S] * permutation_sign((a,) + rest)
                for b in vs:
                    if b in S:
                        continue
                    T = tuple(sorted(rest + (b,)))
                    if T not in known:
                        continue
                    e_b = e_a if _same_side(pts, rest, a, b) else -e_a
                    want = e_b * permutation_sign((b,) + rest)
                    if T in val:
                        ok &= val[T] == want
                    else:
                        val[T] = want
                        stack.append(T)
        if len(val) != len(subsets):
            raise RuntimeError("exchange graph of %r is disconnected" % (face,))
        if ok:
            found.append(val)
    return found


def check_two_orientations(P, face):
    """Exactly two functions, negatives of each other, one of them the reference."""
    fns = orientation_functions(P, face)
    if len(fns) != 2:
        return False
    a, b = fns
    if any(a[S] != -b[S] for S in a):
        return False
    ref = reference_orientation(P, face)
    ours = {S: evaluate(ref, S) for S in a}
    return ours == a or ours == b


def orientation_faces():
    """Twenty faces with at most 8 vertices."""
    out = []
    for d in range(5):
        S = make_simplex(d)
        out.append((S, max(S.faces(), key=len)))
    for d in range(1, 4):
        C = make_cube(d)
        out.append((C, max(C.faces(), key=len)))
    H = hexagon()
    out.append((H, max(H.faces(), key=len)))
    for k in (4, 5, 7, 8):
        pts = _convex_polygon(k)
        Q = make_polygon(pts)
        out.append((Q, max(Q.faces(), key=len)))
    for P in (product(make_simplex(1), make_simplex(2)), product(make_simplex(1), make_simplex(1)),
              power(make_simplex(1), 3), product(make_simplex(2), make_simplex(0)),
              product(make_cube(1), make_polygon([(0, 0), (2, 0), (0, 1)]))):
        top = next(iter(P.faces(P.dimension)))
        out.append((P, top))
    # a skew quadrilateral face of the 3-cube and a triangle of the order complex
    C3 = make_cube(3)
    out.append((C3, next(iter(C3.faces(2)))))
    O = order_complex(make_cube(2))
    out.append((O, next(iter(O.faces(2)))))
    P4 = power(make_simplex(1), 2)
    out.append((P4, next(iter(P4.faces(1)))))
    return out


def _convex_polygon(k):
    # lattice points on the parabola y = x^2 are in convex position
    return [(i, i * i) for i in range(k)]


def check_leibniz(P, Q):
    """Geometric product boundary against the factor-wise formula on every face pair."""
    res = SuiteResult("leibniz:%s x %s" % (P.name, Q.name))
    PQ = product(P, Q)
    for f in P.faces():
        for g in Q.faces():
            res.checked += 1
            c, c2 = Chain.of(P.dim(f), f), Chain.of(Q.dim(g), g)
            geo = boundary(PQ, tensor(c, c2), geometric=True)
            rule = tensor(boundary(P, c), c2) + (-1) ** c.degree * tensor(c, boundary(Q, c2))
            if geo != rule or boundary(PQ, geo):
                res.failures.append((f, g))
    return res


def leibniz_factors():
    return [make_simplex(0), make_simplex(1), make_simplex(2), make_simplex(3),
            make_cube(2), make_cube(3), hexagon()]


def check_chain_map(lam, oracle=False):
    res = SuiteResult("chainmap")
    sharp = induce_chain_map(lam)
    S, T = lam.source, lam.target
    for f in S.faces():
        res.checked += 1
        d = S.dim(f)
        img = sharp.on_face(f)
        bad = len(img) > 1
        if d:
            bad |= sharp(boundary_face(S, f)) != boundary(T, img)
        if oracle:
            bad |= img != simplicial_chain_map(lam, f)
            bad |= any(abs(c) > 1 for c in img.terms.values())
        if bad:
            res.failures.append(f)
    return res


def check_functoriality(inner, outer):
    """(outer o inner)_# = outer_# o inner_# on every face."""
    res = SuiteResult("functoriality")
    left = induce_chain_map(compose_maps(outer, inner))
    right = compose(induce_chain_map(inner), induce_chain_map(outer))
    for f in inner.source.faces():
        res.checked += 1
        if left.on_face(f) != right.on_face(f):
            res.failures.append(f)
    return res


# ---------------------------------------------------------------- homotopies

def _prism(K, n, rule, L):
    src = product(K, make_path(n))
    phi = PolytopalMap(src, L, lambda v: rule(v[:-1] if len(v) > 2 else v[0], v[-1]))
    lam = PolytopalMap(K, L, lambda v: rule(v, 0))
    mu = PolytopalMap(K, L, lambda v: rule(v, n))
    return phi, lam, mu


def homotopy_instances():
    """(name, phi, lam, mu): three elementary homotopies and one along a path of length 3."""
    out = []
    T = make_simplex(2)
    out.append(("constant-in-time", *_prism(T, 1, lambda v, s: v, T)))
    out.append(("collapse-to-vertex", *_prism(T, 1, lambda v, s: v if s == 0 else 0, T)))
    sq = make_cube(2)

    def squash(v, s):
        x, y = (int(c) for c in sq.coords(v))
        return sq.vertex_index[(x if s == 0 else 0, y)]

    out.append(("square-projection", *_prism(sq, 1, squash, sq)))
    out.append(("rotate-along-P3", *_prism(make_path(2), 3, lambda v, s: (v + s) % 4, make_simplex(3))))
    return out


def check_homotopy(phi, lam, mu, name="homotopy"):
    res = SuiteResult(name)
    D = prism_homotopy(phi, lam, mu)
    ls, ms = induce_chain_map(lam), induce_chain_map(mu)
    K = lam.source
    for f in K.faces():
        res.checked += 1
        if homotopy_defect(K, D, ls, ms, f):
            res.failures.append(f)
    return res


# ---------------------------------------------------------------- runner

def run_all(seed=0, max_dim=4):
    """Every property suite at the given scale; returns SuiteResults in a fixed order."""
    rng = random.Random(seed)
    out = []
    for P in standard_dd_complexes(max_simplex=max_dim + 1, max_cube=max_dim):
        out.append(check_dd(P))
    sub = SuiteResult("dd:random-subcomplexes")
    for _ in range(100):
        r = check_dd(random_subcomplex(rng, max_dim))
        sub.checked += r.checked
        sub.failures += r.failures
    out.append(sub)
    two = SuiteResult("two-orientations")
    for P, f in orientation_faces():
        two.checked += 1
        if not check_two_orientations(P, f):
            two.failures.append(f)
    out.append(two)
    factors = leibniz_factors()
    for i, P in enumerate(factors):
        for Q in factors[i:]:
            out.append(check_leibniz(P, Q))
    simp = SuiteResult("chainmap:random-simplicial")
    for _ in range(100):
        r = check_chain_map(random_simplicial_map(rng, max_dim), oracle=True)
        simp.checked += r.checked
        simp.failures += r.failures
    out.append(simp)
    out.append(check_chain_map(hexagon_double_wrap()))
    fun = SuiteResult("functoriality:random-pairs")
    for k in range(50):
        if k % 2:
            a, b, c = (rng.randint(1, 3) for _ in range(3))
            A, B, C = make_cube(a), make_cube(b), make_cube(c)
            inner = random_cube_map(rng, a, b, A, B)
            outer = random_cube_map(rng, b, c, B, C)
        else:
            inner = random_simplicial_map(rng, max_dim)
            T = inner.target
            outer = PolytopalMap(T, make_simplex(2), {v: rng.randrange(3) for v in T.vertices()})
        r = check_functoriality(inner, outer)
        fun.checked += r.checked
        fun.failures += r.failures
    out.append(fun)
    for name, phi, lam, mu in homotopy_instances():
        out.append(check_homotopy(phi, lam, mu, "homotopy:" + name))
    return out
