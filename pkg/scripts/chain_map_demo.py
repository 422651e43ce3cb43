"""Induced chain maps on a few small maps, face by face."""

from polychain.chains import boundary_face
from polychain.complex import make_simplex
from polychain.polymap import PolytopalMap, induce_chain_map, is_feh_cubical, validate_polytopal
from polychain.suite import cubical_counterexample, hexagon_double_wrap


def show(name, lam):
    sharp = induce_chain_map(lam)
    print(name)
    for f in sorted(lam.source.faces(), key=lambda f: (len(f), sorted(f))):
        img = sharp.on_face(f)
        if lam.source.dim(f) and img:
            print("  %-22s -> %s" % (sorted(f), {tuple(sorted(g)): c for g, c in img.terms.items()}))


def main():
    show("hexagon wrapped twice around a triangle", hexagon_double_wrap())
    T = make_simplex(2)
    show("triangle folded onto an edge", PolytopalMap(T, T, {0: 0, 1: 1, 2: 1}))
    lam = hexagon_double_wrap()
    top = max(lam.source.faces(), key=len)
    print("boundary of the hexagon:", len(boundary_face(lam.source, top)), "edges")
    cub = cubical_counterexample()
    print("table map: adjacency-cubical =", is_feh_cubical(cub),
          "| rejected faces:", [(v.dim, v.image_dim) for v in validate_polytopal(cub)])


if __name__ == "__main__":
    main()
