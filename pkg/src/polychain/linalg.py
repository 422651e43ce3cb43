"""Exact linear algebra over the rationals and over Z/p."""

from fractions import Fraction


def _to_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def echelon(rows):
    """Row-reduce a copy of `rows` over Q.

    Returns (reduced rows, pivot columns, sign of the row permutation).
    """
    m = _to_fractions(rows)
    pivots = []
    sign = 1
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
            sign = -sign
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots, sign


def rank(rows) -> int:
    if not rows:
        return 0
    return len(echelon(rows)[1])


def det(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    assert all(len(r) == n for r in rows), "square matrix expected"
    m, pivots, sign = echelon(rows)
    if len(pivots) < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    return out


def det_sign(rows) -> int:
    d = det(rows)
    return (d > 0) - (d < 0)


def affine_rank(points) -> int:
    """Dimension of the affine hull of `points` (-1 for no points)."""
    points = list(points)
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    if not diffs or not diffs[0]:
        return 0
    return rank(diffs)


def solve(a, b):
    """One solution x of a x = b over Q, or None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    m, pivots, _ = echelon(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i in reversed(range(len(pivots))):
        c = pivots[i]
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(c + 1, n))
        x[c] = s / m[i][c]
    return x


class Inconsistent(ArithmeticError):
    """A linear system over Z/p has no solution."""

    def __init__(self, msg, rows=None):
        super().__init__(msg)
        self.rows = rows


def solve_mod_p(a, b, p: int):
    """Solve a x = b over Z/p; free variables are set to 0.

    `a` is a list of dict rows {column: coefficient}; returns a dict
    {column: value} with nonzero values only. Raises Inconsistent.
    """
    rows = []
    for row, rhs in zip(a, b):
        r = {c: v % p for c, v in row.items() if v % p}
        rows.append((r, rhs % p))
    pivot_rows = {}  # pivot column -> (row, rhs), row normalised to pivot 1
    for r, rhs in rows:
        r = dict(r)
        # eliminate existing pivots
        changed = True
        while changed:
            changed = False
            for c in list(r):
                if c in pivot_rows and r.get(c, 0):
                    f = r[c]
                    prow, prhs = pivot_rows[c]
                    for cc, vv in prow.items():
                        nv = (r.get(cc, 0) - f * vv) % p
                        if nv:
                            r[cc] = nv
                        else:
                            r.pop(cc, None)
                    rhs = (rhs - f * prhs) % p
                    changed = True
                    break
        if not r:
            if rhs:
                raise Inconsistent("inconsistent system mod %d" % p, rows)
            continue
        c = min(r)
        inv = pow(r[c], -1, p)
        r = {cc: vv * inv % p for cc, vv in r.items()}
        rhs = rhs * inv % p
        # keep pivot rows fully reduced against the new pivot
        for pc, (prow, prhs) in list(pivot_rows.items()):
            f = prow.get(c, 0)
            if f:
                nrow = dict(prow)
                for cc, vv in r.items():
                    nv = (nrow.get(cc, 0) - f * vv) % p
                    if nv:
                        nrow[cc] = nv
                    else:
                        nrow.pop(cc, None)
                pivot_rows[pc] = (nrow, (prhs - f * rhs) % p)
        pivot_rows[c] = (r, rhs)
    # rows are fully reduced; free variables are zero
    x = {}
    for c, (r, rhs) in pivot_rows.items():
        if rhs:
            x[c] = rhs
    return x


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting `seq` (entries distinct)."""
    seq = list(seq)
    sign = 1
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
