"""Brute-force reference computations that share no code with the package."""

from fractions import Fraction
from itertools import combinations


def rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def ce_betti(n, brackets, rho=None):
    """Betti numbers of the cochain complex ``Hom(Lambda^p g, V)``.

    ``brackets[(i, j)]`` lists ``[X_i, X_j]`` for ``i < j``; ``rho`` is a list of
    ``n`` square matrices (defaults to the one-dimensional trivial module).
    Cochains are evaluated on sorted index tuples and the differential is the
    classical formula with the module term and the bracket term.
    """
    rho = rho or [[[0]] for _ in range(n)]
    r = len(rho[0])

    def br(i, j):
        if i == j:
            return [0] * n
        if i < j:
            return list(brackets.get((i, j), [0] * n))
        return [-x for x in brackets.get((j, i), [0] * n)]

    def basis(p):
        return [(I, a) for I in combinations(range(n), p) for a in range(r)]

    def value(cochain, idx):
        """Value on X_{idx} for any index tuple, by antisymmetry."""
        if len(set(idx)) < len(idx):
            return [Fraction(0)] * r
        order = sorted(range(len(idx)), key=lambda k: idx[k])
        inv = sum(1 for x in range(len(order)) for y in range(x + 1, len(order)) if order[x] > order[y])
        v = cochain.get(tuple(sorted(idx)), [Fraction(0)] * r)
        return [-x for x in v] if inv % 2 else list(v)

    def d(cochain, p):
        out = {}
        for J in combinations(range(n), p + 1):
            acc = [Fraction(0)] * r
            for i in range(p + 1):
                rest = J[:i] + J[i + 1:]
                v = value(cochain, rest)
                mv = [sum(Fraction(rho[J[i]][a][b]) * v[b] for b in range(r)) for a in range(r)]
                s = -1 if i % 2 else 1
                acc = [x + s * y for x, y in zip(acc, mv)]
            for i, j in combinations(range(p + 1), 2):
                rest = tuple(J[k] for k in range(p + 1) if k not in (i, j))
                s = -1 if (i + j) % 2 else 1
                for k, c in enumerate(br(J[i], J[j])):
                    if c:
                        v = value(cochain, (k,) + rest)
                        acc = [x + s * c * y for x, y in zip(acc, v)]
            out[J] = acc
        return out

    ranks = {}
    for p in range(n + 1):
        cols = []
        for I, a in basis(p):
            e = [Fraction(0)] * r
            e[a] = Fraction(1)
            img = d({I: e}, p)
            cols.append([img[J][b] for J, b in basis(p + 1)])
        rows = [list(x) for x in zip(*cols)] if cols and cols[0] else []
        ranks[p] = rank(rows) if rows else 0
    dims = {p: len(basis(p)) for p in range(n + 1)}
    return [dims[p] - ranks[p] - (ranks[p - 1] if p else 0) for p in range(n + 1)]


SL2 = (3, {(0, 1): [0, 0, 1], (0, 2): [-2, 0, 0], (1, 2): [0, 2, 0]})
H3 = (3, {(0, 1): [0, 0, 1]})
