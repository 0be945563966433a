# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels: matrix product and fraction-free elimination.

Entries stay Python ints (arbitrary precision); the gain is in the loops.
"""

from math import gcd


cdef list _primitive(list row):
    cdef object g = 0
    cdef object x
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def int_matmul(a, b, Py_ssize_t ncols):
    cdef list out = []
    cdef list acc
    cdef Py_ssize_t k, j, inner
    cdef object x, y, arow, brow
    for arow in a:
        acc = [0] * ncols
        inner = len(arow)
        for k in range(inner):
            x = arow[k]
            if x:
                brow = b[k]
                for j in range(ncols):
                    y = brow[j]
                    if y:
                        acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def row_reduce(rows, Py_ssize_t ncols):
    cdef list m = [list(src) for src in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, best, j
    cdef object src, v, av, best_abs, p, a, g, pp, aa
    cdef list prow, row, new
    for c in range(ncols):
        if r == nrows:
            break
        best = -1
        best_abs = 0
        for i in range(r, nrows):
            v = (<list>m[i])[c]
            if v:
                av = v if v > 0 else -v
                if best < 0 or av < best_abs:
                    best = i
                    best_abs = av
                    if av == 1:
                        break
        if best < 0:
            continue
        if best != r:
            m[r], m[best] = m[best], m[r]
        prow = <list>m[r]
        if prow[c] < 0:
            prow = [-x for x in prow]
        prow = _primitive(prow)
        m[r] = prow
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = <list>m[i]
            a = row[c]
            if not a:
                continue
            g = gcd(p, a)
            pp = p // g
            aa = a // g
            new = [0] * ncols
            for j in range(ncols):
                new[j] = pp * row[j] - aa * prow[j]
            m[i] = _primitive(new)
        pivots.append(c)
        r += 1
    return m[:r], pivots
