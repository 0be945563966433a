"""Pure-Python integer kernels.

Same signatures as the compiled ``_kernels`` extension; used when the
extension is not built or ``LIEMOD_PURE_PYTHON`` is set.
"""

from math import gcd


def int_matmul(a, b, ncols):
    """Product of two integer matrices given as sequences of rows."""
    out = []
    for arow in a:
        acc = [0] * ncols
        for k, x in enumerate(arow):
            if x:
                brow = b[k]
                for j in range(ncols):
                    y = brow[j]
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def _primitive(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def row_reduce(rows, ncols):
    """Fraction-free Gauss-Jordan elimination over the integers.

    Returns ``(echelon_rows, pivots)``: the nonzero rows of a reduced echelon
    form, each row primitive with a positive pivot, and every pivot column
    zero outside its pivot row.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        best = -1
        best_abs = 0
        for i in range(r, nrows):
            v = m[i][c]
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
        prow = m[r]
        if prow[c] < 0:
            prow = [-x for x in prow]
        prow = _primitive(prow)
        m[r] = prow
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            a = row[c]
            if not a:
                continue
            g = gcd(p, a)
            pp = p // g
            aa = a // g
            m[i] = _primitive([pp * x - aa * y for x, y in zip(row, prow)])
        pivots.append(c)
        r += 1
    return m[:r], pivots
