"""Exact linear algebra kernels.

Dense matrices are lists of row lists over a scalar field (see ``scalars``);
sparse rows are dicts column->scalar.  The canonical reduced echelon form
(leftmost pivot, pivot normalized to 1, reduced upwards, first-nonzero-row tie
break) makes rank, nullspace and solve deterministic, which the golden-file
and determinism tests rely on.

For large rank certificates over Q there is a single-prime modular fast path
(numpy int64 elimination): full rank mod p soundly implies full rank over Q;
a modular failure escalates to the exact routine instead of concluding
degeneracy.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import QQ

_CERT_PRIME = 46337  # largest prime with p*p < 2^31.5; (p-1)^2 * n fits int64


def echelon(field, rows):
    """Reduced row echelon form (in a fresh matrix) plus the pivot columns."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = field.inv(mat[r][c])
        if not field.eq(mat[r][c], field.one):
            mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def rank(field, rows):
    if not rows:
        return 0
    return len(echelon(field, rows)[1])


def nullspace(field, rows, ncols=None):
    """Basis of {x : A x = 0}, canonical (free columns set to 1 in order)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        rows = [[field.zero] * ncols]
    red, pivots = echelon(field, rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for r, pc in enumerate(pivots):
            v = red[r][fc]
            if v:
                vec[pc] = -v
        basis.append(vec)
    return basis


def solve_exact(field, mat, rhs):
    """One solution of A x = b, or None if inconsistent."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    aug = [list(mat[i]) + [rhs[i]] for i in range(nrows)]
    red, pivots = echelon(field, aug)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def matmul(field, a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[field.zero] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            v = ai[t]
            if v:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] = oi[j] + v * bt[j]
    return out


def matvec(field, a, x):
    out = []
    for row in a:
        acc = field.zero
        for v, xi in zip(row, x):
            if v and xi:
                acc = acc + v * xi
        out.append(acc)
    return out


def identity(field, n):
    return [
        [field.one if i == j else field.zero for j in range(n)] for i in range(n)
    ]


def kron(field, a, b):
    na, nb = len(a), len(b)
    ma = len(a[0]) if na else 0
    mb = len(b[0]) if nb else 0
    out = [[field.zero] * (ma * mb) for _ in range(na * nb)]
    for i in range(na):
        for j in range(ma):
            v = a[i][j]
            if not v:
                continue
            for p in range(nb):
                row = out[i * nb + p]
                brow = b[p]
                for q in range(mb):
                    if brow[q]:
                        row[j * mb + q] = v * brow[q]
    return out


def sparse_echelon_rank(field, sparse_rows, early_stop=None):
    """Rank of a list of dict-rows (column -> scalar); order-insensitive.

    ``early_stop``: return as soon as the rank reaches this value.
    """
    pivots = {}  # col -> normalized dict row
    rnk = 0
    for row in sparse_rows:
        cur = {c: v for c, v in row.items() if v}
        while cur:
            c = min(cur)
            if c in pivots:
                f = cur[c]
                prow = pivots[c]
                for cc, vv in prow.items():
                    nv = cur.get(cc, field.zero) - f * vv
                    if nv:
                        cur[cc] = nv
                    else:
                        cur.pop(cc, None)
            else:
                inv = field.inv(cur[c])
                pivots[c] = {cc: vv * inv for cc, vv in cur.items()}
                rnk += 1
                if early_stop is not None and rnk >= early_stop:
                    return rnk
                break
    return rnk


def sparse_row_reduce_basis(field, sparse_rows):
    """Canonical echelon basis of the row span, rows as dicts."""
    pivots = {}
    for row in sparse_rows:
        cur = {c: v for c, v in row.items() if v}
        while cur:
            c = min(cur)
            if c in pivots:
                f = cur[c]
                for cc, vv in pivots[c].items():
                    nv = cur.get(cc, field.zero) - f * vv
                    if nv:
                        cur[cc] = nv
                    else:
                        cur.pop(cc, None)
            else:
                inv = field.inv(cur[c])
                pivots[c] = {cc: vv * inv for cc, vv in cur.items()}
                break
    # reduce upwards for canonicity
    cols = sorted(pivots)
    for i, c in enumerate(cols):
        for c2 in cols[i + 1 :]:
            row = pivots[c]
            f = row.get(c2)
            if f:
                for cc, vv in pivots[c2].items():
                    nv = row.get(cc, field.zero) - f * vv
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
    return [pivots[c] for c in cols]


def _mod_p(x, p):
    q = Fraction(x)
    den = q.denominator % p
    if den == 0:
        raise ZeroDivisionError
    return q.numerator % p * pow(den, -1, p) % p


def full_rank_certificate(field, rows) -> bool:
    """True iff the square matrix is invertible.

    Over Q a modular elimination certifies invertibility (sound direction);
    singular-mod-p escalates to the exact echelon.  Other fields go exact.
    """
    n = len(rows)
    if n == 0:
        return True
    assert all(len(r) == n for r in rows)
    if field.kind == "Q":
        try:
            import numpy as np

            p = _CERT_PRIME
            a = np.empty((n, n), dtype=np.int64)
            for i, row in enumerate(rows):
                for j, v in enumerate(row):
                    a[i, j] = _mod_p(v, p)
            ok = True
            for c in range(n):
                col = a[c:, c] % p
                nz = np.nonzero(col)[0]
                if len(nz) == 0:
                    ok = False
                    break
                pr = c + int(nz[0])
                if pr != c:
                    a[[c, pr]] = a[[pr, c]]
                inv = pow(int(a[c, c]), -1, p)
                a[c] = a[c] * inv % p
                below = a[c + 1 :, c]
                if below.size:
                    a[c + 1 :] = (a[c + 1 :] - np.outer(below, a[c])) % p
            if ok:
                return True
        except ZeroDivisionError:
            pass  # denominator divisible by p: fall through to exact
    return rank(field, rows) == len(rows)
