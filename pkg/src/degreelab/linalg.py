"""Small dense linear algebra over exact rationals (and generic scalars).

Matrices are tuples of row tuples.  All routines work for any scalar type
supporting ring arithmetic; the rank / inverse / characteristic polynomial
routines additionally need exact division and are meant for Fraction (or
int) entries.  Float paths in the package go through numpy instead.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import SingularMatrix

Q0 = Fraction(0)
Q1 = Fraction(1)


def mat(rows):
    """Normalize a nested sequence into a tuple-of-tuples matrix."""
    return tuple(tuple(row) for row in rows)


def shape(m):
    return (len(m), len(m[0]) if m else 0)


def zeros(r, c, zero=Q0):
    return tuple(tuple(zero for _ in range(c)) for _ in range(r))


def identity(n, one=Q1, zero=Q0):
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m)) if m else ()


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, m):
    return tuple(tuple(c * x for x in row) for row in m)


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v, m):
    return tuple(sum(x * y for x, y in zip(v, col)) for col in transpose(m))


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def mat_pow(m, t):
    """Integer power; negative exponents go through the exact inverse."""
    n = len(m)
    if t < 0:
        return mat_pow(inv(m), -t)
    out = identity(n, one=Q1 if _is_exact(m) else 1.0)
    base = m
    while t:
        if t & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base) if t > 1 else base
        t >>= 1
    return out


def mat_eq(a, b):
    return shape(a) == shape(b) and all(
        x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def _is_exact(m):
    return all(isinstance(x, (Fraction, int)) for row in m for x in row)


def to_fraction(m):
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def to_float(m):
    import numpy as np

    return np.array([[complex(x).real if not isinstance(x, complex) else x for x in row] for row in m],
                    dtype=complex if any(isinstance(x, complex) for row in m for x in row) else float)


# -- elimination --------------------------------------------------------------

def _echelon(rows):
    """In-place fraction Gauss elimination; returns pivot count."""
    if not rows:
        return 0
    nc = len(rows[0])
    rank_ = 0
    for col in range(nc):
        pivot = next((i for i in range(rank_, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank_], rows[pivot] = rows[pivot], rows[rank_]
        pr = rows[rank_]
        inv_p = Q1 / pr[col]
        pr = [x * inv_p for x in pr]
        rows[rank_] = pr
        for i in range(len(rows)):
            if i != rank_ and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        rank_ += 1
        if rank_ == len(rows):
            break
    return rank_


def rank(m):
    rows = [list(map(Fraction, row)) for row in m]
    return _echelon(rows)


def row_space_basis(m):
    """Reduced row-echelon basis of the row space (exact)."""
    rows = [list(map(Fraction, row)) for row in m]
    r = _echelon(rows)
    return mat(rows[:r])


def kernel_basis(m):
    """Basis of the right kernel, rows of the returned matrix."""
    rows = [list(map(Fraction, row)) for row in m]
    nr, nc = len(rows), (len(rows[0]) if rows else 0)
    r = _echelon(rows)
    pivots = []
    j = 0
    for i in range(r):
        while rows[i][j] == 0:
            j += 1
        pivots.append(j)
    free = [j for j in range(nc) if j not in pivots]
    basis = []
    for f in free:
        v = [Q0] * nc
        v[f] = Q1
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(tuple(v))
    return tuple(basis)


def inv(m):
    n = len(m)
    rows = [list(map(Fraction, row)) + [Q1 if i == j else Q0 for j in range(n)]
            for i, row in enumerate(m)]
    if _echelon(rows) < n:
        raise SingularMatrix("matrix is singular over the rationals")
    return mat(row[n:] for row in rows)


def solve(m, rhs_cols):
    """Solve m X = rhs (both exact); raises SingularMatrix if m not invertible."""
    return mat_mul(inv(m), rhs_cols)


def det(m):
    n = len(m)
    rows = [list(map(Fraction, row)) for row in m]
    d = Q1
    for col in range(n):
        pivot = next((i for i in range(col, n) if rows[i][col] != 0), None)
        if pivot is None:
            return Q0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            d = -d
        d *= rows[col][col]
        inv_p = Q1 / rows[col][col]
        for i in range(col + 1, n):
            if rows[i][col] != 0:
                f = rows[i][col] * inv_p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return d


# -- characteristic and minimal polynomials -----------------------------------

def charpoly(m):
    """Monic characteristic polynomial, coefficients leading-first.

    Berkowitz recursion: division-free, so integer matrices stay in integers.
    Returns a tuple c with p(x) = sum(c[i] * x**(n-i)), c[0] == 1.
    """
    n = len(m)
    if n == 0:
        return (Q1,)
    coeffs = [Q1, -Fraction(m[0][0])]
    for r in range(1, n):
        a = Fraction(m[r][r])
        row = [Fraction(x) for x in m[r][:r]]
        col = [Fraction(m[i][r]) for i in range(r)]
        sub = [[Fraction(x) for x in m[i][:r]] for i in range(r)]
        toep = [Q1, -a]
        v = col
        for j in range(r):
            toep.append(-sum(x * y for x, y in zip(row, v)))
            if j < r - 1:
                v = [sum(x * y for x, y in zip(srow, v)) for srow in sub]
        new = []
        for i in range(r + 2):
            acc = Q0
            for j in range(min(i, r) + 1):
                if i - j < len(toep):
                    acc += toep[i - j] * coeffs[j]
            new.append(acc)
        coeffs = new
    return tuple(coeffs)


def poly_eval(p, x):
    acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def poly_deriv(p):
    n = len(p) - 1
    if n <= 0:
        return (Q0,)
    return tuple(c * (n - i) for i, c in enumerate(p[:-1]))


def poly_trim(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return tuple(p[i:])


def poly_monic(p):
    p = poly_trim(p)
    lead = p[0]
    if lead == 0:
        return (Q0,)
    return tuple(Fraction(c) / lead for c in p)


def poly_divmod(a, b):
    a = [Fraction(c) for c in poly_trim(a)]
    b = poly_trim(b)
    if b == (Q0,) or all(c == 0 for c in b):
        raise ZeroDivisionError("polynomial division by zero")
    db, lead = len(b) - 1, Fraction(b[0])
    q = []
    while len(a) - 1 >= db and any(c != 0 for c in a):
        f = a[0] / lead
        q.append(f)
        for i in range(db + 1):
            a[i] -= f * Fraction(b[i])
        a.pop(0)
    return (poly_trim(tuple(q)) if q else (Q0,), poly_trim(tuple(a)) if a else (Q0,))


def poly_gcd(a, b):
    a, b = poly_trim(a), poly_trim(b)
    while not (len(b) == 1 and b[0] == 0):
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)


def poly_mul(a, b):
    out = [Q0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += Fraction(x) * Fraction(y)
    return poly_trim(tuple(out))


def squarefree_part(p):
    """p / gcd(p, p'), monic."""
    p = poly_monic(p)
    if len(p) == 1:
        return p
    g = poly_gcd(p, poly_deriv(p))
    q, r = poly_divmod(p, g)
    assert r == (Q0,) or all(c == 0 for c in r)
    return poly_monic(q)


def is_squarefree(p):
    p = poly_monic(p)
    if len(p) <= 2:
        return True
    return len(poly_gcd(p, poly_deriv(p))) == 1


def minimal_polynomial(m):
    """Minimal polynomial of an exact square matrix, monic leading-first."""
    n = len(m)
    if n == 0:
        return (Q1,)
    mq = to_fraction(m)
    acc = (Q1,)
    for start in range(n):
        if len(acc) == n + 1:
            break
        v = tuple(Q1 if i == start else Q0 for i in range(n))
        # reduce v against Krylov echelon while recording combination coeffs
        rows = []  # (reduced vector list, coeff list over powers)
        cur = list(v)
        coeffs = [Q1]
        while True:
            red = cur[:]
            comb = coeffs[:] + [Q0] * 0
            for rv, rc in rows:
                piv = next(i for i, x in enumerate(rv) if x != 0)
                if red[piv] != 0:
                    f = red[piv] / rv[piv]
                    red = [x - f * y for x, y in zip(red, rv)]
                    comb = _poly_axpy(comb, rc, -f)
            if all(x == 0 for x in red):
                ann = poly_monic(tuple(reversed(comb)))
                acc = _poly_lcm(acc, ann)
                break
            rows.append((red, comb))
            cur = list(mat_vec(mq, tuple(cur)))
            coeffs = [Q0] + coeffs
    return acc


def _poly_axpy(a, b, f):
    # a, b ascending-degree lists; returns a + f*b
    out = [Q0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += f * x
    return out


def _poly_lcm(a, b):
    g = poly_gcd(a, b)
    q, _ = poly_divmod(poly_mul(a, b), g)
    return poly_monic(q)


# -- structured products -------------------------------------------------------

def kron(a, b):
    ra, ca = shape(a)
    rb, cb = shape(b)
    return tuple(
        tuple(a[i][j] * b[k][l] for j in range(ca) for l in range(cb))
        for i in range(ra) for k in range(rb)
    )


def block_diag(blocks):
    blocks = [b for b in blocks if shape(b) != (0, 0)]
    rows = sum(shape(b)[0] for b in blocks)
    cols = sum(shape(b)[1] for b in blocks)
    out = [[Q0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        rb, cb = shape(b)
        for i in range(rb):
            for j in range(cb):
                out[r0 + i][c0 + j] = b[i][j]
        r0 += rb
        c0 += cb
    return mat(out)


def exterior_power(m, k):
    """k-th exterior power: entries are k x k minors over sorted index subsets."""
    n = len(m)
    subsets = list(itertools.combinations(range(n), k))
    if k == 0:
        return ((Q1,),)
    out = []
    for rows_idx in subsets:
        out_row = []
        for cols_idx in subsets:
            sub = mat(tuple(m[i][j] for j in cols_idx) for i in rows_idx)
            out_row.append(det(sub))
        out.append(tuple(out_row))
    return mat(out)


def companion(p):
    """Companion matrix of a monic polynomial (leading-first coefficients)."""
    p = poly_monic(p)
    n = len(p) - 1
    out = [[Q0] * n for _ in range(n)]
    for i in range(1, n):
        out[i][i - 1] = Q1
    for i in range(n):
        out[i][n - 1] = -p[n - i]
    return mat(out)


def frobenius_norm_sq(m):
    """Sum of squared entry magnitudes, exact for rational entries."""
    acc = Q0 if _is_exact(m) else 0.0
    for row in m:
        for x in row:
            if isinstance(x, complex):
                acc = acc + (x.real * x.real + x.imag * x.imag)
            else:
                acc = acc + x * x
    return acc


def frobenius_norm(m):
    return math.sqrt(float(frobenius_norm_sq(m)))
