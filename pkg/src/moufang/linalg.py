"""Exact linear algebra over field Elements: vectors as tuples, matrices as
tuples of row tuples.  Points are row vectors acted on the right (x -> x*M),
so products of group elements compose left to right."""

from __future__ import annotations

from .fields import DivisionByZero, Element


class SingularMatrix(Exception):
    pass


def vec(field, entries):
    return tuple(e if isinstance(e, Element) else field.from_int(e) for e in entries)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(a, c):
    return tuple(x * c for x in a)


def vdot(a, b):
    acc = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        acc = acc + x * y
    return acc


def vzero(a):
    return all(x.is_zero() for x in a)


def proj_normalize(a):
    """Scale so the first nonzero coordinate is 1; fails on the zero vector."""
    for x in a:
        if not x.is_zero():
            inv = x.inv()
            return tuple(y * inv for y in a)
    raise ValueError("zero vector has no projective class")


def unit_vector(field, n, i):
    return tuple(field.one if j == i else field.zero for j in range(n))


def cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def identity_matrix(field, n):
    return tuple(unit_vector(field, n, i) for i in range(n))


def mat_mul(A, B):
    Bt = tuple(zip(*B))
    return tuple(tuple(vdot(row, col) for col in Bt) for row in A)


def row_times_mat(v, M):
    return tuple(vdot(v, col) for col in zip(*M))


def mat_inv(M):
    n = len(M)
    field = M[0][0].field
    aug = [list(M[i]) + list(unit_vector(field, n, i)) for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if pivot is None:
            raise SingularMatrix("matrix is not invertible")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inv()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def mat_proj_normalize(M):
    """Scale a matrix so its first nonzero entry (row major) is 1."""
    for row in M:
        for x in row:
            if not x.is_zero():
                inv = x.inv()
                return tuple(tuple(y * inv for y in r) for r in M)
    raise ValueError("zero matrix")


def rref(rows):
    """Reduced row echelon form with zero rows dropped; canonical per rowspace."""
    work = [list(r) for r in rows]
    m = len(work)
    if m == 0:
        return ()
    n = len(work[0])
    lead = 0
    r = 0
    pivots = []
    while r < m and lead < n:
        pivot = next((i for i in range(r, m) if not work[i][lead].is_zero()), None)
        if pivot is None:
            lead += 1
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = work[r][lead].inv()
        work[r] = [x * inv for x in work[r]]
        for i in range(m):
            if i != r and not work[i][lead].is_zero():
                f = work[i][lead]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(lead)
        r += 1
        lead += 1
    return tuple(tuple(row) for row in work[:r])


def rank(rows):
    return len(rref(rows))


def span_contains(rows, v):
    return rank(list(rows) + [list(v)]) == len(rref(rows))


def solve_in_span(rows, v):
    """Coefficients c with sum(c_i * rows_i) = v, or None if v is outside."""
    field = v[0].field
    n = len(v)
    k = len(rows)
    aug = [[rows[i][j] for i in range(k)] + [v[j]] for j in range(n)]
    echelon = [list(r) for r in aug]
    pivots = []
    r = 0
    for col in range(k):
        pivot = next((i for i in range(r, n) if not echelon[i][col].is_zero()), None)
        if pivot is None:
            continue
        echelon[r], echelon[pivot] = echelon[pivot], echelon[r]
        inv = echelon[r][col].inv()
        echelon[r] = [x * inv for x in echelon[r]]
        for i in range(n):
            if i != r and not echelon[i][col].is_zero():
                f = echelon[i][col]
                echelon[i] = [x - f * y for x, y in zip(echelon[i], echelon[r])]
        pivots.append(col)
        r += 1
    for i in range(r, n):
        if not echelon[i][k].is_zero():
            return None
    coeffs = [field.zero] * k
    for row_idx, col in enumerate(pivots):
        coeffs[col] = echelon[row_idx][k]
    return tuple(coeffs)


def subspace_intersection(A, B):
    """Basis (rref) of the intersection of two row spaces."""
    A, B = rref(A), rref(B)
    if not A or not B:
        return ()
    field = A[0][0].field
    n = len(A[0])
    stacked = [list(a) + list(a) for a in A] + [list(b) + [field.zero] * n for b in B]
    reduced = rref(stacked)
    out = []
    for row in reduced:
        if all(x.is_zero() for x in row[:n]) and not all(x.is_zero() for x in row[n:]):
            out.append(tuple(row[n:]))
    return rref(out)


def intersection_dim(A, B):
    return len(subspace_intersection(A, B))
