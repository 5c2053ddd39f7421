"""
Exact linear algebra over the rationals.

Matrices are lists of rows of Fraction. Everything here is deterministic and
allocation-light; the subspace and map types in this package are thin wrappers
around these routines.
"""

from fractions import Fraction

from apps.core.exceptions import AmbientMismatchError, SingularMapError


def to_rows(rows):
    """Copy a nested sequence into a list of Fraction rows."""
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows, ncols=None):
    """
    Reduced row-echelon form.

    Args:
        rows: nested sequence of numbers
        ncols: number of columns, needed only when rows is empty

    Returns:
        (reduced nonzero rows, tuple of pivot columns); pivots are strictly
        increasing and every pivot entry is 1
    """
    m = to_rows(rows)
    if not m:
        return [], ()
    width = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(width):
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], tuple(pivots)


def rank(rows):
    return len(rref(rows)[0])


def nullspace(rows, ncols):
    """Basis of {x : M x = 0}, one vector per free column, in column order."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[free]
        basis.append(x)
    return basis


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def matmul(a, b):
    if a and b and len(a[0]) != len(b):
        raise AmbientMismatchError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def diagonal(entries):
    n = len(entries)
    return [[Fraction(entries[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def inverse(rows):
    """Inverse of a square matrix; raises SingularMapError when singular."""
    m = to_rows(rows)
    n = len(m)
    augmented = [row + ident for row, ident in zip(m, identity(n))]
    reduced, pivots = rref(augmented)
    if pivots[:n] != tuple(range(n)) or len(reduced) < n:
        raise SingularMapError(f"{n}x{n} matrix is singular")
    return [row[n:] for row in reduced]


def determinant(rows):
    m = to_rows(rows)
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                factor = m[i][c] / m[c][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[c])]
    return det


def solve(rows, rhs):
    """
    Solve M x = rhs exactly.

    Returns one solution (free variables set to zero) or None when the
    system is inconsistent.
    """
    ncols = len(rows[0]) if rows else 0
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[ncols]
    return x


def is_symmetric(rows):
    n = len(rows)
    return all(rows[i][j] == rows[j][i] for i in range(n) for j in range(i + 1, n))
