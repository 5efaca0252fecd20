"""Exact rational linear algebra: vectors, solving, projections, lattices, LP.

All vectors are tuples of Fraction; all routines are deterministic and exact.
"""

from __future__ import annotations

import math
from fractions import Fraction as Q
from typing import Iterable, List, Optional, Sequence, Tuple

Vector = Tuple[Q, ...]
Matrix = Tuple[Vector, ...]  # tuple of rows


def vec(*xs) -> Vector:
    return tuple(Q(x) for x in xs)


def parse_rational(s) -> Q:
    """Parse an exact rational from an int or a 'p/q' string."""
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, (int, str, Q)):
        return Q(s)
    raise ValueError(f"not a rational: {s!r}")


def format_rational(q: Q) -> str:
    return str(q)


def vadd(x: Vector, y: Vector) -> Vector:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Vector, y: Vector) -> Vector:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return tuple(a - b for a, b in zip(x, y))


def vscale(c: Q, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def vzero(n: int) -> Vector:
    return (Q(0),) * n


def is_zero(x: Vector) -> bool:
    return all(a == 0 for a in x)


def dot(x: Vector, y: Vector) -> Q:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(x, y)), Q(0))


def mat_vec(m: Sequence[Vector], x: Vector) -> Vector:
    return tuple(dot(row, x) for row in m)


def gram_pairing(gram: Sequence[Vector], x: Vector, y: Vector) -> Q:
    """Symmetric bilinear form x^T G y."""
    return dot(x, mat_vec(gram, y))


def det(rows: Sequence[Vector]) -> Q:
    """Determinant of a square matrix given by rows, by fraction-free elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix not square")
    a = [list(r) for r in rows]
    result = Q(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Q(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        result *= a[col][col]
        inv = Q(1) / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return result


def rref(rows: Sequence[Vector]) -> List[List[Q]]:
    """Reduced row echelon form; zero rows dropped."""
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = Q(1) / a[rank][col]
        a[rank] = [v * inv for v in a[rank]]
        for r in range(nrows):
            if r != rank and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * p for v, p in zip(a[r], a[rank])]
        rank += 1
    return [row for row in a[:rank]]


def rank_of(rows: Sequence[Vector]) -> int:
    return len(rref(rows))


def row_space_key(rows: Sequence[Vector]) -> Tuple[Vector, ...]:
    """Canonical hashable key for the row space (RREF rows)."""
    return tuple(tuple(r) for r in rref(rows))


def solve(a_columns: Sequence[Vector], b: Vector) -> Optional[Vector]:
    """Solve sum_i x_i * a_i = b exactly; None if inconsistent.

    With dependent columns, free coordinates are set to zero.
    """
    m = len(b)
    n = len(a_columns)
    aug = [[a_columns[j][i] for j in range(n)] + [b[i]] for i in range(m)]
    pivots: List[int] = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = Q(1) / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(m):
            if r != row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if aug[r][n] != 0:
            return None
    x = [Q(0)] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return tuple(x)


def independent_subset(vectors: Sequence[Vector]) -> List[int]:
    """Indices of the greedy-first maximal independent subset (deterministic)."""
    chosen: List[int] = []
    rows: List[Vector] = []
    for i, v in enumerate(vectors):
        if is_zero(v):
            continue
        if rank_of(rows + [v]) > len(rows):
            chosen.append(i)
            rows.append(v)
    return chosen


def projection_matrix(columns: Sequence[Vector], gram: Sequence[Vector]) -> Matrix:
    """G-orthogonal projection onto span(columns), as a matrix acting on coordinates."""
    n = len(gram)
    if not columns:
        return tuple(vzero(n) for _ in range(n))
    k = len(columns)
    gu = [[gram_pairing(gram, columns[i], columns[j]) for j in range(k)] for i in range(k)]
    # P x = U (U^T G U)^{-1} U^T G x; build column by column on the standard basis.
    cols: List[Vector] = []
    for j in range(n):
        e = tuple(Q(1) if i == j else Q(0) for i in range(n))
        rhs = tuple(gram_pairing(gram, u, e) for u in columns)
        c = solve(tuple(tuple(gu[i][j] for j in range(k)) for i in range(k)), rhs)
        if c is None:
            raise ValueError("dependent projection basis")
        px = vzero(n)
        for ci, u in zip(c, columns):
            px = vadd(px, vscale(ci, u))
        cols.append(px)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def orthogonal_complement_basis(columns: Sequence[Vector], gram: Sequence[Vector]) -> List[Vector]:
    """Basis of the G-orthogonal complement of span(columns)."""
    n = len(gram)
    rows = [tuple(gram_pairing(gram, u, tuple(Q(1) if i == j else Q(0) for i in range(n)))
                  for j in range(n)) for u in columns]
    return nullspace_basis(rows, n)


def nullspace_basis(rows: Sequence[Vector], n: int) -> List[Vector]:
    """Basis of {x : rows @ x = 0}, deterministic."""
    r = rref(rows) if rows else []
    pivot_cols = []
    for row in r:
        pivot_cols.append(next(i for i, v in enumerate(row) if v != 0))
    free_cols = [c for c in range(n) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        x = [Q(0)] * n
        x[fc] = Q(1)
        for row, pc in zip(r, pivot_cols):
            x[pc] = -row[fc]
        basis.append(tuple(x))
    return basis


def lattice_basis(vectors: Sequence[Vector]) -> List[Vector]:
    """Basis of the additive group generated by rational vectors (integer HNF)."""
    vectors = [v for v in vectors if not is_zero(v)]
    if not vectors:
        return []
    n = len(vectors[0])
    denom = 1
    for v in vectors:
        for c in v:
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
    rows = [[int(c * denom) for c in v] for v in vectors]
    # Row-style Hermite reduction by repeated gcd elimination.
    r = 0
    for col in range(n):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[i0] = rows[i0], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][col] != 0:
                    q = rows[i][col] // rows[r][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][col] != 0:
                        done = False
            if done:
                r += 1
                break
    basis_rows = [row for row in rows[:r] if any(row)]
    return [tuple(Q(c, denom) for c in row) for row in basis_rows]


def lp_feasible(a_rows: Sequence[Sequence[Q]], b: Sequence[Q]) -> Optional[List[Q]]:
    """Find t >= 0 with A t = b, exactly; None if infeasible.

    Phase-I simplex with Bland's rule (terminating) over Fractions.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    rows = [list(map(Q, row)) + [Q(bi)] for row, bi in zip(a_rows, b)]
    for row in rows:
        if row[-1] < 0:
            for j in range(n + 1):
                row[j] = -row[j]
    # Tableau columns: n original + m artificial + rhs.
    tab = []
    for i, row in enumerate(rows):
        art = [Q(1) if j == i else Q(0) for j in range(m)]
        tab.append(row[:n] + art + [row[n]])
    basis = [n + i for i in range(m)]
    cost = [Q(0)] * (n + m) + [Q(0)]
    for j in range(n, n + m):
        cost[j] = Q(1)
    # Reduced costs z_j - c_j; the starting basis is the artificial identity.
    red = [sum((tab[i][j] for i in range(m)), Q(0)) - cost[j] for j in range(n + m)]
    red.append(sum((tab[i][n + m] for i in range(m)), Q(0)))
    while True:
        enter = next((j for j in range(n + m) if red[j] > 0), None)
        if enter is None:
            break
        ratios = [(tab[i][n + m] / tab[i][enter], basis[i], i)
                  for i in range(m) if tab[i][enter] > 0]
        if not ratios:
            break  # unbounded phase-I cannot happen; defensive
        _, _, leave = min(ratios)
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [v - f * p for v, p in zip(tab[i], tab[leave])]
        f = red[enter]
        red = [v - f * p for v, p in zip(red, tab[leave])]
        basis[leave] = enter
    objective = sum((tab[i][n + m] for i in range(m) if basis[i] >= n), Q(0))
    if objective != 0:
        return None
    x = [Q(0)] * n
    for i, bj in enumerate(basis):
        if bj < n:
            x[bj] = tab[i][n + m]
    return x


def isqrt_upper(q: Q) -> Q:
    """A rational upper bound for sqrt(q), q >= 0."""
    if q < 0:
        raise ValueError("negative")
    if q == 0:
        return Q(0)
    p, d = q.numerator, q.denominator
    return Q(math.isqrt(p * d) + 1, d)
