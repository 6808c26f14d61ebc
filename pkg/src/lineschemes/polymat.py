"""Matrices of polynomials or scalars, stored as lists of rows.

Determinants use fraction-free Bareiss elimination for rational entries and a
memoized column expansion otherwise.  Rank and null spaces over quotient
towers pivot only on certified units, so a reported rank is never an artifact
of a zero divisor.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import IndeterminateRank, NotSquare, SizeError
from .multipoly import MPoly
from .scalars import TowerElem, specialize_alpha


def shape(m):
    return len(m), (len(m[0]) if m else 0)


def identity(n):
    return [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]


def submatrix(m, rows, cols):
    return [[m[r][c] for c in cols] for r in rows]


def transpose(m):
    return [list(col) for col in zip(*m)]


def map_entries(m, fn):
    return [[fn(x) for x in row] for row in m]


def _is_rational(x):
    return isinstance(x, (int, Fraction))


# ---------------------------------------------------------------------------
# determinants


def bareiss_det(m):
    """Fraction-free Bareiss elimination for integer or rational entries."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise NotSquare(f"{n}x{len(m[0]) if m else 0} matrix")
    if n == 0:
        return Fraction(1)
    # clear denominators row by row so the elimination runs over the integers
    scale = Fraction(1)
    a = []
    for row in m:
        den = 1
        for x in row:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
        scale /= den
        a.append([int(Fraction(x) * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1] * scale


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return x


class CofactorCache:
    """Memo table for column expansion, keyed by (row subset, first column).

    One cache can be shared by every square submatrix that uses the same
    ordered column list, which is how overlapping minors share work.
    """

    def __init__(self, m, cols, one):
        self.m = m
        self.cols = tuple(cols)
        self.one = one
        self.memo = {}

    def det(self, rows):
        rows = tuple(rows)
        if len(rows) != len(self.cols):
            raise NotSquare(f"{len(rows)} rows against {len(self.cols)} columns")
        return self._det(rows, 0)

    def _det(self, rows, start):
        if start == len(self.cols):
            return self.one
        key = (rows, start)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        col = self.cols[start]
        acc = None
        for pos, r in enumerate(rows):
            entry = self.m[r][col]
            if not entry:
                continue
            rest = self._det(rows[:pos] + rows[pos + 1:], start + 1)
            if not rest:
                continue
            term = entry * rest
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = self.one * 0
        self.memo[key] = acc
        return acc


def _one_like(m):
    for row in m:
        for x in row:
            if isinstance(x, MPoly):
                return x.one()
    return Fraction(1)


def det(m):
    """Exact determinant of a square matrix."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise NotSquare(f"{n}x{len(m[0]) if m else 0} matrix")
    if all(_is_rational(x) for row in m for x in row):
        return bareiss_det(m)
    return CofactorCache(m, range(n), _one_like(m)).det(range(n))


def enumerate_minors(m, size):
    """All ``size``-minors as ``(rows, cols, value)``, rows then columns in lex order.

    Minors are plain determinants of submatrices with increasing indices.
    """
    nrows, ncols = shape(m)
    if size < 0 or size > min(nrows, ncols):
        raise SizeError(f"minor size {size} for a {nrows}x{ncols} matrix")
    one = _one_like(m)
    scalar = all(_is_rational(x) for row in m for x in row)
    caches = {}
    out = []
    for rows in combinations(range(nrows), size):
        for cols in combinations(range(ncols), size):
            if scalar:
                value = bareiss_det(submatrix(m, rows, cols))
            else:
                cache = caches.get(cols)
                if cache is None:
                    cache = caches[cols] = CofactorCache(m, cols, one)
                value = cache.det(rows)
            out.append((rows, cols, value))
    return out


# ---------------------------------------------------------------------------
# elimination


def _pivot_status(x):
    """'unit', 'zero' or 'nonunit' for a field or tower scalar."""
    if isinstance(x, TowerElem):
        if not x.coords:
            return "zero"
        return "unit" if x.is_unit() else "nonunit"
    return "unit" if x else "zero"


def row_reduce(m, ncols=None):
    """Reduced row echelon form with leftmost pivots.

    Returns ``(rref_rows, pivot_columns)``.  Over a tower only units are used as
    pivots; a column whose nonzero entries are all non-units makes the rank
    undecidable here and raises :class:`IndeterminateRank`.
    """
    rows = [list(r) for r in m]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        found = None
        stuck = []
        for k in range(r, len(rows)):
            status = _pivot_status(rows[k][c])
            if status == "unit":
                found = k
                break
            if status == "nonunit":
                stuck.append(k)
        if found is None:
            if stuck:
                raise IndeterminateRank(
                    f"column {c} has only non-unit nonzero entries",
                    {"column": c, "rows": stuck, "rank_so_far": r},
                )
            continue
        rows[r], rows[found] = rows[found], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r:
                f = rows[k][c]
                if _pivot_status(f) != "zero":
                    rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    # rows below the pivots must be exactly zero for the rank to be certain
    for k in range(r, len(rows)):
        for c, x in enumerate(rows[k]):
            if _pivot_status(x) != "zero":
                raise IndeterminateRank(
                    f"residual entry in row {k}, column {c} is a non-unit",
                    {"column": c, "rows": [k], "rank_so_far": r},
                )
    return rows[:r], pivots


def rank(m):
    if not m:
        return 0
    return len(row_reduce(m)[1])


def null_space(m, ncols=None):
    """Echelon basis of the right null space.

    Each basis vector has a 1 in one free column and zeros in the other free
    columns.
    """
    if ncols is None:
        ncols = len(m[0]) if m else 0
    rref, pivots = row_reduce(m, ncols) if m else ([], [])
    zero, one = _zero_one(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(rref, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def _zero_one(m):
    for row in m:
        for x in row:
            if isinstance(x, TowerElem):
                return x.ring.zero(), x.ring.one()
    return Fraction(0), Fraction(1)


def mat_vec(m, v):
    out = []
    for row in m:
        acc = 0
        for x, y in zip(row, v):
            acc = x * y + acc
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# symbolic matrices at points


def evaluate_matrix(m, point):
    """Substitute a coordinate assignment into every entry."""
    return [[x.evaluate(point) if isinstance(x, MPoly) else x for x in row] for row in m]


def rank_at_with_mode(m, point, fallback_alphas=(3, 5)):
    """Rank of ``m`` at ``point`` together with how it was decided.

    The mode is ``"exact"`` when unit-pivot elimination in the quotient ring
    succeeded.  Otherwise the matrix is specialized at each value in
    ``fallback_alphas``; if every specialization gives the same rank the mode
    is ``"specialized"``.  Disagreement raises :class:`IndeterminateRank`.
    """
    scalar = evaluate_matrix(m, point)
    try:
        return rank(scalar), "exact"
    except IndeterminateRank as exc:
        first = exc
    ranks = {}
    for value in fallback_alphas:
        spec = map_entries(scalar, lambda x, v=value: specialize_alpha(x, v))
        try:
            ranks[value] = rank(spec)
        except IndeterminateRank as exc:
            ranks[value] = None
            first.diagnostics.setdefault("specialized", {})[value] = exc.diagnostics
    values = set(ranks.values())
    if len(values) == 1 and None not in values:
        return values.pop(), "specialized"
    first.diagnostics["specialized_ranks"] = ranks
    raise first


def rank_at(m, point):
    return rank_at_with_mode(m, point)[0]
