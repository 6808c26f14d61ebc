"""From the Koszul dual to the quartics that cut out the line scheme in P^5.

The doubled matrix ``[M_hat(u) | M_hat(v)]`` has 45 maximal minors.  Each is
a polynomial in the brackets ``N_ij = u_i v_j - u_j v_i``; the bracket form is
unique once it is reduced modulo the quadratic syzygy
``N12 N34 - N13 N24 + N14 N23``.  Renaming brackets to Pluecker coordinates
gives the quartics, which together with the Pluecker quadric define the
scheme.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from . import polymat
from .errors import NotInInvariantRing
from .multipoly import (
    GREVLEX,
    MPoly,
    VarSet,
    bidegree_check,
    collect_parameter,
    lift_parameter,
    normal_form,
)

log = logging.getLogger(__name__)

UV = VarSet(("u1", "u2", "u3", "u4", "v1", "v2", "v3", "v4"))
N_VARS = VarSet(("N12", "N13", "N14", "N23", "N24", "N34"))
M_VARS = VarSet(("M12", "M13", "M14", "M23", "M24", "M34"))
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# N_ij -> sign * M_kl with {k, l} the complement of {i, j}
ORTHOGONALITY = {
    "N12": (1, "M34"),
    "N13": (-1, "M24"),
    "N14": (1, "M23"),
    "N23": (1, "M14"),
    "N24": (-1, "M13"),
    "N34": (1, "M12"),
}


def pluecker_quadric(varset=M_VARS):
    g = dict(zip(varset.names, varset.gens()))
    names = varset.names
    return g[names[0]] * g[names[5]] - g[names[1]] * g[names[4]] + g[names[2]] * g[names[3]]


def bracket_syzygy():
    return pluecker_quadric(N_VARS)


# ---------------------------------------------------------------------------
# doubled matrix and its minors


def build_doubled_matrix(kd, varset=UV):
    """``[M_hat(u) | M_hat(v)]`` for a Koszul dual with generators z1..z4."""
    n = len(kd.gens)
    us = varset.gens()[:n]
    vs = varset.gens()[n:2 * n]
    z_names = kd.gens
    rows = []
    for row in kd.matrix_hat:
        left = [entry.substitute(dict(zip(z_names, us)), target=varset) for entry in row]
        right = [entry.substitute(dict(zip(z_names, vs)), target=varset) for entry in row]
        rows.append(left + right)
    return rows


def doubled_minors(matrix):
    """The maximal minors of the doubled matrix as ``(rows, minor)``.

    The determinant is computed with ``alpha`` lifted to a polynomial variable
    so that coefficient arithmetic stays in Q.
    """
    nrows, ncols = polymat.shape(matrix)
    try:
        lifted = [[lift_parameter(x) for x in row] for row in matrix]
    except ValueError:
        lifted = None
    if lifted is None:
        return [(rows, value) for rows, _, value in polymat.enumerate_minors(matrix, ncols)]
    varset = matrix[0][0].varset
    out = []
    for rows, _, value in polymat.enumerate_minors(lifted, ncols):
        out.append((rows, collect_parameter(value, varset)))
    return out


# ---------------------------------------------------------------------------
# rewriting in brackets


def _bracket_expansions(varset):
    """``N_ij -> u_i v_j - u_j v_i`` as polynomials over ``varset`` (u's then v's)."""
    g = varset.gens()
    return {name: g[i] * g[4 + j] - g[j] * g[4 + i] for name, (i, j) in zip(N_VARS.names, PAIRS)}


def _monomials(nvars, degree):
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    return out


class BracketRewriter:
    """Expresses bihomogeneous (d, d) invariants as bracket polynomials of degree d.

    The expansion matrix from degree-d bracket monomials to (u, v) monomials is
    built once.  Its kernel is spanned by multiples of the syzygy, so the
    bracket monomials not divisible by the syzygy's leading term (under
    grevlex) are independent; a square invertible block of the expansion
    restricted to them is inverted once and reused for every input.
    """

    def __init__(self, degree=4, order=GREVLEX):
        self.degree = degree
        self.order = order
        syz_lead = bracket_syzygy().leading_monomial(order)
        self.syzygy_lead = syz_lead
        self.all_monomials = _monomials(6, degree)
        self.standard = [e for e in self.all_monomials
                         if not all(a >= b for a, b in zip(e, syz_lead))]
        exp = _bracket_expansions(UV)
        self._expansion_cache = {}
        columns = []
        for e in self.all_monomials:
            columns.append(self.expand_monomial(e, exp))
        self.uv_monomials = sorted({m for col in columns for m in col.terms})
        self.row_index = {m: k for k, m in enumerate(self.uv_monomials)}
        self.expansion_rank = polymat.rank(
            [[col.terms.get(m, Fraction(0)) for col in columns] for m in self.uv_monomials]
        )
        std_cols = [columns[self.all_monomials.index(e)] for e in self.standard]
        # choose independent rows of the standard block: pivots of its transpose
        block_t = [[col.terms.get(m, Fraction(0)) for m in self.uv_monomials] for col in std_cols]
        _, pivot_rows = polymat.row_reduce(block_t, len(self.uv_monomials))
        if len(pivot_rows) != len(self.standard):
            raise NotInInvariantRing("standard bracket monomials are not independent")
        self.pivot_rows = [self.uv_monomials[r] for r in pivot_rows]
        square = [[col.terms.get(m, Fraction(0)) for col in std_cols] for m in self.pivot_rows]
        self.inverse = _invert(square)

    @property
    def kernel_dim(self):
        return len(self.all_monomials) - self.expansion_rank

    def expand_monomial(self, e, exp=None):
        hit = self._expansion_cache.get(e)
        if hit is not None:
            return hit
        exp = exp or _bracket_expansions(UV)
        out = MPoly.const(UV, 1)
        for name, k in zip(N_VARS.names, e):
            if k:
                out = out * exp[name] ** k
        self._expansion_cache[e] = out
        return out

    def expand(self, q):
        """Substitute ``N_ij -> u_i v_j - u_j v_i`` into a bracket polynomial."""
        acc = MPoly(UV, {})
        for e, c in q.terms.items():
            acc = acc + self.expand_monomial(e).scale(c)
        return acc

    def rewrite(self, minor):
        """Bracket form of ``minor`` in normal form modulo the syzygy."""
        if minor.is_zero():
            return MPoly(N_VARS, {})
        bd = bidegree_check(minor, (UV.names[:4], UV.names[4:]))
        if bd != (self.degree, self.degree):
            raise NotInInvariantRing(f"bidegree {bd} is not ({self.degree}, {self.degree})")
        rhs = [minor.terms.get(m, 0) for m in self.pivot_rows]
        terms = {}
        for e, row in zip(self.standard, self.inverse):
            acc = 0
            for a, b in zip(row, rhs):
                if a and b:
                    acc = b * a + acc
            if acc:
                terms[e] = acc
        q = MPoly(N_VARS, terms)
        if self.expand(q) != minor:
            raise NotInInvariantRing("minor is not a polynomial in the brackets")
        return q


def _invert(square):
    n = len(square)
    aug = [list(row) + [Fraction(int(r == c)) for c in range(n)] for r, row in enumerate(square)]
    rref, pivots = polymat.row_reduce(aug, n)
    if pivots != list(range(n)):
        raise NotInInvariantRing("pivot block of the expansion matrix is singular")
    return [row[n:] for row in rref]


_REWRITER = None


def default_rewriter():
    global _REWRITER
    if _REWRITER is None:
        _REWRITER = BracketRewriter()
    return _REWRITER


def rewrite_in_N(minor, rewriter=None):
    return (rewriter or default_rewriter()).rewrite(minor)


def orthogonality_map(q):
    """Rename brackets to Pluecker coordinates with the fixed signs."""
    g = dict(zip(M_VARS.names, M_VARS.gens()))
    assignment = {n: g[m] * s for n, (s, m) in ORTHOGONALITY.items()}
    return q.substitute(assignment, target=M_VARS)


# ---------------------------------------------------------------------------
# the full system


@dataclass
class LineSchemeSystem:
    quartics: list
    pluecker: MPoly
    minors: list = field(repr=False, default_factory=list)
    brackets: list = field(repr=False, default_factory=list)
    row_subsets: list = field(repr=False, default_factory=list)

    def polynomials(self):
        """The Pluecker quadric followed by the quartics."""
        return [self.pluecker] + list(self.quartics)


def line_scheme_system(alg, kd=None):
    from .ncalg import koszul_dual

    kd = kd or koszul_dual(alg)
    matrix = build_doubled_matrix(kd)
    minors = doubled_minors(matrix)
    log.info("computed %d maximal minors of the doubled matrix", len(minors))
    rw = default_rewriter()
    brackets = [rw.rewrite(m) for _, m in minors]
    quartics = [orthogonality_map(q) for q in brackets]
    return LineSchemeSystem(
        quartics=quartics,
        pluecker=pluecker_quadric(),
        minors=[m for _, m in minors],
        brackets=brackets,
        row_subsets=[r for r, _ in minors],
    )


# ---------------------------------------------------------------------------
# golden comparison


def canonical_form(p, modulus=(), order=GREVLEX):
    """Normal form modulo ``modulus`` made monic, or None for zero."""
    if modulus:
        p = normal_form(p, list(modulus), order)
    if p.is_zero():
        return None
    return p.monic(order)


def compare_up_to_scalar(computed, golden, modulus=(), order=GREVLEX):
    """Multiset comparison of two polynomial lists up to scalars and modulo ``modulus``."""
    ck = [canonical_form(p, modulus, order) for p in computed]
    gk = [canonical_form(p, modulus, order) for p in golden]
    c_count = Counter(ck)
    g_count = Counter(gk)
    missing = g_count - c_count
    extra = c_count - g_count
    unmatched_golden = [k for k, p in enumerate(gk) if p in missing]
    unmatched_computed = [k for k, p in enumerate(ck) if p in extra]
    duplicates = sorted({str(p) for p, n in c_count.items() if n > 1 and p is not None})
    return {
        "match": not missing and not extra,
        "computed": len(computed),
        "golden": len(golden),
        "zero_computed": c_count.get(None, 0),
        "unmatched_computed": unmatched_computed,
        "unmatched_golden": unmatched_golden,
        "duplicates": duplicates,
    }


def set_equal_up_to_scalar(computed, golden, order=GREVLEX):
    """Set comparison (duplicates ignored), no modulus."""
    return {canonical_form(p, (), order) for p in computed} == {
        canonical_form(p, (), order) for p in golden
    }


def pluecker_image(p, a, b):
    """Substitute ``M_ij -> a_i b_j - a_j b_i`` for two points ``a``, ``b`` of P^3."""
    values = {name: a[i] * b[j] - a[j] * b[i] for name, (i, j) in zip(M_VARS.names, PAIRS)}
    return p.evaluate(values)

