"""Quadratic algebras on finitely many generators.

A relation is stored as a map ``(i, j) -> coefficient`` standing for
``sum c * x_i x_j`` (0-based indices, left-to-right products).  The relation
space lives in ``V (x) V`` and everything here is finite-dimensional linear
algebra on it: the relation matrix, the Koszul dual, and the graded pieces
A_2 and A_3 of the quotient.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import polymat
from .errors import NotOnPluecker, NotQuadratic, ParseError, RankDeficient
from .multipoly import MPoly, VarSet
from .parse import evaluate as _eval_ast
from .parse import parse as _parse_ast
from .scalars import ALPHA, TowerElem, clear_denominators

PLUECKER_INDEX = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PLUECKER_NAMES = ("M12", "M13", "M14", "M23", "M24", "M34")


# ---------------------------------------------------------------------------
# noncommutative expressions, used only while parsing


class _NC:
    """Noncommutative polynomial: word (tuple of generator indices) -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {w: c for w, c in terms.items() if c}

    @staticmethod
    def scalar(c):
        return _NC({(): c})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return _NC(out)

    def __neg__(self):
        return _NC({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return _NC(out)

    def __truediv__(self, other):
        if set(other.terms) - {()}:
            raise ParseError("division by a non-scalar expression")
        c = other.terms.get((), 0)
        if not c:
            raise ParseError("division by zero")
        return _NC({w: v / c for w, v in self.terms.items()})

    def __pow__(self, n):
        out = _NC.scalar(Fraction(1))
        for _ in range(n):
            out = out * self
        return out


def parse_relation(text, gens, symbolic_alpha=True):
    """Parse ``lhs = rhs`` (or a bare expression) into a quadratic relation dict."""
    if text.count("=") > 1:
        raise ParseError(f"more than one '=' in {text!r}")
    lhs, _, rhs = text.partition("=")
    index = {g: k for k, g in enumerate(gens)}

    def name(n):
        if n in index:
            return _NC({(index[n],): Fraction(1)})
        if n == "alpha":
            if not symbolic_alpha:
                raise ParseError("alpha used in a presentation over Q")
            return _NC.scalar(ALPHA)
        raise ParseError(f"unknown generator {n!r}")

    def number(k):
        return _NC.scalar(Fraction(k))

    expr = _eval_ast(_parse_ast(lhs), name, number)
    if rhs.strip():
        expr = expr - _eval_ast(_parse_ast(rhs), name, number)
    rel = {}
    for word, c in expr.terms.items():
        if len(word) != 2:
            raise NotQuadratic(f"term of degree {len(word)} in {text!r}")
        rel[word] = c
    if not rel:
        raise ParseError(f"relation {text!r} is identically zero")
    return rel


# ---------------------------------------------------------------------------
# presentations


@dataclass
class QuadAlgebra:
    gens: tuple
    relations: list
    field: str = "Q(alpha)"

    @property
    def n(self):
        return len(self.gens)

    def varset(self):
        return VarSet(self.gens)

    def coefficient_matrix(self):
        """Rows are relations, columns the n^2 words x_i x_j in lex order."""
        n = self.n
        return [[Fraction(0) + rel.get((i, j), 0) for i, j in product(range(n), repeat=2)]
                for rel in self.relations]

    def relation_text(self, rel):
        terms = []
        for (i, j), c in sorted(rel.items()):
            terms.append(f"({c})*{self.gens[i]}*{self.gens[j]}")
        return " + ".join(terms)

    def specialize(self, value):
        from .scalars import specialize_alpha

        rels = [{w: specialize_alpha(c, value) for w, c in r.items()} for r in self.relations]
        return QuadAlgebra(self.gens, [{w: c for w, c in r.items() if c} for r in rels], "Q")


def parse_presentation(text):
    """Read the line-oriented presentation format.

    ::

        gens: x1 x2 x3 x4
        field: Q(alpha)
        rel: x3*x1 + x1*x3 = 0

    Blank lines and ``#`` comments are ignored.
    """
    gens = None
    fld = "Q(alpha)"
    rel_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'key: value'")
        key = key.strip().lower()
        value = value.strip()
        if key == "gens":
            gens = tuple(value.replace(",", " ").split())
            if len(set(gens)) != len(gens) or not gens:
                raise ParseError(f"line {lineno}: bad generator list")
            if not all(re.fullmatch(r"[A-Za-z_]\w*", g) for g in gens):
                raise ParseError(f"line {lineno}: bad generator name")
        elif key == "field":
            if value not in ("Q", "Q(alpha)"):
                raise ParseError(f"line {lineno}: unsupported field {value!r}")
            fld = value
        elif key == "rel":
            rel_lines.append((lineno, value))
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if gens is None:
        raise ParseError("missing 'gens:' line")
    relations = []
    for lineno, value in rel_lines:
        try:
            relations.append(parse_relation(value, gens, fld == "Q(alpha)"))
        except (ParseError, NotQuadratic) as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
    return QuadAlgebra(gens, relations, fld)


def load_presentation(path):
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


# ---------------------------------------------------------------------------
# relation matrix and Koszul dual


def build_relation_matrix(alg, varset=None):
    """The matrix M with ``M x`` equal to the relations: ``M[r][j] = sum_i c_r(i,j) x_i``."""
    varset = varset or alg.varset()
    xs = varset.gens()
    n = alg.n
    m = []
    for rel in alg.relations:
        for (i, j), c in rel.items():
            if not (0 <= i < n and 0 <= j < n):
                raise NotQuadratic(f"word {(i, j)} outside the generators")
        row = []
        for j in range(n):
            entry = MPoly(varset, {})
            for i in range(n):
                c = rel.get((i, j))
                if c:
                    entry = entry + xs[i] * c
            row.append(entry)
        m.append(row)
    return m


def relation_rank(alg):
    return polymat.rank(alg.coefficient_matrix())


@dataclass
class KoszulDual:
    gens: tuple
    dual_relations: list
    matrix_hat: list = field(repr=False)

    def algebra(self):
        return QuadAlgebra(self.gens, self.dual_relations)


def pairing(f, r):
    """``<z_i z_j, x_k x_l> = delta_ik delta_jl`` extended bilinearly."""
    return sum((c * r[w] for w, c in f.items() if w in r), Fraction(0))


def transposed_pairing(f, r):
    return sum((c * r[(w[1], w[0])] for w, c in f.items() if (w[1], w[0]) in r), Fraction(0))


def koszul_dual(alg, dual_gens=None, transpose=False):
    """Echelon basis of the annihilator of the relation space.

    The basis is echelon with respect to the reversed word order: each vector
    has a single free word among the lex-earliest words, and pivots sit on
    the lex-latest ones.  Every vector is rescaled to have polynomial
    coefficients in alpha.

    With ``transpose`` the pairing ``<z_i z_j, x_k x_l> = delta_il delta_jk`` is
    used instead of the direct one.
    """
    n = alg.n
    coeffs = alg.coefficient_matrix()
    if polymat.rank(coeffs) != len(alg.relations):
        raise RankDeficient("relations are linearly dependent")
    words = list(product(range(n), repeat=2))
    if transpose:
        perm = [words.index((j, i)) for i, j in words]
        coeffs = [[row[p] for p in perm] for row in coeffs]
    rev = [[row[k] for k in reversed(range(n * n))] for row in coeffs]
    basis = [clear_denominators(vec[::-1]) for vec in polymat.null_space(rev, n * n)]
    dual = [{w: c for w, c in zip(words, vec) if c} for vec in basis]
    gens = tuple(dual_gens or (f"z{k + 1}" for k in range(n)))
    kd_alg = QuadAlgebra(gens, dual, alg.field)
    return KoszulDual(gens, dual, build_relation_matrix(kd_alg))


# ---------------------------------------------------------------------------
# graded pieces of the quotient


class GradedPiece:
    """The degree-``d`` component ``V^{(x)d} / (relation span)`` of a quadratic algebra.

    Words of length ``d`` are ordered lexicographically (x1x1 > x1x2 > ...).
    The relation span is row reduced with leftmost pivots; the non-pivot words
    form the basis, and :meth:`image` is the induced quotient map.
    """

    def __init__(self, alg, degree):
        self.alg = alg
        self.degree = degree
        n = alg.n
        self.words = list(product(range(n), repeat=degree))
        self.word_index = {w: k for k, w in enumerate(self.words)}
        spanning = []
        for rel in alg.relations:
            for left in range(degree - 1):
                right = degree - 2 - left
                for pre in product(range(n), repeat=left):
                    for post in product(range(n), repeat=right):
                        vec = [Fraction(0)] * len(self.words)
                        for (i, j), c in rel.items():
                            vec[self.word_index[pre + (i, j) + post]] += c
                        spanning.append(vec)
        if spanning:
            self.rref, self.pivots = polymat.row_reduce(spanning, len(self.words))
        else:
            self.rref, self.pivots = [], []
        pivset = set(self.pivots)
        self.basis = [w for k, w in enumerate(self.words) if k not in pivset]
        self._free = [k for k in range(len(self.words)) if k not in pivset]
        self._free_pos = {k: pos for pos, k in enumerate(self._free)}
        self._pivot_row = {p: r for r, p in enumerate(self.pivots)}

    @property
    def dim(self):
        return len(self.basis)

    def word_image(self, word):
        """Coordinates (over the basis) of the image of a single word."""
        k = self.word_index[tuple(word)]
        out = [Fraction(0)] * self.dim
        if k in self._free_pos:
            out[self._free_pos[k]] = Fraction(1)
            return out
        row = self.rref[self._pivot_row[k]]
        for f, pos in self._free_pos.items():
            if row[f]:
                out[pos] = -row[f]
        return out

    def image(self, element):
        """Image of ``{word: coefficient}``; coefficients may be tower elements."""
        out = [Fraction(0)] * self.dim
        for word, c in element.items():
            if not c:
                continue
            img = self.word_image(word)
            out = [o + c * v if v else o for o, v in zip(out, img)]
        return out

    def kernel_dim(self):
        return len(self.words) - self.dim


def degree_two_quotient(alg):
    return GradedPiece(alg, 2)


def degree_three_quotient(alg):
    return GradedPiece(alg, 3)


def normalizing_elements(delta, epsilon):
    """``x2^2, x3^2, x3 x4 + delta x4 x3, x1 x2 + epsilon x2 x1`` as word dicts."""
    return [
        {(1, 1): Fraction(1)},
        {(2, 2): Fraction(1)},
        {(2, 3): Fraction(1), (3, 2): delta},
        {(0, 1): Fraction(1), (1, 0): epsilon},
    ]


def _span_rank(vectors):
    if not vectors:
        return 0
    return polymat.rank_at_with_mode(vectors, {})[0]


def normalizing_report(alg, delta, epsilon):
    """Degree-3 check that each element is normal modulo its predecessors.

    For each ``n_k`` it tests ``V n_k`` and ``n_k V`` against each other inside
    ``A_3`` modulo the degree-3 part of the ideal generated by
    ``n_1 .. n_{k-1}``.  Returns one boolean per element.
    """
    a3 = degree_three_quotient(alg)
    n = alg.n
    elems = normalizing_elements(delta, epsilon)

    def left(x, el):
        return a3.image({(x,) + w: c for w, c in el.items()})

    def right(el, x):
        return a3.image({w + (x,): c for w, c in el.items()})

    results = []
    earlier = []
    for el in elems:
        lv = [left(x, el) for x in range(n)]
        rv = [right(el, x) for x in range(n)]
        base = _span_rank(earlier + rv)
        ok_left = _span_rank(earlier + rv + lv) == base
        base2 = _span_rank(earlier + lv)
        ok_right = _span_rank(earlier + lv + rv) == base2
        results.append(ok_left and ok_right)
        earlier += lv + rv
    return results


# ---------------------------------------------------------------------------
# right ideals attached to lines


def pluecker_value(p):
    m12, m13, m14, m23, m24, m34 = p
    return m12 * m34 - m13 * m24 + m14 * m23


def _unit(x):
    if isinstance(x, TowerElem):
        return bool(x.coords) and x.is_unit()
    return bool(x)


def pluecker_entry(p, i, j):
    """``M_ij`` with the antisymmetric extension ``M_ji = -M_ij`` and ``M_ii = 0``."""
    if i == j:
        return 0 * p[0]
    if i < j:
        return p[PLUECKER_INDEX.index((i, j))]
    return -p[PLUECKER_INDEX.index((j, i))]


def line_rows(p):
    """Two spanning points of the line with Pluecker coordinates ``p``.

    Uses the last coordinate ``M_ij`` that is a unit; the rows are
    ``(M_i1..M_i4)`` and ``(M_j1..M_j4)``.
    """
    from .errors import NoUnitPivot

    for k in range(5, -1, -1):
        if _unit(p[k]):
            i, j = PLUECKER_INDEX[k]
            break
    else:
        raise NoUnitPivot("no Pluecker coordinate is a unit")
    return [[pluecker_entry(p, i, c) for c in range(4)], [pluecker_entry(p, j, c) for c in range(4)]]


def annihilator_forms(p):
    """Basis of the linear forms vanishing on the line with coordinates ``p``."""
    return polymat.null_space(line_rows(p), 4)


@dataclass
class IntersectionResult:
    dim: int
    rank_j: int
    rank_k: int
    rank_union: int
    mode: str
    forms: list


def ideal_intersection(alg, delta, epsilon, p, a2=None):
    """``J_2`` and ``K_{p,2}`` inside ``A_2`` and the dimension of their intersection."""
    if pluecker_value(p):
        raise NotOnPluecker("point does not satisfy the Pluecker relation")
    a2 = a2 or degree_two_quotient(alg)
    forms = annihilator_forms(p)
    k_vecs = []
    for w in forms:
        for x in range(alg.n):
            k_vecs.append(a2.image({(l, x): w[l] for l in range(alg.n) if w[l]}))
    j_vecs = [a2.image(el) for el in normalizing_elements(delta, epsilon)]
    modes = set()
    ranks = []
    for vecs in (j_vecs, k_vecs, j_vecs + k_vecs):
        r, mode = polymat.rank_at_with_mode(vecs, {})
        ranks.append(r)
        modes.add(mode)
    rj, rk, ru = ranks
    mode = "exact" if modes == {"exact"} else "specialized"
    return IntersectionResult(rj + rk - ru, rj, rk, ru, mode, forms)


def ideal_intersection_dim(alg, delta, epsilon, p):
    return ideal_intersection(alg, delta, epsilon, p).dim


def contains_in_k(alg, p, element, a2=None):
    """True iff the image of ``element`` lies in ``K_{p,2}``."""
    a2 = a2 or degree_two_quotient(alg)
    forms = annihilator_forms(p)
    k_vecs = [a2.image({(l, x): w[l] for l in range(alg.n) if w[l]})
              for w in forms for x in range(alg.n)]
    v = a2.image(element)
    return _span_rank(k_vecs + [v]) == _span_rank(k_vecs)
