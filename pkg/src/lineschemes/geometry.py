"""The eight components of the line scheme, their intersections and lines.

Every component is a set of vanishing Pluecker coordinates plus at most two
extra forms, together with a parametrized family of lines in P^3 whose
Pluecker images sweep it out.  Intersections are solved exactly over a
tower of square roots over Q(alpha); the incidence counts follow the
construction "line through a vertex and a point on a plane curve" or the
two-pencil construction, depending on the component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import polymat
from .errors import (
    MembershipFailure,
    NoUnitPivot,
    NotOnPluecker,
    RankError,
    SolveFailure,
    UnknownPoint,
    VerificationFailure,
)
from .groebner import buchberger, hilbert_data
from .linescheme import M_VARS, PAIRS
from .multipoly import GREVLEX, LEX, MPoly, VarSet, normal_form, parse_poly
from .ncalg import line_rows, pluecker_value
from .pointscheme import SchemePoint, closed_form_points, pairwise_distinct, projectively_equal
from .scalars import ALPHA, TowerElem, specialize_alpha, standard_tower, tower_sqrt

SPECIAL_ALPHAS = (3, 5)

PENCIL_VARS = VarSet(("g1", "g0", "z1", "z0"))
JOIN_VARS = VarSet(("a1", "a2", "a3", "a4"))


# ---------------------------------------------------------------------------
# lines and Pluecker points


@dataclass(frozen=True)
class LineP3:
    """A line in P^3 spanned by two rows."""

    rows: tuple

    @classmethod
    def of(cls, rows):
        return cls(tuple(tuple(r) for r in rows))


def _is_unit(x):
    if isinstance(x, TowerElem):
        return bool(x.coords) and x.is_unit()
    return bool(x)


def _rows(line):
    return line.rows if isinstance(line, LineP3) else line


def pluecker_minors(rows):
    """The six 2x2 minors ``a_i b_j - a_j b_i`` without any rank check."""
    a, b = rows
    return tuple(a[i] * b[j] - a[j] * b[i] for i, j in PAIRS)


def pluecker_of_line(line):
    """Pluecker coordinates (M12, M13, M14, M23, M24, M34) of a rank-2 line.

    Rows may hold scalars, tower elements or polynomials; for polynomial rows
    the rank condition is that some minor is a nonzero polynomial.
    """
    coords = pluecker_minors(_rows(line))
    if isinstance(coords[0], MPoly):
        if all(c.is_zero() for c in coords):
            raise RankError("rows are proportional")
    elif not any(_is_unit(c) for c in coords):
        raise RankError("no 2x2 minor of the span is a unit")
    if pluecker_value(coords):
        raise VerificationFailure("Pluecker relation fails on computed minors", {"coords": [str(c) for c in coords]})
    return coords


def line_from_pluecker(p):
    """A spanning pair of rows for the line with Pluecker coordinates ``p``."""
    if all(not c for c in p):
        raise NotOnPluecker("the zero vector is not a point of P^5")
    value = pluecker_value(p)
    if value:
        raise NotOnPluecker(f"Pluecker relation evaluates to {value}")
    return LineP3.of(line_rows(p))


def contains_point(line, point):
    """True iff ``point`` lies on ``line`` (all 3x3 minors of the stack vanish)."""
    a, b = _rows(line)
    for cols in combinations(range(4), 3):
        m = [[r[c] for c in cols] for r in (a, b, point)]
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        if det:
            return False
    return True


def basis_point(k, ring=None):
    """``E_k`` (1-based) in P^5."""
    ring = ring or standard_tower()
    return tuple(ring.one() if j == k - 1 else ring.zero() for j in range(6))


# ---------------------------------------------------------------------------
# components


def _m(text):
    return parse_poly(text, M_VARS)


@dataclass
class ComponentSpec:
    """One component: vanishing coordinates, extra forms, and its line family.

    ``kind`` is ``"pencils"`` for lines ``V(x_A - g x_B, x_C - z x_D)`` with
    ``pencils = ((A, B), (C, D))``, or ``"join"`` for lines through the vertex
    ``e_vertex`` and a point supported on ``support``.
    """

    name: str
    zeros: tuple
    extra: list
    degree: int
    kind: str
    constraint: MPoly | None
    pencils: tuple = ()
    vertex: int | None = None
    support: tuple = ()

    @property
    def defining_polys(self):
        return [MPoly.var(M_VARS, n) for n in self.zeros] + list(self.extra)

    def family_rows(self):
        """The generic member of the line family as two rows of polynomials."""
        if self.kind == "pencils":
            g1, g0, z1, z0 = PENCIL_VARS.gens()
            zero = MPoly(PENCIL_VARS, {})
            first = [zero] * 4
            second = [zero] * 4
            (a, b), (c, d) = self.pencils
            first[a], first[b] = g1, g0
            second[c], second[d] = z1, z0
            return [first, second]
        gens = JOIN_VARS.gens()
        zero = MPoly(JOIN_VARS, {})
        vertex = [zero] * 4
        vertex[self.vertex] = MPoly.const(JOIN_VARS, 1)
        base = [gens[j] if j in self.support else zero for j in range(4)]
        return [vertex, base]

    def param_varset(self):
        return PENCIL_VARS if self.kind == "pencils" else JOIN_VARS


def _pencil(text):
    return parse_poly(text, PENCIL_VARS)


def _join(text):
    return parse_poly(text, JOIN_VARS)


def components():
    """The eight components in the order L1, L2, L3, L4, L5a, L5b, L6a, L6b."""
    return [
        ComponentSpec(
            "L1", ("M13", "M24"),
            [_m("M12*M34 + M14*M23"),
             _m("M12^2 + M14^2 + alpha*M23^2 - 2*M23*M34 + alpha*M34^2")],
            4, "pencils",
            _pencil("(g1^2 + alpha*g0^2)*(z1^2 + z0^2) + 2*g0^2*z1*z0"),
            pencils=((0, 2), (1, 3)),
        ),
        ComponentSpec(
            "L2", ("M14", "M23"),
            [_m("M12*M34 - M13*M24"), _m("M12^2 + 2*M24^2 + alpha*M34^2")],
            4, "pencils",
            _pencil("alpha*z1^2*g0^2 + g1^2*z0^2 + 2*g0^2*z0^2"),
            pencils=((0, 3), (2, 1)),
        ),
        ComponentSpec(
            "L3", ("M23", "M24", "M34"), [_m("M12^3 - M13^2*M14 + M12*M14^2")],
            3, "join", _join("a2^3 - a3^2*a4 + a2*a4^2"), vertex=0, support=(1, 2, 3),
        ),
        ComponentSpec(
            "L4", ("M12", "M14", "M24"),
            [_m("M13^2*M23 - alpha*M23^2*M34 + 2*M23*M34^2 - alpha*M34^3")],
            3, "join", _join("a1^2*a2 + alpha*a2^2*a4 + 2*a2*a4^2 + alpha*a4^3"),
            vertex=2, support=(0, 1, 3),
        ),
        ComponentSpec(
            "L5a", ("M12", "M13", "M23", "M34"), [], 1, "join", None, vertex=3, support=(0, 1),
        ),
        ComponentSpec(
            "L5b", ("M12", "M13", "M23"), [_m("M14^2 + 2*M24^2 + alpha*M34^2")],
            2, "join", _join("a1^2 + 2*a2^2 + alpha*a3^2"), vertex=3, support=(0, 1, 2),
        ),
        ComponentSpec(
            "L6a", ("M12", "M13", "M14", "M34"), [], 1, "join", None, vertex=1, support=(2, 3),
        ),
        ComponentSpec(
            "L6b", ("M13", "M14", "M34"), [_m("M12^2 + alpha*M23^2 + 2*M24^2")],
            2, "join", _join("a1^2 + alpha*a3^2 + 2*a4^2"), vertex=1, support=(0, 2, 3),
        ),
    ]


def component_by_name(name):
    for c in components():
        if c.name == name:
            return c
    raise KeyError(name)


def on_component(spec, coords):
    """Exact test that a Pluecker point lies on the component."""
    values = dict(zip(M_VARS.names, coords))
    return all(not p.evaluate(values) for p in spec.defining_polys)


# ---------------------------------------------------------------------------
# component verification


def _specialize_all(polys, value):
    return [p.specialize(value) for p in polys]


@dataclass
class ComponentCheck:
    name: str
    zero_substitution: bool = False
    specialized: dict = field(default_factory=dict)
    parametrization: bool = False
    degrees: dict = field(default_factory=dict)
    dimensions: dict = field(default_factory=dict)
    expected_degree: int = 0
    witness: str | None = None

    @property
    def ok(self):
        return (
            self.zero_substitution
            and self.parametrization
            and all(self.specialized.values())
            and all(d == self.expected_degree for d in self.degrees.values())
            and all(d == 1 for d in self.dimensions.values())
        )

    def as_dict(self):
        return {
            "name": self.name,
            "ok": self.ok,
            "zero_substitution": self.zero_substitution,
            "specialized_membership": {str(k): v for k, v in self.specialized.items()},
            "parametrization": self.parametrization,
            "degree": {str(k): v for k, v in self.degrees.items()},
            "dimension": {str(k): v for k, v in self.dimensions.items()},
            "expected_degree": self.expected_degree,
            "witness": self.witness,
        }


def zero_substitution_check(spec, polys):
    """Substitute the vanishing coordinates and reduce by a basis of the extra forms.

    Returns the first polynomial that survives, or None.
    """
    zero = {n: 0 for n in spec.zeros}
    extra = [p.substitute(zero, target=M_VARS) for p in spec.extra]
    basis = buchberger(extra, GREVLEX).basis if extra else []
    for k, p in enumerate(polys):
        q = p.substitute(zero, target=M_VARS)
        if basis:
            q = normal_form(q, basis, GREVLEX)
        if not q.is_zero():
            return k, q
    return None


def specialized_membership(spec, polys, value):
    """Reduce each system polynomial modulo a Groebner basis of the component at alpha = value."""
    gb = buchberger(_specialize_all(spec.defining_polys, value), GREVLEX)
    for k, p in enumerate(polys):
        r = normal_form(p.specialize(value), gb.basis, GREVLEX)
        if not r.is_zero():
            return gb, (k, r)
    return gb, None


def parametrization_check(spec, polys):
    """Push the generic family member into P^5 and reduce modulo its constraint.

    The constraint is a single polynomial, so division by it decides
    membership in the principal ideal it generates.
    """
    images = pluecker_minors(spec.family_rows())
    assignment = dict(zip(M_VARS.names, images))
    modulus = [spec.constraint] if spec.constraint is not None else []
    for k, p in enumerate(list(spec.defining_polys) + list(polys)):
        q = p.substitute(assignment, target=spec.param_varset())
        if modulus:
            q = normal_form(q, modulus, LEX)
        if not q.is_zero():
            return k, q
    return None


def verify_components(system_polys, values=SPECIAL_ALPHAS, raise_on_failure=False):
    """Membership, parametrization and degree checks for all eight components.

    ``system_polys`` is the full list (Pluecker quadric and quartics).
    """
    checks = []
    for spec in components():
        chk = ComponentCheck(spec.name, expected_degree=spec.degree)
        bad = zero_substitution_check(spec, system_polys)
        chk.zero_substitution = bad is None
        if bad is not None and chk.witness is None:
            chk.witness = f"system polynomial {bad[0]} leaves {bad[1]}"
        for v in values:
            gb, bad = specialized_membership(spec, system_polys, v)
            chk.specialized[v] = bad is None
            if bad is not None and chk.witness is None:
                chk.witness = f"alpha={v}: system polynomial {bad[0]} leaves {bad[1]}"
            hd = hilbert_data(gb, len(M_VARS))
            chk.degrees[v] = hd.degree
            chk.dimensions[v] = hd.dimension
        bad = parametrization_check(spec, system_polys)
        chk.parametrization = bad is None
        if bad is not None and chk.witness is None:
            chk.witness = f"parametrization leaves {bad[1]} on polynomial {bad[0]}"
        if raise_on_failure and not chk.ok:
            raise MembershipFailure(f"component {spec.name} failed", chk.witness)
        checks.append(chk)
    return ComponentReport(checks)


@dataclass
class ComponentReport:
    checks: list

    @property
    def total_degree(self):
        return {v: sum(c.degrees.get(v, 0) for c in self.checks) for v in SPECIAL_ALPHAS}

    @property
    def ok(self):
        return all(c.ok for c in self.checks) and all(d == 20 for d in self.total_degree.values())

    def as_dict(self):
        return {
            "ok": self.ok,
            "components": [c.as_dict() for c in self.checks],
            "total_degree": {str(k): v for k, v in self.total_degree.items()},
        }


# ---------------------------------------------------------------------------
# exact solving of zero-dimensional systems


def _univariate(g, name, solved):
    """Coefficients (low to high) of ``g`` in ``name`` after substituting ``solved``."""
    names = g.varset.names
    k = g.varset.index[name]
    coeffs = {}
    for e, c in g.terms.items():
        term = c
        for j, m in enumerate(e):
            if m and j != k:
                term = solved[names[j]] ** m * term
        coeffs[e[k]] = coeffs.get(e[k], 0) + term
    top = max(coeffs) if coeffs else 0
    out = [coeffs.get(j, 0) for j in range(top + 1)]
    while out and not out[-1]:
        out.pop()
    return out


def _roots(coeffs, ring):
    """All roots of a univariate polynomial of degree <= 2 (after removing x^k)."""
    roots = []
    low = 0
    while low < len(coeffs) and not coeffs[low]:
        low += 1
    if low:
        roots.append(ring.zero())
    c = [ring.coerce(x) for x in coeffs[low:]]
    if len(c) <= 1:
        return roots
    if not _is_unit(c[-1]):
        raise SolveFailure("leading coefficient is not a unit")
    if len(c) == 2:
        roots.append(-c[0] / c[1])
    elif len(c) == 3:
        disc = c[1] * c[1] - 4 * c[0] * c[2]
        s = tower_sqrt(disc)
        if s is None:
            raise SolveFailure(f"no square root of {disc} in the tower")
        inv = (2 * c[2]).inverse()
        roots.extend([(-c[1] + s) * inv, (-c[1] - s) * inv])
    else:
        raise SolveFailure(f"univariate factor of degree {len(c) - 1} > 2")
    out = []
    for r in roots:
        if not any(r == q for q in out):
            out.append(r)
    return out


def solve_affine(polys, free, ring):
    """All common zeros in the tower of ``polys`` in the variables ``free``.

    A lex Groebner basis over the coefficient field gives a triangular system;
    solving from the last variable up, every candidate value is a root of some
    basis element, so no solution is missed, and every kept value is checked
    against all basis elements it can be substituted into.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise SolveFailure("empty system is not zero-dimensional")
    gb = buchberger(polys, LEX).basis
    if len(gb) == 1 and gb[0].total_degree() == 0:
        return []
    solutions = [{}]
    done = set()
    for name in reversed(free):
        relevant = [g for g in gb if set(g.variables()) <= done | {name}]
        with_name = [g for g in relevant if name in g.variables()]
        new = []
        for sol in solutions:
            cands = [u for u in (_univariate(g, name, sol) for g in with_name) if len(u) > 1]
            cands = [u for u in cands if _is_unit(u[-1])]
            if not cands:
                raise SolveFailure(f"{name} is not determined: system is not zero-dimensional")
            best = min(cands, key=len)
            for r in _roots(best, ring):
                trial = dict(sol)
                trial[name] = r
                if all(not g.evaluate(trial) for g in relevant):
                    new.append(trial)
        solutions = new
        done.add(name)
    return [tuple(s[n] for n in free) for s in solutions]


def solve_projective(polys, varset, ring=None):
    """Points of the projective zero set, one affine cell at a time."""
    ring = ring or standard_tower()
    names = varset.names
    points = []
    for k in range(len(names)):
        assignment = {names[j]: 0 for j in range(k)}
        assignment[names[k]] = 1
        cell = [p.substitute(assignment, target=varset) for p in polys]
        free = names[k + 1:]
        cell = [p for p in cell if not p.is_zero()]
        if any(p.total_degree() == 0 for p in cell):
            continue
        if not free:
            points.append(tuple([ring.zero()] * k + [ring.one()]))
            continue
        for sol in solve_affine(cell, free, ring):
            points.append(tuple([ring.zero()] * k + [ring.one()] + [ring.coerce(x) for x in sol]))
    return points


# ---------------------------------------------------------------------------
# pairwise intersections


def expected_intersections(ring=None):
    """The published table: nonempty pairwise intersections of the components."""
    ring = ring or standard_tower()
    i, a, b, d = (ring.gen(n) for n in "iabd")
    one, zero = ring.one(), ring.zero()

    def pt(*xs):
        return tuple(ring.coerce(x) for x in xs)

    e = {k: basis_point(k, ring) for k in range(1, 7)}
    pm = (1, -1)
    return {
        ("L2", "L3"): [e[2]],
        ("L2", "L4"): [e[2]],
        ("L3", "L4"): [e[2]],
        ("L3", "L5a"): [e[3]],
        ("L4", "L6a"): [e[4]],
        ("L5a", "L6a"): [e[5]],
        ("L1", "L3"): [pt(one, zero, s * i, zero, zero, zero) for s in pm],
        ("L1", "L4"): [pt(zero, zero, zero, ALPHA, zero, 1 + s * d) for s in pm],
        ("L1", "L5b"): [pt(zero, zero, s * i * a, zero, zero, one) for s in pm],
        ("L1", "L6b"): [pt(s * i * a, zero, zero, one, zero, zero) for s in pm],
        ("L2", "L5b"): [pt(zero, zero, zero, zero, a, s * i * b) for s in pm],
        ("L2", "L6b"): [pt(b, zero, zero, zero, s * i, zero) for s in pm],
        ("L5a", "L5b"): [pt(zero, zero, b, zero, s * i, zero) for s in pm],
        ("L6a", "L6b"): [pt(zero, zero, zero, b, s * i * a, zero) for s in pm],
    }


def pairwise_intersections(ring=None):
    """Solve every pair of components; keys are ordered name pairs."""
    ring = ring or standard_tower()
    comps = components()
    out = {}
    for c1, c2 in combinations(comps, 2):
        pts = solve_projective(c1.defining_polys + c2.defining_polys, M_VARS, ring)
        out[(c1.name, c2.name)] = pts
    return out


def same_point_set(xs, ys):
    return (
        all(any(projectively_equal(x, y) for y in ys) for x in xs)
        and all(any(projectively_equal(x, y) for x in xs) for y in ys)
    )


def distinct_points(points):
    out = []
    for p in points:
        if not any(projectively_equal(p, q) for q in out):
            out.append(p)
    return out


@dataclass
class IntersectionReport:
    computed: dict
    expected: dict
    mismatches: list
    listed_points_verified: bool
    distinct: int
    undistinguished: list

    @property
    def ok(self):
        return (
            not self.mismatches
            and self.listed_points_verified
            and self.distinct == 20
            and not self.undistinguished
        )

    @property
    def one_point_pairs(self):
        return sorted(k for k, v in self.computed.items() if len(v) == 1)

    @property
    def two_point_pairs(self):
        return sorted(k for k, v in self.computed.items() if len(v) == 2)

    def as_dict(self):
        return {
            "ok": self.ok,
            "pairs": {
                f"{a}&{b}": [[str(c) for c in p] for p in pts]
                for (a, b), pts in sorted(self.computed.items())
            },
            "one_point_pairs": [f"{a}&{b}" for a, b in self.one_point_pairs],
            "two_point_pairs": [f"{a}&{b}" for a, b in self.two_point_pairs],
            "mismatches": [f"{a}&{b}" for a, b in self.mismatches],
            "listed_points_verified": self.listed_points_verified,
            "distinct_points": self.distinct,
            "undistinguished_pairs": self.undistinguished,
        }


def intersection_report(ring=None, values=SPECIAL_ALPHAS):
    ring = ring or standard_tower()
    computed = pairwise_intersections(ring)
    expected = expected_intersections(ring)
    mismatches = [k for k, pts in computed.items() if not same_point_set(pts, expected.get(k, []))]
    by_name = {c.name: c for c in components()}
    verified = all(
        on_component(by_name[a], p) and on_component(by_name[b], p)
        for (a, b), pts in expected.items()
        for p in pts
    )
    union = distinct_points([p for pts in computed.values() for p in pts])
    return IntersectionReport(
        computed, expected, mismatches, verified, len(union), pairwise_distinct(union, values)
    )


# ---------------------------------------------------------------------------
# lines through the points of the point scheme


@dataclass
class IncidenceReport:
    point: SchemePoint
    lines: list  # (pluecker coords, rows, component labels)
    infinite: bool = False
    infinite_families: list = field(default_factory=list)

    @property
    def count(self):
        return None if self.infinite else len(self.lines)

    def labels(self):
        return [tuple(labels) for _, _, labels in self.lines]

    def as_dict(self):
        return {
            "point": self.point.label,
            "infinite": self.infinite,
            "infinite_families": self.infinite_families,
            "count": self.count,
            "lines": [
                {"pluecker": [str(c) for c in p], "components": list(labels)}
                for p, _, labels in self.lines
            ],
        }


def _vertex_free_dimension(spec):
    """Projective dimension of the lines through the vertex: support size - 1 - #constraints."""
    return len(spec.support) - 1 - (1 if spec.constraint is not None else 0)


def _join_line(spec, p, ring):
    """The line of a join family through ``p``, or None; ``"vertex"`` if p is the vertex."""
    r = list(p)
    r[spec.vertex] = ring.zero()
    if all(not x for x in r):
        return "vertex"
    if any(r[j] for j in range(4) if j not in spec.support):
        return None
    if spec.constraint is not None and spec.constraint.evaluate(list(r)):
        return None
    vertex = [ring.one() if j == spec.vertex else ring.zero() for j in range(4)]
    return [vertex, r]


def _binary_roots(coeffs, ring):
    """Roots ``(X, Y)`` in P^1 of ``sum coeffs[k] X^(n-k) Y^k``; None if the form is zero."""
    coeffs = [ring.coerce(c) for c in coeffs]
    if all(not c for c in coeffs):
        return None
    roots = []
    if not coeffs[0]:
        roots.append((ring.one(), ring.zero()))
        while not coeffs[0]:
            coeffs = coeffs[1:]
    roots.extend((x, ring.one()) for x in _roots(list(reversed(coeffs)), ring))
    return roots


def _pencil_lines(spec, p, ring):
    """Lines of a two-pencil family through ``p`` (a list, or ``"infinite"``)."""
    (a, b), (c, d) = spec.pencils
    first = (p[a], p[b])
    second = (p[c], p[d])
    g = spec.constraint
    names = PENCIL_VARS.names
    fixed = []
    for block, pair in ((names[:2], first), (names[2:], second)):
        fixed.append(None if all(not x for x in pair) else pair)
    if fixed[0] is None and fixed[1] is None:
        return "infinite"
    choices = []
    if None in fixed:
        k = fixed.index(None)
        known = fixed[1 - k]
        block = names[2 * k:2 * k + 2]
        other = names[2 * (1 - k):2 * (1 - k) + 2]
        # binary form in the undetermined block after fixing the other block
        deg = max(sum(e[PENCIL_VARS.index[n]] for n in block) for e in g.terms)
        coeffs = [0] * (deg + 1)
        for e, cf in g.terms.items():
            val = cf
            for n, x in zip(other, known):
                m = e[PENCIL_VARS.index[n]]
                if m:
                    val = x ** m * val
            coeffs[e[PENCIL_VARS.index[block[1]]]] = coeffs[e[PENCIL_VARS.index[block[1]]]] + val
        roots = _binary_roots(coeffs, ring)
        if roots is None:
            return "infinite"
        for pair in roots:
            choices.append((pair, known) if k == 0 else (known, pair))
    else:
        values = dict(zip(names, first + second))
        if g.evaluate(values):
            return []
        choices.append((first, second))
    lines = []
    zero = ring.zero()
    for (g1, g0), (z1, z0) in choices:
        r1 = [zero] * 4
        r2 = [zero] * 4
        r1[a], r1[b] = ring.coerce(g1), ring.coerce(g0)
        r2[c], r2[d] = ring.coerce(z1), ring.coerce(z0)
        lines.append([r1, r2])
    return lines


def _known_point(p, ring):
    for q in closed_form_points(ring):
        if projectively_equal(tuple(ring.coerce(x) for x in p.coords), q.coords):
            return q
    return None


def lines_through_point(p, ring=None, system_polys=None):
    """The lines of the line scheme that pass through a point of the point scheme."""
    ring = ring or standard_tower()
    known = _known_point(p, ring)
    if known is None:
        raise UnknownPoint(f"{getattr(p, 'label', p)} is not one of the twenty points")
    coords = tuple(ring.coerce(x) for x in p.coords)
    comps = components()
    report = IncidenceReport(p, [])
    found = []
    for spec in comps:
        if spec.kind == "join":
            line = _join_line(spec, coords, ring)
            if line == "vertex":
                if _vertex_free_dimension(spec) >= 1:
                    report.infinite = True
                    report.infinite_families.append(spec.name)
                continue
            lines = [] if line is None else [line]
        else:
            lines = _pencil_lines(spec, coords, ring)
            if lines == "infinite":
                report.infinite = True
                report.infinite_families.append(spec.name)
                continue
        for rows in lines:
            pl = pluecker_of_line(rows)
            if not contains_point(rows, coords):
                raise VerificationFailure(f"constructed {spec.name} line misses {p.label}", {})
            if not any(projectively_equal(pl, q) for q, _ in found):
                found.append((pl, rows))
    if report.infinite:
        return report
    for pl, rows in found:
        labels = [c.name for c in comps if on_component(c, pl)]
        if system_polys is not None:
            values = dict(zip(M_VARS.names, pl))
            for k, f in enumerate(system_polys):
                if f.evaluate(values):
                    raise VerificationFailure(
                        f"line through {p.label} does not kill system polynomial {k}", {"line": [str(c) for c in pl]}
                    )
        report.lines.append((pl, rows, labels))
    return report


def incidence_summary(points=None, ring=None, system_polys=None, values=SPECIAL_ALPHAS):
    ring = ring or standard_tower()
    points = points or closed_form_points(ring)
    reports = [lines_through_point(p, ring, system_polys) for p in points]
    distinct_ok = all(
        r.infinite or not pairwise_distinct([pl for pl, _, _ in r.lines], values) for r in reports
    )
    return reports, distinct_ok


# ---------------------------------------------------------------------------
# Jacobian checks


J1_VARS = VarSet(("M12", "M14", "M23", "M34"))
J2_VARS = VarSet(("M12", "M13", "M24", "M34"))
H_VARS = VarSet(("M12", "M13", "M14"))
W_VARS = VarSet(("M13", "M23", "M34"))


def jacobian(polys, varset):
    return [[f.diff(n) for n in varset.names] for f in polys]


def singular_locus_ideal(polys, varset):
    """The forms together with the maximal minors of their Jacobian."""
    jac = jacobian(polys, varset)
    minors = [m for _, _, m in polymat.enumerate_minors(jac, len(polys))]
    return list(polys) + [m for m in minors if not m.is_zero()]


def projectively_empty(polys, value=None):
    """True iff the projective zero set is empty (Hilbert dimension -1)."""
    if value is not None:
        polys = _specialize_all(polys, value)
    gb = buchberger(polys, GREVLEX)
    return hilbert_data(gb, len(polys[0].varset)).dimension == -1


def _sample_l1_points(value, count):
    """Points of V(f1, g1) at alpha = value from the pencil parametrization.

    Sweeps zeta = 1, 2, ... and solves gamma^2 = -alpha - 2 zeta / (zeta^2 + 1).
    """
    from .scalars import TowerRing

    value = Fraction(value)
    out = []
    zeta = Fraction(1)
    while len(out) < count:
        sq = -value - 2 * zeta / (zeta * zeta + 1)
        ring = TowerRing("Q")
        root = tower_sqrt(ring.const(sq))
        if root is None:
            ring = ring.adjoin_sqrt(sq, "s")
            root = ring.gen("s")
        for sign in (1, -1):
            gamma = root * sign
            # (M12, M14, M23, M34) of V(x1 - gamma x3, x2 - zeta x4)
            out.append((gamma * zeta, gamma, ring.const(-zeta), ring.one()))
        zeta += 1
    return out[:count]


def _rank_of(matrix):
    """Rank of a small scalar matrix: size of the largest minor that is a unit."""
    rows, cols = len(matrix), len(matrix[0])
    for size in range(min(rows, cols), 0, -1):
        for r in combinations(range(rows), size):
            for c in combinations(range(cols), size):
                sub = [[matrix[i][j] for j in c] for i in r]
                if _is_unit(_small_det(sub)):
                    return size
    return 0


def _small_det(m):
    if len(m) == 1:
        return m[0][0]
    acc = 0
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _small_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def gram_determinant(q, names):
    """Determinant of the symmetric matrix of a quadratic form in ``names``."""
    gram = [[q.diff(x).diff(y).evaluate({n: 0 for n in q.varset.names}) / 2 for y in names] for x in names]
    return _small_det(gram)


@dataclass
class JacobianReport:
    j1_samples: int
    j1_sample_ranks: list
    j1_singular_empty: dict
    j2_singular_points: list
    j2_rank_at_eps2: int
    j2_unique: bool
    j2_specialized_unique: dict
    h_nonsingular: dict
    w_nonsingular: dict
    gram: dict

    @property
    def ok(self):
        return (
            self.j1_samples >= 20
            and all(r == 2 for r in self.j1_sample_ranks)
            and all(self.j1_singular_empty.values())
            and self.j2_unique
            and self.j2_rank_at_eps2 == 1
            and all(self.j2_specialized_unique.values())
            and all(self.h_nonsingular.values())
            and all(self.w_nonsingular.values())
            and all(v == "2*alpha" for v in self.gram.values())
        )

    def as_dict(self):
        return {
            "ok": self.ok,
            "j1_samples": self.j1_samples,
            "j1_min_rank": min(self.j1_sample_ranks) if self.j1_sample_ranks else None,
            "j1_singular_locus_empty": self.j1_singular_empty,
            "j2_singular_points": [[str(c) for c in p] for p in self.j2_singular_points],
            "j2_rank_at_eps2": self.j2_rank_at_eps2,
            "j2_unique": self.j2_unique,
            "j2_specialized_unique": self.j2_specialized_unique,
            "h_nonsingular": self.h_nonsingular,
            "w_nonsingular": self.w_nonsingular,
            "gram_determinants": self.gram,
        }


def jacobian_checks(values=SPECIAL_ALPHAS, samples_per_alpha=10):
    f1 = parse_poly("M12*M34 + M14*M23", J1_VARS)
    g1 = parse_poly("M12^2 + M14^2 + alpha*M23^2 - 2*M23*M34 + alpha*M34^2", J1_VARS)
    jac1 = jacobian([f1, g1], J1_VARS)
    ranks = []
    for v in values:
        spec = [[e.specialize(v) for e in row] for row in jac1]
        for pt in _sample_l1_points(v, samples_per_alpha):
            vals = dict(zip(J1_VARS.names, pt))
            if f1.specialize(v).evaluate(vals) or g1.specialize(v).evaluate(vals):
                raise VerificationFailure("sample point is not on V(f1, g1)", {"alpha": v})
            ranks.append(_rank_of([[e.evaluate(vals) for e in row] for row in spec]))
    sing1 = singular_locus_ideal([f1, g1], J1_VARS)
    j1_empty = {"symbolic": projectively_empty(sing1)}
    for v in values:
        j1_empty[str(v)] = projectively_empty(sing1, v)

    f2 = parse_poly("M12*M34 - M13*M24", J2_VARS)
    g2 = parse_poly("M12^2 + 2*M24^2 + alpha*M34^2", J2_VARS)
    sing2 = singular_locus_ideal([f2, g2], J2_VARS)
    ring = standard_tower()
    pts = solve_projective(sing2, J2_VARS, ring)
    eps2 = (0, 1, 0, 0)
    unique = len(pts) == 1 and projectively_equal(pts[0], tuple(ring.coerce(x) for x in eps2))
    spec_unique = {}
    for v in values:
        spts = solve_projective(_specialize_all(sing2, v), J2_VARS, ring.specialize(v))
        spec_unique[str(v)] = len(spts) == 1 and all(
            (not x) == (e == 0) for x, e in zip(spts[0], eps2)
        )
    at_eps = dict(zip(J2_VARS.names, eps2))
    rank_eps = polymat.rank([[e.evaluate(at_eps) for e in row] for row in jacobian([f2, g2], J2_VARS)])

    h = parse_poly("M12^3 - M13^2*M14 + M12*M14^2", H_VARS)
    w = parse_poly("M13^2*M23 - alpha*M23^2*M34 + 2*M23*M34^2 - alpha*M34^3", W_VARS)
    h_ok = {"symbolic": projectively_empty(singular_locus_ideal([h], H_VARS))}
    w_ok = {"symbolic": projectively_empty(singular_locus_ideal([w], W_VARS))}
    for v in values:
        h_ok[str(v)] = projectively_empty(singular_locus_ideal([h], H_VARS), v)
        w_ok[str(v)] = projectively_empty(singular_locus_ideal([w], W_VARS), v)

    gram = {}
    for label, text, names in (
        ("M14^2 + 2*M24^2 + alpha*M34^2", "M14^2 + 2*M24^2 + alpha*M34^2", ("M14", "M24", "M34")),
        ("M12^2 + alpha*M23^2 + 2*M24^2", "M12^2 + alpha*M23^2 + 2*M24^2", ("M12", "M23", "M24")),
    ):
        det = gram_determinant(parse_poly(text, M_VARS), names)
        gram[label] = "2*alpha" if det == 2 * ALPHA else str(det)
    return JacobianReport(
        len(ranks), ranks, j1_empty, pts, rank_eps, unique, spec_unique, h_ok, w_ok, gram
    )


# ---------------------------------------------------------------------------
# the rational parametrization of the localized L2 curve


XZ_VARS = VarSet(("x", "z"))
T_VARS = VarSet(("t",))


@dataclass
class BirationalReport:
    chi_after_delta: bool
    delta_after_chi: bool
    delta_lands_on_curve: bool
    denominators_nonzero: bool
    sample_defined: bool

    @property
    def ok(self):
        return all(
            (self.chi_after_delta, self.delta_after_chi, self.delta_lands_on_curve,
             self.denominators_nonzero, self.sample_defined)
        )

    def as_dict(self):
        return {
            "ok": self.ok,
            "chi_after_delta": self.chi_after_delta,
            "delta_after_chi": self.delta_after_chi,
            "delta_lands_on_curve": self.delta_lands_on_curve,
            "denominators_nonzero": self.denominators_nonzero,
            "sample_defined": self.sample_defined,
        }


def _const(varset, c):
    return MPoly.const(varset, c)


def delta_map(ring):
    """``delta(t)`` as numerator/denominator pairs over Q(alpha)<i, a, b>[t]."""
    i, a, b = (ring.gen(n) for n in "iab")
    t = MPoly.var(T_VARS, "t")
    one = _const(T_VARS, 1)
    x = (_const(T_VARS, a) * (one - t * t), _const(T_VARS, 2 * b) * t)
    z = (one - t * t, _const(T_VARS, i * b) * (one + t * t))
    return x, z


def chi_map(ring):
    """``chi(x, z) = -x (b z + i) / (a z)`` as a numerator/denominator pair."""
    i, a, b = (ring.gen(n) for n in "iab")
    x = MPoly.var(XZ_VARS, "x")
    z = MPoly.var(XZ_VARS, "z")
    num = -(x * (_const(XZ_VARS, b) * z + _const(XZ_VARS, i)))
    den = _const(XZ_VARS, a) * z
    return num, den


def curve_relation():
    return parse_poly("x^2 + 2*x^2*z^2 + alpha*z^2", XZ_VARS)


def birational_check(ring=None, sample_t=2, sample_alpha=3):
    ring = ring or standard_tower(extra=False)
    i, a, b = (ring.gen(n) for n in "iab")
    (xn, xd), (zn, zd) = delta_map(ring)
    t = MPoly.var(T_VARS, "t")

    # chi(delta(t)) = -x (b z + i) / (a z) with x = xn/xd, z = zn/zd
    num = -(xn * (_const(T_VARS, b) * zn + _const(T_VARS, i) * zd))
    den = xd * _const(T_VARS, a) * zn
    chi_delta = (num - t * den).is_zero()

    # delta lands on the curve: clear denominators xd^2 zd^2
    on_curve = (
        xn * xn * zd * zd + 2 * xn * xn * zn * zn + _const(T_VARS, ALPHA) * zn * zn * xd * xd
    ).is_zero()

    # delta(chi(x, z)) modulo the curve
    cn, cd = chi_map(ring)
    curve = [curve_relation()]
    two_b = _const(XZ_VARS, 2 * b)
    ib = _const(XZ_VARS, i * b)
    aa = _const(XZ_VARS, a)
    x = MPoly.var(XZ_VARS, "x")
    z = MPoly.var(XZ_VARS, "z")
    diff_sq = cd * cd - cn * cn
    sum_sq = cd * cd + cn * cn
    x_ok = normal_form(aa * diff_sq - x * two_b * cn * cd, curve, LEX).is_zero()
    z_ok = normal_form(diff_sq - z * ib * sum_sq, curve, LEX).is_zero()
    dens = [two_b * cn * cd, ib * sum_sq, cd]
    dens_ok = all(not normal_form(dn, curve, LEX).is_zero() for dn in dens) and not den.is_zero()

    # the sample point t = 2 at alpha = 3
    sample_ok = True
    try:
        tv = Fraction(sample_t)
        if tv * (tv * tv + 1) == 0:
            sample_ok = False
        else:
            xs = xn.evaluate([tv]) / xd.evaluate([tv])
            zs = zn.evaluate([tv]) / zd.evaluate([tv])
            xs = specialize_alpha(xs, sample_alpha)
            zs = specialize_alpha(zs, sample_alpha)
            sample_ok = not (xs * xs + 2 * xs * xs * zs * zs + sample_alpha * zs * zs)
    except ZeroDivisionError:
        sample_ok = False
    return BirationalReport(chi_delta, x_ok and z_ok, on_curve, dens_ok, sample_ok)


__all__ = [
    "LineP3",
    "ComponentSpec",
    "IncidenceReport",
    "pluecker_of_line",
    "line_from_pluecker",
    "components",
    "verify_components",
    "pairwise_intersections",
    "intersection_report",
    "lines_through_point",
    "jacobian_checks",
    "birational_check",
    "NoUnitPivot",
]


# ---------------------------------------------------------------------------
# right ideals J and K_p in degree two


@dataclass
class IdealIntersectionReport:
    delta: object
    epsilon: object
    dims: list  # (point, dim, mode)
    normalizing: list
    spanning: dict

    @property
    def ok(self):
        return all(d == 2 for _, d, _ in self.dims) and all(self.spanning.values())

    def as_dict(self):
        return {
            "ok": self.ok,
            "delta": str(self.delta),
            "epsilon": str(self.epsilon),
            "dimensions": [{"point": [str(c) for c in p], "dim": d, "mode": m} for p, d, m in self.dims],
            "normalizing_in_degree_3": self.normalizing,
            "spanning_at_E4_pm_iaE1": self.spanning,
        }


def ideal_intersection_report(alg, delta=-1, epsilon=1, ring=None):
    """dim(J_2 and K_p) at the twenty intersection points, plus the explicit span
    ``x3 x4 - x4 x3, x2^2`` at ``E4 +- i a E1``."""
    from .ncalg import (
        _span_rank,
        contains_in_k,
        degree_two_quotient,
        ideal_intersection,
        normalizing_elements,
        normalizing_report,
    )

    ring = ring or standard_tower()
    a2 = degree_two_quotient(alg)
    pts = distinct_points([p for v in expected_intersections(ring).values() for p in v])
    dims = []
    for p in pts:
        res = ideal_intersection(alg, delta, epsilon, p, a2)
        dims.append((p, res.dim, res.mode))
    i, a = ring.gen("i"), ring.gen("a")
    commutator = {(2, 3): Fraction(1), (3, 2): Fraction(-1)}
    square = {(1, 1): Fraction(1)}
    j_vecs = [a2.image(el) for el in normalizing_elements(delta, epsilon)]
    spanning = {}
    for sign, tag in ((1, "+"), (-1, "-")):
        p = tuple(ring.coerce(x) for x in (sign * i * a, 0, 0, 1, 0, 0))
        res = ideal_intersection(alg, delta, epsilon, p, a2)
        vecs = [a2.image(commutator), a2.image(square)]
        in_j = all(_span_rank(j_vecs + [v]) == _span_rank(j_vecs) for v in vecs)
        in_k = all(contains_in_k(alg, p, el, a2) for el in (commutator, square))
        spanning[tag] = res.dim == 2 and in_j and in_k and _span_rank(vecs) == 2
    return IdealIntersectionReport(
        delta, epsilon, dims, normalizing_report(alg, delta, epsilon), spanning
    )
