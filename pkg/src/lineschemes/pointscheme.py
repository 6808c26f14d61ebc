"""The point scheme: maximal minors of the relation matrix and their zeros.

Points are given in closed form inside the tower ``Q(alpha)<i, a, b, d, e, f>``
and verified by exact substitution.  The automorphism is the unique solution
``q'`` of ``M(q) q' = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from . import polymat
from .errors import IndeterminateRank, NonUniqueImage, VerificationFailure
from .multipoly import GREVLEX
from .ncalg import build_relation_matrix
from .scalars import ALPHA, TowerElem, standard_tower


@dataclass(frozen=True)
class SchemePoint:
    coords: tuple
    family: str
    label: str

    def __str__(self):
        return f"{self.label}: ({', '.join(str(c) for c in self.coords)})"


def point_ideal(alg, order=GREVLEX):
    """The maximal minors of the relation matrix, monic and canonically sorted."""
    m = build_relation_matrix(alg)
    gens = []
    for _, _, minor in polymat.enumerate_minors(m, len(m[0])):
        gens.append(minor.monic(order) if minor else minor)
    return sorted(gens, key=lambda p: (p.total_degree(), p.to_str(order)))


def raw_minors(alg):
    m = build_relation_matrix(alg)
    return [value for _, _, value in polymat.enumerate_minors(m, len(m[0]))]


# ---------------------------------------------------------------------------
# closed-form points


def closed_form_points(ring=None):
    """The twenty points in families Z0..Z4 as tower coordinates."""
    ring = ring or standard_tower()
    i, a, b, d, e, f = (ring.gen(n) for n in "iabdef")
    zero, one = ring.zero(), ring.one()
    pts = []
    for k in range(4):
        coords = [zero] * 4
        coords[k] = one
        pts.append(SchemePoint(tuple(coords), "Z0", f"e{k + 1}"))
    signs = list(product((1, -1), repeat=2))

    def tag(s):
        return "".join("+" if x > 0 else "-" for x in s)

    for s1, s3 in signs:
        pts.append(SchemePoint((e * s1, one, b * s3, one), "Z1", f"Z1[{tag((s1, s3))}]"))
    for s1, s3 in signs:
        pts.append(SchemePoint((f * s1, -one, i * b * s3, one), "Z2", f"Z2[{tag((s1, s3))}]"))
    for s1, s2 in signs:
        pts.append(SchemePoint((i * b * s1, i * s2, zero, one), "Z3", f"Z3[{tag((s1, s2))}]"))
    inv_alpha = 1 / ALPHA
    for s2, s3 in signs:
        lam2 = (d * s2 - 1) * inv_alpha
        lam3 = lam2 * i * b * a * inv_alpha * s3
        pts.append(SchemePoint((zero, lam2, lam3, one), "Z4", f"Z4[{tag((s2, s3))}]"))
    return pts


def family_relations(point):
    """The defining equations of the point's family, evaluated at the point (all must be 0)."""
    x1, x2, x3, x4 = point.coords
    alpha = ALPHA
    if point.family == "Z1":
        return [x1 * x1 + 2 * (1 + alpha), x3 * x3 - 2, x2 - 1, x4 - 1]
    if point.family == "Z2":
        return [x1 * x1 + 2 * (1 - alpha), x3 * x3 + 2, x2 + 1, x4 - 1]
    if point.family == "Z3":
        return [x1 * x1 + 2, x2 * x2 + 1, x3, x4 - 1]
    if point.family == "Z4":
        return [x1, alpha * x2 * x2 + 2 * x2 + alpha, alpha * x3 * x3 + 2 * x2 * x2, x4 - 1]
    return []


def check_point(point, generators):
    """Raise :class:`VerificationFailure` unless every generator vanishes at the point."""
    values = dict(zip(("x1", "x2", "x3", "x4"), point.coords))
    for k, g in enumerate(generators):
        value = g.evaluate(values)
        if value:
            raise VerificationFailure(
                f"generator {k} does not vanish at {point.label}",
                {"generator": k, "point": point.label, "value": str(value)},
            )


def enumerate_points(alg, ring=None, generators=None):
    """The twenty closed-form points, each verified against the minors."""
    generators = generators if generators is not None else raw_minors(alg)
    pts = closed_form_points(ring)
    for p in pts:
        for k, rel in enumerate(family_relations(p)):
            if rel:
                raise VerificationFailure(
                    f"{p.label} violates its family equation {k}", {"point": p.label}
                )
        check_point(p, generators)
    return pts


# ---------------------------------------------------------------------------
# projective comparisons


def projectively_equal(p, q):
    """Exact test in the tower: all 2x2 minors of the pair vanish."""
    return all(not (p[i] * q[j] - p[j] * q[i]) for i, j in combinations(range(len(p)), 2))


def distinct_after_specialization(p, q, value):
    """True iff some 2x2 minor of the pair is a unit after alpha -> value.

    A unit is nonzero under every further specialization of the square roots,
    so this certifies the points differ.
    """
    for i, j in combinations(range(len(p)), 2):
        m = p[i] * q[j] - p[j] * q[i]
        if isinstance(m, TowerElem):
            m = m.specialize(value)
            if m.coords and m.is_unit():
                return True
        elif m:
            return True
    return False


def pairwise_distinct(points, values=(3, 5)):
    """Pairs that could not be certified distinct at every value (empty means all distinct)."""
    coords = [getattr(p, "coords", p) for p in points]
    bad = []
    for (k1, p), (k2, q) in combinations(enumerate(coords), 2):
        if not all(distinct_after_specialization(p, q, v) for v in values):
            bad.append((k1, k2))
    return bad


# ---------------------------------------------------------------------------
# the automorphism


def sigma_coords(alg, coords):
    m = build_relation_matrix(alg)
    values = dict(zip(alg.gens, coords))
    scalar = polymat.evaluate_matrix(m, values)
    try:
        r = polymat.rank(scalar)
        basis = polymat.null_space(scalar, len(coords))
    except IndeterminateRank as exc:
        raise NonUniqueImage(f"rank undecidable at this point: {exc}") from exc
    if r != len(coords) - 1:
        raise NonUniqueImage(f"relation matrix has rank {r} at this point, expected {len(coords) - 1}")
    return tuple(basis[0])


def sigma(alg, q):
    """The image of a scheme point under the automorphism."""
    coords = sigma_coords(alg, q.coords)
    return SchemePoint(coords, q.family, f"sigma({q.label})")


def sigma_expected(q):
    """The closed-form image: swaps e1<->e2, e3<->e4 and acts family-wise otherwise."""
    x1, x2, x3, x4 = q.coords
    if q.family == "Z0":
        swap = {"e1": 1, "e2": 0, "e3": 3, "e4": 2}
        coords = [x1 * 0] * 4
        coords[swap[q.label]] = x1 * 0 + 1
        return tuple(coords)
    if q.family in ("Z1", "Z2"):
        return (-x1, x2, x3, x4)
    if q.family == "Z3":
        return (-x1, -x2, x3, x4)
    if q.family == "Z4":
        return (x1, x2, x3, x2 * x2)
    raise ValueError(f"unknown family {q.family}")


def index_of(points, coords):
    for k, p in enumerate(points):
        if projectively_equal(p.coords, coords):
            return k
    return None


@dataclass
class SigmaReport:
    images: list
    matches_closed_form: list
    involution: bool
    orbits: list
    families_preserved: bool

    @property
    def orbit_count(self):
        return len(self.orbits)

    @property
    def ok(self):
        return (
            all(x is not None for x in self.images)
            and all(self.matches_closed_form)
            and self.involution
            and len(self.orbits) == len(self.images) // 2
            and all(len(o) == 2 for o in self.orbits)
            and self.families_preserved
        )


def sigma_report(alg, points):
    images = []
    closed = []
    for p in points:
        img = sigma_coords(alg, p.coords)
        images.append(index_of(points, img))
        closed.append(projectively_equal(img, sigma_expected(p)))
    involution = all(
        img is not None and images[img] == k for k, img in enumerate(images)
    )
    orbits = []
    seen = set()
    for k, img in enumerate(images):
        if k in seen or img is None:
            continue
        orbit = sorted({k, img})
        seen.update(orbit)
        orbits.append(orbit)
    families = all(
        img is not None and points[img].family == p.family for p, img in zip(points, images)
    )
    return SigmaReport(images, closed, involution, orbits, families)
