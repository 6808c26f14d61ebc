import random

import pytest

from lineschemes import pointscheme
from lineschemes.errors import NonUniqueImage, VerificationFailure
from lineschemes.linescheme import compare_up_to_scalar, set_equal_up_to_scalar
from lineschemes.multipoly import parse_poly
from lineschemes.ncalg import QuadAlgebra
from lineschemes.pointscheme import SchemePoint


@pytest.fixture(scope="module")
def minors(alg):
    return pointscheme.raw_minors(alg)


@pytest.fixture(scope="module")
def points(alg, minors):
    return pointscheme.enumerate_points(alg, generators=minors)


def test_contains_first_and_last_listed_minor(alg, point_golden):
    ideal = pointscheme.point_ideal(alg)
    vs = alg.varset()
    for text in ("x1*x3*(x1^2 + 2*x2^2 + alpha*x3^2)", point_golden[-1].to_str()):
        target = parse_poly(text, vs).monic()
        assert target in ideal


def test_minors_match_listed_set(minors, point_golden):
    assert len(minors) == 15
    assert set_equal_up_to_scalar(minors, point_golden)


def test_commutative_minors_vanish(commutative_alg):
    assert all(m.is_zero() for m in pointscheme.raw_minors(commutative_alg))


def test_twenty_points_by_family(points):
    families = [p.family for p in points]
    assert len(points) == 20
    assert {f: families.count(f) for f in set(families)} == {"Z0": 4, "Z1": 4, "Z2": 4, "Z3": 4, "Z4": 4}


def test_points_distinct_after_specializing(points):
    assert pointscheme.pairwise_distinct(points, (3,)) == []
    assert pointscheme.pairwise_distinct(points, (5,)) == []


def test_off_scheme_candidate_is_rejected(tower, minors):
    one, zero = tower.one(), tower.zero()
    bad = SchemePoint((one, one, zero, zero), "user", "bad")
    with pytest.raises(VerificationFailure):
        pointscheme.check_point(bad, minors)


def test_sigma_examples(alg, points):
    e = {p.label: p for p in points}
    assert pointscheme.projectively_equal(pointscheme.sigma(alg, e["e1"]).coords, e["e2"].coords)
    assert pointscheme.projectively_equal(pointscheme.sigma(alg, e["e3"]).coords, e["e4"].coords)
    z4 = [p for p in points if p.family == "Z4"][0]
    _, lam2, lam3, one = z4.coords
    image = pointscheme.sigma(alg, z4).coords
    assert pointscheme.projectively_equal(image, (lam2 * 0, lam2, lam3, lam2 * lam2))


def test_sigma_is_an_involution_with_ten_orbits(alg, points):
    report = pointscheme.sigma_report(alg, points)
    assert report.ok
    assert report.orbit_count == 10
    assert report.involution and report.families_preserved


def test_sigma_off_scheme_is_not_unique(alg, tower):
    one = tower.one()
    with pytest.raises(NonUniqueImage):
        pointscheme.sigma(alg, SchemePoint((one, one * 2, one * 3, one * 5), "user", "q"))


def test_shuffled_relations_give_the_same_point_ideal(alg):
    rng = random.Random(20)
    base = pointscheme.point_ideal(alg)
    for _ in range(3):
        rels = list(alg.relations)
        rng.shuffle(rels)
        scaled = [{w: c * (k + 2) for w, c in r.items()} for k, r in enumerate(rels)]
        shuffled = QuadAlgebra(alg.gens, scaled, alg.field)
        assert compare_up_to_scalar(pointscheme.point_ideal(shuffled), base)["match"]
