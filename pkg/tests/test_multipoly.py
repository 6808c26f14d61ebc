from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lineschemes.errors import MissingAssignment, NotBihomogeneous, ParseError
from lineschemes.fixtures import read_poly_list
from lineschemes.linescheme import M_VARS, UV, pluecker_quadric
from lineschemes.multipoly import (
    GREVLEX,
    GRLEX,
    LEX,
    ORDERS,
    MPoly,
    VarSet,
    bidegree_check,
    divide,
    lift_parameter,
    collect_parameter,
    normal_form,
    parse_poly,
    scalar_equal_up_to_unit,
)
from lineschemes.scalars import ALPHA, standard_tower

XYZ = VarSet(("x", "y", "z"))
X4 = VarSet(("x1", "x2", "x3", "x4"))

exponents = st.tuples(*(st.integers(0, 3) for _ in range(3)))
monomials = st.lists(exponents, min_size=1, max_size=4, unique=True)


@st.composite
def polys(draw, min_terms=0):
    exps = draw(st.lists(exponents, min_size=min_terms, max_size=5, unique=True))
    terms = {}
    for e in exps:
        c = draw(st.integers(-5, 5).filter(bool))
        terms[e] = Fraction(c)
    return MPoly(XYZ, terms)


def to_sympy(p):
    return sympy.sympify(p.to_str().replace("^", "**"), locals={n: sympy.Symbol(n) for n in p.varset})


def test_difference_of_squares():
    x1, x2 = X4["x1"], X4["x2"]
    assert (x1 + x2) * (x1 - x2) == x1**2 - x2**2


def test_pluecker_square_has_six_terms():
    p = pluecker_quadric()
    assert len((p * p).terms) == 6
    assert (p * 0).terms == {}
    assert (p - p).is_zero()


def test_substitute_kills_point_minor_on_the_slice():
    f = parse_poly("x1*x3*(x2 - x4)*(x2 + x4)", X4)
    assert f.substitute({"x2": 1, "x4": 1}, target=X4).is_zero()
    assert f.substitute({n: X4[n] for n in X4}) == f


def test_substitute_z4_point_into_last_minor(point_golden):
    ring = standard_tower()
    d, i, b, a = (ring.gen(n) for n in "diba")
    lam2 = (d - 1) / ALPHA
    lam3 = lam2 * i * b * a / ALPHA
    assert ALPHA * lam2 * lam2 + 2 * lam2 + ALPHA == 0
    assert ALPHA * lam3 * lam3 == -2 * lam2 * lam2
    values = {"x1": ring.zero(), "x2": lam2, "x3": lam3, "x4": ring.one()}
    assert point_golden[-1].evaluate(values) == 0


def test_missing_assignment():
    with pytest.raises(MissingAssignment):
        parse_poly("x*y", XYZ).evaluate({"x": 1})


def test_normal_form_examples():
    p = pluecker_quadric()
    assert normal_form(p, [p]).is_zero()
    m12m34 = parse_poly("M12*M34", M_VARS)
    # under grevlex the quadric's leading term is M14*M23, so M12*M34 is already reduced
    assert p.leading_monomial(GREVLEX) == (0, 0, 1, 1, 0, 0)
    assert normal_form(m12m34, [p], GREVLEX) == m12m34
    # under grlex (and lex) M12*M34 leads and one division step gives the stated value
    expected = parse_poly("M13*M24 - M14*M23", M_VARS)
    assert normal_form(m12m34, [p], GRLEX) == expected
    assert normal_form(m12m34, [p], LEX) == expected
    one = MPoly.const(M_VARS, 1)
    assert normal_form(p * p + m12m34, [one]).is_zero()


def test_bidegree_examples():
    u1, u2, v1, v2 = UV["u1"], UV["u2"], UV["v1"], UV["v2"]
    blocks = (UV.names[:4], UV.names[4:])
    assert bidegree_check(u1 * v2 - u2 * v1, blocks) == (1, 1)
    with pytest.raises(NotBihomogeneous):
        bidegree_check(u1 * u1 + v1, blocks)


def test_text_round_trip_and_errors():
    p = parse_poly("alpha*x^2*y - 3/2*z + 1", XYZ)
    assert parse_poly(p.to_str(), XYZ) == p
    assert parse_poly("alpha*x", XYZ, alpha=3) == parse_poly("3*x", XYZ)
    for bad in ("x +", "w*x", "x^", "(x"):
        with pytest.raises(ParseError):
            parse_poly(bad, XYZ)
    with pytest.raises(ParseError, match="line 3"):
        read_poly_list("vars: x y z\nx\nx +\n")


def test_lift_and_collect_alpha():
    p = parse_poly("alpha^2*x - 2*alpha*y + z", XYZ)
    lifted = lift_parameter(p)
    assert lifted.varset.names[-1] == "alpha"
    assert collect_parameter(lifted, XYZ) == p
    with pytest.raises(ValueError):
        lift_parameter(parse_poly("x", XYZ) * (1 / (ALPHA + 1)))


def test_scalar_equality_up_to_unit():
    p = parse_poly("2*x - 4*y", XYZ)
    assert scalar_equal_up_to_unit(p, parse_poly("-x + 2*y", XYZ))
    assert not scalar_equal_up_to_unit(p, parse_poly("x + 2*y", XYZ))


@given(polys(), polys())
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@given(polys(), st.lists(polys(min_terms=1), min_size=1, max_size=3), st.sampled_from(sorted(ORDERS)))
def test_division_identity(p, divisors, order_name):
    order = ORDERS[order_name]
    quotients, rem = divide(p, divisors, order)
    total = rem
    for q, d in zip(quotients, divisors):
        total = total + q * d
    assert total == p
    leads = [d.leading_monomial(order) for d in divisors]
    for e in rem.terms:
        assert not any(all(a >= b for a, b in zip(e, lead)) for lead in leads)


@given(polys(), polys(), polys(), polys())
def test_substitution_is_a_homomorphism(p, q, fx, fy):
    assignment = {"x": fx, "y": fy, "z": XYZ["z"]}

    def sub(f):
        return f.substitute(assignment, target=XYZ)

    assert sub(p * q) == sub(p) * sub(q)
    assert sub(p + q) == sub(p) + sub(q)


@given(polys(), polys(), st.tuples(*(st.integers(-3, 3) for _ in range(3))))
def test_evaluation_is_a_homomorphism(p, q, point):
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)


@given(monomials, exponents, st.sampled_from(sorted(ORDERS)))
def test_orders_are_monomial_orders(monos, shift, order_name):
    key = ORDERS[order_name].key
    ranked = sorted(monos, key=key)
    shifted = sorted(monos, key=lambda e: key(tuple(a + b for a, b in zip(e, shift))))
    # multiplying by a monomial preserves the order, and 1 is the least monomial
    assert ranked == shifted
    assert all(key((0, 0, 0)) <= key(e) for e in monos)
