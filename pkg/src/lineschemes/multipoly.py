"""Sparse multivariate polynomials with dense exponent vectors.

Coefficients may come from any of the domains in :mod:`lineschemes.scalars`
(``Fraction``, :class:`~lineschemes.scalars.RatFunc`,
:class:`~lineschemes.scalars.TowerElem`).  Python ints are converted to
``Fraction`` on entry.
"""

from __future__ import annotations

from fractions import Fraction
from operator import add

from .errors import MissingAssignment, NotBihomogeneous, ParseError, VarSetMismatch
from .parse import evaluate as _eval_ast
from .parse import parse as _parse_ast
from .scalars import ALPHA, RatFunc, TowerElem, coeff_inverse, qalpha_str, specialize_alpha

_COEFF_TYPES = (int, Fraction, RatFunc, TowerElem)


class VarSet:
    """An ordered, immutable list of variable names."""

    __slots__ = ("names", "index", "_hash")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.index = {n: k for k, n in enumerate(names)}
        self._hash = hash(names)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"VarSet({', '.join(self.names)})"

    def gens(self):
        return [MPoly.var(self, n) for n in self.names]

    def __getitem__(self, name):
        return MPoly.var(self, name)


class MonomialOrder:
    """lex, grlex or grevlex with variables ranked in varset order (first is largest)."""

    __slots__ = ("kind", "key")

    def __init__(self, kind):
        if kind == "lex":
            key = tuple
        elif kind == "grlex":
            def key(e):
                return (sum(e), e)
        elif kind == "grevlex":
            def key(e):
                return (sum(e), tuple(-x for x in reversed(e)))
        else:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.key = key

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.kind == other.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return self.kind


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")

ORDERS = {"lex": LEX, "grlex": GRLEX, "grevlex": GREVLEX}


def _coerce(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


class MPoly:
    __slots__ = ("varset", "terms")

    def __init__(self, varset, terms=None):
        self.varset = varset
        self.terms = terms if terms is not None else {}

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, varset, c):
        c = _coerce(c)
        return cls(varset, {(0,) * len(varset): c} if c else {})

    @classmethod
    def var(cls, varset, name):
        e = [0] * len(varset)
        e[varset.index[name]] = 1
        return cls(varset, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, varset, exp, c=1):
        c = _coerce(c)
        return cls(varset, {tuple(exp): c} if c else {})

    def zero(self):
        return MPoly(self.varset, {})

    def one(self):
        return MPoly.const(self.varset, 1)

    # arithmetic -------------------------------------------------------
    def _check(self, other):
        if other.varset != self.varset:
            raise VarSetMismatch(f"{self.varset!r} vs {other.varset!r}")

    def __add__(self, other):
        if isinstance(other, MPoly):
            self._check(other)
            out = dict(self.terms)
            for e, c in other.terms.items():
                v = out.get(e)
                v = c if v is None else v + c
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
            return MPoly(self.varset, out)
        if isinstance(other, _COEFF_TYPES):
            return self + MPoly.const(self.varset, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.varset, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, (MPoly,) + _COEFF_TYPES):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _COEFF_TYPES):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, MPoly):
            self._check(other)
            a, b = self.terms, other.terms
            if len(a) < len(b):
                a, b = b, a
            out = {}
            get = out.get
            for e2, c2 in b.items():
                for e1, c1 in a.items():
                    e = tuple(map(add, e1, e2))
                    v = get(e)
                    out[e] = c1 * c2 if v is None else v + c1 * c2
            return MPoly(self.varset, {e: c for e, c in out.items() if c})
        if isinstance(other, _COEFF_TYPES):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, c):
        c = _coerce(c)
        if not c:
            return MPoly(self.varset, {})
        out = {}
        for e, v in self.terms.items():
            w = v * c
            if w:
                out[e] = w
        return MPoly(self.varset, out)

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            c = other.constant_value()
            if c is None:
                raise ParseError("division by a non-constant polynomial")
            other = c
        if isinstance(other, _COEFF_TYPES):
            return self.scale(coeff_inverse(_coerce(other)))
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = self.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.varset == other.varset and self.terms == other.terms
        if isinstance(other, _COEFF_TYPES):
            return self == MPoly.const(self.varset, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.varset, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    # inspection -------------------------------------------------------
    def constant_value(self):
        """The coefficient if this is a constant polynomial, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            if not any(e):
                return c
        return None

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degrees(self):
        return {sum(e) for e in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def variables(self):
        used = set()
        for e in self.terms:
            for k, x in enumerate(e):
                if x:
                    used.add(self.varset.names[k])
        return used

    def degree_in(self, name):
        k = self.varset.index[name]
        return max((e[k] for e in self.terms), default=-1)

    def sorted_terms(self, order=GREVLEX):
        key = order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order=GREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def leading_monomial(self, order=GREVLEX):
        return self.leading_term(order)[0]

    def leading_coefficient(self, order=GREVLEX):
        return self.leading_term(order)[1]

    def monic(self, order=GREVLEX):
        if not self.terms:
            return self
        return self.scale(coeff_inverse(self.leading_coefficient(order)))

    def map_coeffs(self, fn, varset=None):
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = _coerce(v)
        return MPoly(varset or self.varset, out)

    def specialize(self, value):
        """Image under alpha -> value of a polynomial over Q(alpha) or a tower."""
        return self.map_coeffs(lambda c: specialize_alpha(c, value))

    def diff(self, name):
        k = self.varset.index[name]
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                out[tuple(f)] = c * e[k]
        return MPoly(self.varset, out)

    # substitution -----------------------------------------------------
    def substitute(self, assignment, target=None):
        """Apply the homomorphism ``var -> assignment[var]``.

        Values may be polynomials over one common target varset, or
        coefficients.  Variables absent from ``assignment`` are an error when
        they occur in ``self``, unless ``target`` is this varset, in which case
        they are left alone.
        """
        if target is None:
            for v in assignment.values():
                if isinstance(v, MPoly):
                    target = v.varset
                    break
            else:
                target = self.varset
        names = self.varset.names
        images = []
        for k, n in enumerate(names):
            if n in assignment:
                v = assignment[n]
                images.append(v if isinstance(v, MPoly) else MPoly.const(target, v))
            elif target == self.varset:
                images.append(MPoly.var(target, n))
            else:
                images.append(None)
        powers = [dict() for _ in names]

        def pw(k, m):
            cache = powers[k]
            if m not in cache:
                cache[m] = images[k] ** m
            return cache[m]

        acc = MPoly(target, {})
        for e, c in self.terms.items():
            term = MPoly.const(target, c)
            for k, m in enumerate(e):
                if m:
                    if images[k] is None:
                        raise MissingAssignment(names[k])
                    term = term * pw(k, m)
            acc = acc + term
        return acc

    def evaluate(self, values):
        """Evaluate at a point (mapping name -> value, or a sequence in varset order)."""
        if not isinstance(values, dict):
            values = dict(zip(self.varset.names, values))
        names = self.varset.names
        cache = {}
        acc = None
        for e, c in self.terms.items():
            term = c
            for k, m in enumerate(e):
                if m:
                    if names[k] not in values:
                        raise MissingAssignment(names[k])
                    key = (k, m)
                    if key not in cache:
                        cache[key] = values[names[k]] ** m
                    term = cache[key] * term
            acc = term if acc is None else acc + term
        if acc is None:
            return Fraction(0)
        return acc

    def rename(self, varset, mapping=None):
        """Re-express over ``varset`` (same length) position by position."""
        if len(varset) != len(self.varset):
            raise VarSetMismatch("rename needs equal-length varsets")
        return MPoly(varset, dict(self.terms))

    # text -------------------------------------------------------------
    def to_str(self, order=GREVLEX):
        if not self.terms:
            return "0"
        names = self.varset.names
        pieces = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                (names[k] if x == 1 else f"{names[k]}^{x}") for k, x in enumerate(e) if x
            )
            sign, mag = _coeff_parts(c)
            if not mono:
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append((sign, body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MPoly({self.to_str()})"


def _coeff_parts(c):
    if isinstance(c, Fraction):
        return ("-" if c < 0 else "+"), str(abs(c))
    if isinstance(c, RatFunc):
        if len(c.den) == 1 and sum(1 for x in c.num if x) == 1:
            lead = c.num[-1]
            if lead < 0:
                return "-", qalpha_str(-c)
            return "+", qalpha_str(c)
        return "+", f"({qalpha_str(c)})"
    if isinstance(c, TowerElem):
        if c.is_base():
            return _coeff_parts(c.base_value())
        return "+", f"({c})"
    return "+", f"({c})"


# ---------------------------------------------------------------------------
# division


def divide(p, divisors, order=GREVLEX):
    """Multivariate division: returns ``(quotients, remainder)``.

    ``p == sum(q_i * d_i) + remainder`` and no term of the remainder is
    divisible by any leading monomial of the divisors.
    """
    divs = []
    for d in divisors:
        if d.is_zero():
            raise ZeroDivisionError("zero divisor polynomial")
        e, c = d.leading_term(order)
        divs.append((e, coeff_inverse(c), d))
    quotients = [dict() for _ in divisors]
    rem = {}
    work = dict(p.terms)
    key = order.key
    while work:
        e = max(work, key=key)
        c = work[e]
        for k, (le, linv, d) in enumerate(divs):
            if all(a >= b for a, b in zip(e, le)):
                shift = tuple(a - b for a, b in zip(e, le))
                f = c * linv
                quotients[k][shift] = quotients[k].get(shift, 0) + f
                for de, dc in d.terms.items():
                    t = tuple(map(add, de, shift))
                    v = work.get(t, 0) - f * dc
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[e] = c
            del work[e]
    qs = [MPoly(p.varset, {e: c for e, c in q.items() if c}) for q in quotients]
    return qs, MPoly(p.varset, rem)


def normal_form(p, divisors, order=GREVLEX):
    return divide(p, divisors, order)[1]


def bidegree_check(p, blocks):
    """Return ``(d1, d2)`` if every term has degree d1 in block 1 and d2 in block 2."""
    b1, b2 = (set(b) for b in blocks)
    names = p.varset.names
    if b1 & b2 or (b1 | b2) != set(names):
        raise ValueError("blocks must partition the variable set")
    idx1 = [k for k, n in enumerate(names) if n in b1]
    idx2 = [k for k, n in enumerate(names) if n in b2]
    seen = None
    for e in p.terms:
        bd = (sum(e[k] for k in idx1), sum(e[k] for k in idx2))
        if seen is None:
            seen = bd
        elif bd != seen:
            raise NotBihomogeneous(f"terms of bidegrees {seen} and {bd}")
    if seen is None:
        raise NotBihomogeneous("the zero polynomial has no bidegree")
    return seen


# ---------------------------------------------------------------------------
# text


def parse_poly(text, varset, alpha=None):
    """Parse ``text`` into an :class:`MPoly` over ``varset``.

    The name ``alpha`` denotes the parameter: symbolic by default, or the
    given rational ``alpha`` value.
    """
    ast = _parse_ast(text)

    def name(n):
        if n in varset.index:
            return MPoly.var(varset, n)
        if n == "alpha":
            return MPoly.const(varset, ALPHA if alpha is None else Fraction(alpha))
        raise ParseError(f"unknown variable {n!r}")

    def number(k):
        return MPoly.const(varset, k)

    return _eval_ast(ast, name, number)


def scalar_equal_up_to_unit(p, q, order=GREVLEX):
    """True iff ``p == c*q`` for some nonzero scalar ``c``."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    return p.monic(order) == q.monic(order)


# ---------------------------------------------------------------------------
# moving the parameter alpha between coefficients and variables


def lift_parameter(p, name="alpha"):
    """Turn a polynomial over Q[alpha] into one over Q with ``alpha`` as a last variable.

    Raises ``ValueError`` if a coefficient has a nontrivial denominator.
    """
    varset = VarSet(p.varset.names + (name,))
    out = {}
    for e, c in p.terms.items():
        if isinstance(c, RatFunc):
            if len(c.den) != 1:
                raise ValueError("coefficient is not a polynomial in alpha")
            for k, a in enumerate(c.num):
                if a:
                    out[e + (k,)] = Fraction(a)
        else:
            out[e + (0,)] = Fraction(c)
    return MPoly(varset, out)


def collect_parameter(p, varset):
    """Inverse of :func:`lift_parameter`: fold the last variable back into coefficients."""
    from .scalars import ratfunc

    if len(p.varset) != len(varset) + 1:
        raise VarSetMismatch("collect_parameter needs exactly one extra variable")
    grouped = {}
    for e, c in p.terms.items():
        coeffs = grouped.setdefault(e[:-1], {})
        coeffs[e[-1]] = c
    out = {}
    for e, coeffs in grouped.items():
        num = [Fraction(0)] * (max(coeffs) + 1)
        for k, c in coeffs.items():
            num[k] = c
        value = ratfunc(num)
        if value:
            out[e] = value
    return MPoly(varset, out)
