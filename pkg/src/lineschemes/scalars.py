"""Exact coefficient arithmetic.

Three coefficient domains are used throughout the package:

* rationals, as :class:`fractions.Fraction`;
* the rational function field Q(alpha), where constants are kept as plain
  ``Fraction`` values and only non-constant elements become :class:`RatFunc`;
* towers of quadratic extensions over either of the above
  (:class:`TowerRing` / :class:`TowerElem`).

A tower is a quotient ring ``base[g1, ..., gk] / (g1^2 - s1, ..., gk^2 - sk)``
where every ``s_j`` lives in the subring generated by the earlier
generators.  It need not be a field.  An identity that holds in the tower
holds under every specialization of the square roots, which is what the
verification code relies on.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt

from .errors import NameCollision, NonGenericError, PoleError, ZeroDivisorError

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_SCALAR_TYPES = (int, Fraction)


# ---------------------------------------------------------------------------
# dense univariate polynomials over Q, coefficient tuples low -> high degree


def _ptrim(p):
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return tuple(p[:n])


def _padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] += c
    return _ptrim(out)


def _psub(p, q):
    out = list(p) + [ZERO] * (len(q) - len(p))
    for k, c in enumerate(q):
        out[k] -= c
    return _ptrim(out)


def _pmul(p, q):
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _ptrim(out)


def _pscale(p, c):
    if not c:
        return ()
    return tuple(a * c for a in p)


def _pdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    dq = len(q) - 1
    lc = q[-1]
    quot = [ZERO] * max(len(p) - dq, 0)
    for k in range(len(p) - 1, dq - 1, -1):
        c = p[k]
        if c:
            c = c / lc
            quot[k - dq] = c
            for j in range(dq + 1):
                p[k - dq + j] -= c * q[j]
    return _ptrim(quot), _ptrim(p[:dq])


def _pmonic(p):
    lc = p[-1]
    if lc == 1:
        return p
    return tuple(c / lc for c in p)


def _primitive_int(p):
    """Integer polynomial proportional to ``p`` with content 1."""
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _pgcd(p, q):
    """Monic gcd, by a primitive pseudo-remainder sequence over the integers."""
    if not p or not q:
        return _pmonic(p or q) if (p or q) else ()
    if len(p) == 1 or len(q) == 1:
        return (ONE,)
    a, b = _primitive_int(p), _primitive_int(q)
    if len(a) < len(b):
        a, b = b, a
    while b:
        # pseudo-remainder of a by b
        r = list(a)
        lb, db = b[-1], len(b) - 1
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            r = [x * lb for x in r]
            if c:
                for j in range(db + 1):
                    r[k - db + j] -= c * b[j]
        r = list(_ptrim(r[:db]))
        a, b = b, (_primitive_int([Fraction(x) for x in r]) if r else [])
    return _pmonic(tuple(Fraction(c) for c in a))


def _peval(p, x):
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pstr(p, var="alpha"):
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _psqrt(p):
    """Square root of a univariate polynomial over Q, or None."""
    if not p:
        return ()
    if (len(p) - 1) % 2:
        return None
    lead = _fraction_sqrt(p[-1])
    if lead is None:
        return None
    half = (len(p) - 1) // 2
    # build the root from the top coefficient down
    root = [ZERO] * (half + 1)
    root[half] = lead
    for k in range(half - 1, -1, -1):
        # coefficient of x^(half + k) in root^2 determines root[k]
        acc = ZERO
        for j in range(k + 1, half + 1):
            i = half + k - j
            if k < i <= half:
                acc += root[i] * root[j]
        root[k] = (p[half + k] - acc) / (2 * lead)
    root = _ptrim(root)
    return root if _pmul(root, root) == _ptrim(p) else None


def _fraction_sqrt(c):
    c = Fraction(c)
    if c < 0:
        return None
    n, d = isqrt(c.numerator), isqrt(c.denominator)
    if n * n == c.numerator and d * d == c.denominator:
        return Fraction(n, d)
    return None


# ---------------------------------------------------------------------------
# Q(alpha)


class RatFunc:
    """A non-constant element of Q(alpha) in lowest terms with monic denominator.

    Use :func:`ratfunc` to build values; it returns a plain ``Fraction`` when
    the result is constant, so constants never appear as ``RatFunc``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=(ONE,)):
        self.num = num
        self.den = den
        self._hash = None

    # construction -----------------------------------------------------
    @staticmethod
    def _make(num, den):
        """Normalize ``num/den`` (tuples of Fraction) and return a coefficient."""
        num = _ptrim(num)
        den = _ptrim(den)
        if not den:
            raise ZeroDivisionError("zero denominator in Q(alpha)")
        if not num:
            return ZERO
        if len(den) > 1:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        lc = den[-1]
        if lc != 1:
            num = tuple(c / lc for c in num)
            den = tuple(c / lc for c in den)
        if len(den) == 1 and len(num) == 1:
            return num[0]
        return RatFunc(num, den)

    def _parts(self):
        return self.num, self.den

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            if not other:
                return self
            return RatFunc._make(_padd(self.num, _pscale(self.den, other)), self.den)
        if not isinstance(other, RatFunc):
            return NotImplemented
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        if d1 == d2:
            if len(d1) == 1:
                return RatFunc._make(_padd(n1, n2), d1)
            return RatFunc._make(_padd(n1, n2), d1)
        return RatFunc._make(_padd(_pmul(n1, d2), _pmul(n2, d1)), _pmul(d1, d2))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(tuple(-c for c in self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, (RatFunc, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            if not other:
                return ZERO
            if other == 1:
                return self
            return RatFunc(_pscale(self.num, Fraction(other)), self.den)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if len(self.den) == 1 and len(other.den) == 1:
            return RatFunc._make(_pmul(self.num, other.num), (ONE,))
        return RatFunc._make(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        return RatFunc._make(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            if not other:
                raise ZeroDivisionError("division by zero in Q(alpha)")
            return RatFunc(_pscale(self.num, 1 / Fraction(other)), self.den)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc._make(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison -------------------------------------------------------
    def __bool__(self):
        return True  # non-constant, hence nonzero

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, _SCALAR_TYPES):
            return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # misc -------------------------------------------------------------
    def degree_pair(self):
        return len(self.num) - 1, len(self.den) - 1

    def evaluate(self, value):
        value = Fraction(value)
        d = _peval(self.den, value)
        if not d:
            raise PoleError(f"denominator of {self} vanishes at alpha = {value}")
        return _peval(self.num, value) / d

    def __str__(self):
        n = _pstr(self.num)
        if len(self.den) == 1:
            return n
        d = _pstr(self.den)
        if len([c for c in self.num if c]) > 1:
            n = f"({n})"
        return f"{n}/({d})"

    def __repr__(self):
        return f"RatFunc({self})"


def ratfunc(num, den=(1,)):
    """Build an element of Q(alpha) from coefficient sequences (low -> high)."""
    return RatFunc._make(tuple(Fraction(c) for c in num), tuple(Fraction(c) for c in den))


ALPHA = RatFunc((ZERO, ONE), (ONE,))


def is_qalpha(x):
    return isinstance(x, (int, Fraction, RatFunc))


def qalpha_str(c):
    """Text form of a Q(alpha) coefficient."""
    if isinstance(c, RatFunc):
        return str(c)
    c = Fraction(c)
    return str(c)


def qalpha_sqrt(x):
    """A square root of ``x`` inside Q(alpha), or None."""
    if isinstance(x, RatFunc):
        # lowest terms with monic denominator: x is a square iff both parts are
        n = _psqrt(x.num)
        d = _psqrt(x.den)
        if n is None or d is None:
            return None
        return RatFunc._make(n, d)
    return _fraction_sqrt(x)


def check_generic(value):
    value = Fraction(value)
    if value * (1 - value * value) == 0:
        raise NonGenericError(f"alpha = {value} is not generic: alpha*(1-alpha^2) = 0")
    return value


def _specialize_coeff(c, value):
    if isinstance(c, RatFunc):
        return c.evaluate(value)
    return Fraction(c)


# ---------------------------------------------------------------------------
# towers of quadratic extensions


def _common_denominator(coords):
    """Lcm of the alpha-denominators of the coefficients, or None if all are polynomial."""
    den = None
    for c in coords.values():
        if isinstance(c, RatFunc) and len(c.den) > 1:
            if den is None:
                den = c.den
            elif den != c.den:
                den = _pdivmod(_pmul(den, c.den), _pgcd(den, c.den))[0]
    return den


def _divide_by_poly(c, den):
    if isinstance(c, RatFunc):
        return RatFunc._make(c.num, _pmul(c.den, den))
    return RatFunc._make((Fraction(c),), den)


class TowerRing:
    """``base[g1..gk]/(g_j^2 - s_j)`` with elements in the multilinear basis.

    ``base`` is ``"Q(alpha)"`` or ``"Q"``.  Basis monomials are bitmasks over
    the generator list (bit ``j`` <-> ``g_j``).
    """

    def __init__(self, base="Q(alpha)", names=(), squares=(), parent=None):
        if base not in ("Q", "Q(alpha)"):
            raise ValueError(f"unknown tower base {base!r}")
        self.base = base
        self.names = tuple(names)
        self.squares = tuple(squares)  # each a dict mask -> coeff
        self.parent = parent
        self._key = (base, tuple((n, tuple(sorted(s.items()))) for n, s in zip(self.names, self.squares)))
        self._hash = hash(self._key)
        self._mono_cache = {}
        self._special_cache = {}

    # identity ---------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, TowerRing) and (self is other or self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        gens = ", ".join(
            f"{n}^2={TowerElem(self, s)}" for n, s in zip(self.names, self.squares)
        )
        return f"TowerRing({self.base}; {gens})"

    @property
    def ngens(self):
        return len(self.names)

    def is_prefix_of(self, other):
        return (
            self.base == other.base
            and self.names == other.names[: len(self.names)]
            and self._key[1] == other._key[1][: len(self.names)]
        )

    # construction -----------------------------------------------------
    def adjoin_sqrt(self, s, name):
        """Return the ring with one more generator ``name`` squaring to ``s``."""
        if name in self.names:
            raise NameCollision(f"generator {name!r} already present")
        s = self.coerce(s)
        coords = dict(s.coords)
        return TowerRing(self.base, self.names + (name,), self.squares + (coords,), parent=self)

    def coerce(self, x):
        if isinstance(x, TowerElem):
            if x.ring == self:
                return x
            if x.ring.is_prefix_of(self):
                return TowerElem(self, x.coords)
            raise ValueError(f"cannot coerce element of {x.ring!r} into {self!r}")
        if isinstance(x, RatFunc):
            if self.base != "Q(alpha)":
                raise ValueError("Q(alpha) coefficient in a tower over Q")
            return TowerElem(self, {0: x})
        x = Fraction(x)
        return TowerElem(self, {0: x} if x else {})

    def const(self, c):
        return self.coerce(c)

    def zero(self):
        return TowerElem(self, {})

    def one(self):
        return TowerElem(self, {0: ONE})

    def gen(self, name):
        try:
            k = self.names.index(name)
        except ValueError:
            raise KeyError(name) from None
        return TowerElem(self, {1 << k: ONE})

    def gens(self):
        return [TowerElem(self, {1 << k: ONE}) for k in range(self.ngens)]

    # multiplication table --------------------------------------------
    def _mono_mul(self, m1, m2):
        key = (m1, m2) if m1 <= m2 else (m2, m1)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        common = m1 & m2
        acc = TowerElem(self, {m1 ^ m2: ONE})
        k = 0
        while common:
            if common & 1:
                acc = acc * TowerElem(self, self.squares[k])
            common >>= 1
            k += 1
        out = tuple(acc.coords.items())
        self._mono_cache[key] = out
        return out

    # specialization ----------------------------------------------------
    def specialize(self, value):
        """The tower over Q obtained by setting alpha = ``value``."""
        value = Fraction(value)
        hit = self._special_cache.get(value)
        if hit is not None:
            return hit
        if self.base == "Q":
            return self
        parent = self.parent.specialize(value) if self.parent is not None else None
        if parent is None or parent.ngens != self.ngens - 1:
            # rebuild from scratch when the parent chain is not available
            ring = TowerRing("Q")
            for name, sq in zip(self.names, self.squares):
                ring = ring.adjoin_sqrt(
                    TowerElem(ring, {m: _specialize_coeff(c, value) for m, c in sq.items()}).stripped(),
                    name,
                )
        else:
            sq = self.squares[-1]
            ring = parent.adjoin_sqrt(
                TowerElem(parent, {m: _specialize_coeff(c, value) for m, c in sq.items()}).stripped(),
                self.names[-1],
            )
        self._special_cache[value] = ring
        return ring


def _mask_names(ring, mask):
    return [ring.names[k] for k in range(ring.ngens) if mask >> k & 1]


def _mask_order(mask):
    bits = []
    k = 0
    while mask:
        if mask & 1:
            bits.append(k)
        mask >>= 1
        k += 1
    return (len(bits) > 0, bits)


class TowerElem:
    """Element of a :class:`TowerRing`; ``coords`` maps basis bitmask -> coefficient."""

    __slots__ = ("ring", "coords", "_hash")

    def __init__(self, ring, coords):
        self.ring = ring
        self.coords = coords
        self._hash = None

    def stripped(self):
        return TowerElem(self.ring, {m: c for m, c in self.coords.items() if c})

    # coercion ---------------------------------------------------------
    def _common(self, other):
        if isinstance(other, TowerElem):
            if other.ring == self.ring:
                return self, other
            if other.ring.is_prefix_of(self.ring):
                return self, TowerElem(self.ring, other.coords)
            if self.ring.is_prefix_of(other.ring):
                return TowerElem(other.ring, self.coords), other
            raise ValueError("tower elements from unrelated rings")
        if isinstance(other, (int, Fraction, RatFunc)):
            return self, self.ring.coerce(other)
        return None, None

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        out = dict(a.coords)
        for m, c in b.coords.items():
            v = out.get(m, ZERO) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TowerElem(a.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return TowerElem(self.ring, {m: -c for m, c in self.coords.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            if not other:
                return TowerElem(self.ring, {})
            return TowerElem(self.ring, {m: c * other for m, c in self.coords.items()})
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        if len(a.coords) * len(b.coords) < 16:
            return a._mul_plain(b)
        da, db = _common_denominator(a.coords), _common_denominator(b.coords)
        if da is not None or db is not None:
            # multiply numerators over Q[alpha], divide once per coefficient
            den = _pmul(da or (ONE,), db or (ONE,))
            scale_a = RatFunc._make(da, (ONE,)) if da else ONE
            scale_b = RatFunc._make(db, (ONE,)) if db else ONE
            prod = TowerElem(a.ring, {m: c * scale_a for m, c in a.coords.items()})._mul_plain(
                TowerElem(b.ring, {m: c * scale_b for m, c in b.coords.items()})
            )
            return TowerElem(
                prod.ring, {m: _divide_by_poly(c, den) for m, c in prod.coords.items()}
            )
        return a._mul_plain(b)

    def _mul_plain(self, b):
        a = self
        ring = a.ring
        acc = {}
        get = acc.get
        for m1, c1 in a.coords.items():
            for m2, c2 in b.coords.items():
                c = c1 * c2
                if not m1 & m2:
                    m = m1 | m2
                    acc[m] = get(m, ZERO) + c
                else:
                    for m, k in ring._mono_mul(m1, m2):
                        acc[m] = get(m, ZERO) + c * k
        return TowerElem(ring, {m: c for m, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self, k):
        """Apply the automorphism ``g_k -> -g_k``."""
        bit = 1 << k
        return TowerElem(self.ring, {m: (-c if m & bit else c) for m, c in self.coords.items()})

    def _norm_chain(self):
        """``(adj, norm)`` with ``self * adj == norm`` and ``norm`` in the base.

        Multiplies by one conjugate per generator, top down; each product
        drops that generator.
        """
        adj = self.ring.one()
        cur = self
        for k in reversed(range(self.ring.ngens)):
            bit = 1 << k
            if not any(m & bit for m in cur.coords):
                continue
            conj = cur.conjugate(k)
            adj = adj * conj
            cur = cur * conj
        return adj, cur.coords.get(0, ZERO)

    def inverse(self):
        """Exact inverse; raises :class:`ZeroDivisorError` for non-units.

        ``x`` is a unit iff its norm down the tower is nonzero.  Denominators
        in alpha are cleared first so the conjugate products stay polynomial;
        the only rational-function division happens at the end.
        """
        if not self.coords:
            raise ZeroDivisorError("zero is not invertible")
        den = (ONE,)
        for c in self.coords.values():
            if isinstance(c, RatFunc) and len(c.den) > 1:
                den = _pdivmod(_pmul(den, c.den), _pgcd(den, c.den))[0]
        scale = RatFunc._make(den, (ONE,))
        adj, norm = (self * scale)._norm_chain()
        if not norm:
            raise ZeroDivisorError("element is not a unit")
        return adj * (scale / norm)

    def is_unit(self):
        try:
            self.inverse()
        except ZeroDivisorError:
            return False
        return True

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / other)
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    # comparison -------------------------------------------------------
    def __bool__(self):
        return bool(self.coords)

    def __eq__(self, other):
        if isinstance(other, TowerElem):
            a, b = self._common(other)
            return a.coords == b.coords
        if isinstance(other, (int, Fraction, RatFunc)):
            if not other:
                return not self.coords
            return self.coords == {0: other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if set(self.coords) <= {0}:
                self._hash = hash(self.coords.get(0, ZERO))
            else:
                self._hash = hash(frozenset(self.coords.items()))
        return self._hash

    # inspection -------------------------------------------------------
    def is_base(self):
        return set(self.coords) <= {0}

    def base_value(self):
        if not self.is_base():
            raise ValueError(f"{self} is not in the base field")
        return self.coords.get(0, ZERO)

    def generators_used(self):
        mask = 0
        for m in self.coords:
            mask |= m
        return mask

    def specialize(self, value):
        ring = self.ring.specialize(value)
        return TowerElem(ring, {m: _specialize_coeff(c, value) for m, c in self.coords.items()}).stripped()

    def __str__(self):
        if not self.coords:
            return "0"
        parts = []
        for m in sorted(self.coords, key=_mask_order):
            c = self.coords[m]
            names = _mask_names(self.ring, m)
            mono = "*".join(names)
            cs = qalpha_str(c)
            compound = isinstance(c, RatFunc) and (len([x for x in c.num if x]) > 1 or len(c.den) > 1)
            negative = not compound and (c < 0 if isinstance(c, Fraction) else str(c).startswith("-"))
            if negative:
                sign, mag = "-", qalpha_str(-c)
            else:
                sign, mag = "+", cs
            if compound:
                mag = f"({cs})"
            if not mono:
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"TowerElem({self})"


def tower_adjoin_sqrt(ring, s, name):
    return ring.adjoin_sqrt(s, name)


def tower_sqrt(x):
    """A square root of ``x`` in its own tower, or None if none is recognized.

    Only handles ``x`` in the base field: it searches for a product of
    generators ``G`` with base squares such that ``x / prod(G^2)`` is a square
    in the base.
    """
    ring = x.ring
    if not x.is_base():
        return None
    value = x.base_value()
    if not value:
        return ring.zero()
    base_gens = [k for k, sq in enumerate(ring.squares) if set(sq) <= {0}]
    for size in range(len(base_gens) + 1):
        for subset in combinations(base_gens, size):
            prod = ONE
            for k in subset:
                prod = prod * ring.squares[k].get(0, ZERO)
            if not prod:
                continue
            root = qalpha_sqrt(value / prod)
            if root is None:
                continue
            mask = 0
            for k in subset:
                mask |= 1 << k
            cand = TowerElem(ring, {mask: root})
            if cand * cand == x:
                return cand
    return None


def sqrt_or_adjoin(x, name):
    """Return ``(ring, root)`` with ``root^2 == x``, adjoining ``name`` if needed."""
    root = tower_sqrt(x)
    if root is not None:
        return x.ring, root
    ring = x.ring.adjoin_sqrt(x, name)
    return ring, ring.gen(name)


def specialize_alpha(x, value):
    """Image of ``x`` under alpha -> ``value`` (a ring homomorphism)."""
    value = check_generic(value)
    if isinstance(x, TowerElem):
        return x.specialize(value)
    if isinstance(x, RatFunc):
        return x.evaluate(value)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    spec = getattr(x, "specialize", None)
    if spec is not None:
        return spec(value)
    raise TypeError(f"cannot specialize {type(x).__name__}")


def standard_tower(extra=True):
    """The tower Q(alpha)<i, a, b, d> (optionally with e, f) used for the scheme points.

    ``i^2 = -1, a^2 = alpha, b^2 = 2, d^2 = 1 - alpha^2``; with ``extra`` also
    ``e^2 = -2(1 + alpha)`` and ``f^2 = -2(1 - alpha)``.
    """
    ring = TowerRing("Q(alpha)")
    ring = ring.adjoin_sqrt(-1, "i")
    ring = ring.adjoin_sqrt(ALPHA, "a")
    ring = ring.adjoin_sqrt(2, "b")
    ring = ring.adjoin_sqrt(1 - ALPHA * ALPHA, "d")
    if extra:
        ring = ring.adjoin_sqrt(-2 * (1 + ALPHA), "e")
        ring = ring.adjoin_sqrt(-2 * (1 - ALPHA), "f")
    return ring


def coeff_inverse(c):
    """Inverse of a coefficient in any supported domain."""
    if isinstance(c, TowerElem):
        return c.inverse()
    if isinstance(c, RatFunc):
        return c.inverse()
    if not c:
        raise ZeroDivisionError("division by zero")
    return 1 / Fraction(c)


def is_unit(c):
    if isinstance(c, TowerElem):
        return c.is_unit()
    return bool(c)


def _lcm_int(x, y):
    return x * y // gcd(x, y)


def clear_denominators(values):
    """Rescale a vector over Q(alpha) so every entry is a polynomial in alpha
    with integer coefficients.  Returns the scaled list."""
    den = (ONE,)
    for v in values:
        if isinstance(v, RatFunc) and len(v.den) > 1:
            g = _pgcd(den, v.den)
            den = _pdivmod(_pmul(den, v.den), g)[0]
    factor = RatFunc._make(den, (ONE,))
    scaled = [v * factor for v in values]
    int_den = 1
    for v in scaled:
        coeffs = v.num if isinstance(v, RatFunc) else (Fraction(v),)
        for c in coeffs:
            int_den = _lcm_int(int_den, Fraction(c).denominator)
    return [v * int_den for v in scaled]
