"""Buchberger's algorithm and Hilbert data of leading-term ideals.

Rational coefficients are converted to ``gmpy2.mpq`` for the inner loops.
Coefficients in Q(alpha) are also accepted (used for the small systems of
the intersection solver); tower coefficients are rejected because the tower
need not be a field.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from gmpy2 import mpq

from .errors import NotHomogeneous, ResourceLimit
from .multipoly import GREVLEX, MPoly
from .scalars import RatFunc, TowerElem

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 200_000


# ---------------------------------------------------------------------------
# internal polynomial form: dict exponent -> mpq, plus the leading exponent


def _to_mpq(c):
    c = Fraction(c)
    return mpq(c.numerator, c.denominator)


def _from_internal(c):
    if isinstance(c, type(mpq())):
        return Fraction(int(c.numerator), int(c.denominator))
    return c


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Ring:
    def __init__(self, order, nvars):
        self.order = order
        self.nvars = nvars
        self._keys = {}
        self._heap_keys = {}

    def heap_key(self, e):
        # heapq is a min-heap; a negated flat key makes the largest term pop first
        k = self._heap_keys.get(e)
        if k is None:
            k = self._heap_keys[e] = _flat_negated(self.key(e))
        return k

    def key(self, e):
        k = self._keys.get(e)
        if k is None:
            k = self._keys[e] = self.order.key(e)
        return k

    def lead(self, p):
        return max(p, key=self.key)

    def monic(self, p):
        lt = self.lead(p)
        inv = 1 / p[lt]
        return {e: c * inv for e, c in p.items()}

    def reduce(self, p, basis, leads, full=True, counter=None):
        """Normal form of ``p`` modulo ``basis`` (monic polys with given leads).

        With ``full`` every term is reduced, otherwise only the head.
        """
        p = dict(p)
        heap = [(self.heap_key(e), e) for e in p]
        heapq.heapify(heap)
        rem = {}
        steps = 0
        while heap:
            _, e = heapq.heappop(heap)
            c = p.get(e)
            if c is None:
                continue
            for g, lg in zip(basis, leads):
                if _divides(lg, e):
                    shift = _sub(e, lg)
                    for ge, gc in g.items():
                        t = tuple(x + y for x, y in zip(ge, shift))
                        v = p.get(t)
                        if v is None:
                            p[t] = -c * gc
                            heapq.heappush(heap, (self.heap_key(t), t))
                        else:
                            v -= c * gc
                            if v:
                                p[t] = v
                            else:
                                del p[t]
                    steps += 1
                    break
            else:
                rem[e] = c
                del p[e]
                if not full:
                    rem.update(p)
                    break
        if counter is not None:
            counter[0] += steps
        return rem


def _flat_negated(key):
    out = []
    for part in key:
        if isinstance(part, tuple):
            out.extend(-x for x in part)
        else:
            out.append(-part)
    return tuple(out)


# ---------------------------------------------------------------------------
# Buchberger


@dataclass
class GroebnerBasis:
    order: object
    basis: list
    varset: object = None
    stats: dict = field(default_factory=dict)

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.basis]


def _coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _update(pairs, leads, new_index, active):
    """Gebauer-Moeller update of the pair list with a new basis element."""
    h = leads[new_index]
    c_list = [(g, _lcm(leads[g], h)) for g in active]
    d_list = []
    while c_list:
        g1, l1 = c_list.pop(0)
        if _coprime(leads[g1], h) or not (
            any(_divides(l2, l1) for _, l2 in c_list) or any(_divides(l2, l1) for _, l2 in d_list)
        ):
            d_list.append((g1, l1))
    new_pairs = [(g, new_index, l) for g, l in d_list if not _coprime(leads[g], h)]
    survivors = [
        (i, j, l)
        for i, j, l in pairs
        if not (_divides(h, l) and _lcm(leads[i], h) != l and _lcm(leads[j], h) != l)
    ]
    return survivors + new_pairs


def buchberger(gens, order=GREVLEX, budget=DEFAULT_BUDGET, progress_every=1000):
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are chosen by smallest lcm degree, ties broken by creation order.
    ``budget`` caps the number of S-polynomial reductions; exceeding it raises
    :class:`ResourceLimit` with the partial progress.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis(order, [], None, {"pairs": 0})
    varset = gens[0].varset
    ring = _Ring(order, len(varset))
    coeffs = [c for g in gens for c in g.terms.values()]
    if any(isinstance(c, TowerElem) for c in coeffs):
        raise TypeError("Groebner bases need field coefficients; tower elements are not supported")
    convert = _to_mpq if not any(isinstance(c, RatFunc) for c in coeffs) else (lambda c: c)
    polys = [ring.monic({e: convert(c) for e, c in g.terms.items()}) for g in gens]
    basis = []
    leads = []
    active = []
    pairs = []
    counter = [0]

    def add(p):
        basis.append(p)
        leads.append(ring.lead(p))
        k = len(basis) - 1
        nonlocal pairs
        pairs = _update(pairs, leads, k, active)
        # drop basis elements whose lead is now divisible by the new lead
        active[:] = [i for i in active if not _divides(leads[k], leads[i])]
        active.append(k)

    # start from an interreduced input so the first pairs are small
    for p in sorted(polys, key=lambda q: ring.key(ring.lead(q))):
        act_basis = [basis[i] for i in active]
        act_leads = [leads[i] for i in active]
        r = ring.reduce(p, act_basis, act_leads, counter=counter)
        if r:
            add(ring.monic(r))
    processed = 0
    while pairs:
        pairs.sort(key=lambda t: (sum(t[2]), ring.key(t[2]), t[0], t[1]))
        i, j, lij = pairs.pop(0)
        processed += 1
        if processed > budget:
            raise ResourceLimit(
                f"S-pair budget {budget} exhausted",
                {"pairs_done": processed - 1, "pairs_left": len(pairs) + 1,
                 "basis_size": len(active)},
            )
        gi, gj = basis[i], basis[j]
        si = _sub(lij, leads[i])
        sj = _sub(lij, leads[j])
        s = {}
        for e, c in gi.items():
            s[tuple(x + y for x, y in zip(e, si))] = c
        for e, c in gj.items():
            t = tuple(x + y for x, y in zip(e, sj))
            v = s.get(t, 0) - c
            if v:
                s[t] = v
            else:
                s.pop(t, None)
        act_basis = [basis[k] for k in active]
        act_leads = [leads[k] for k in active]
        r = ring.reduce(s, act_basis, act_leads, counter=counter)
        if r:
            add(ring.monic(r))
        if progress_every and processed % progress_every == 0:
            log.info("groebner: %d pairs done, %d left, basis %d", processed, len(pairs), len(active))
    # minimal then reduced
    final = [basis[i] for i in active]
    final_leads = [leads[i] for i in active]
    keep = []
    for k, lk in enumerate(final_leads):
        if not any(_divides(final_leads[m], lk) and (final_leads[m] != lk or m < k)
                   for m in range(len(final)) if m != k):
            keep.append(k)
    final = [final[k] for k in keep]
    final_leads = [final_leads[k] for k in keep]
    reduced = []
    for k, g in enumerate(final):
        others = [final[m] for m in range(len(final)) if m != k]
        other_leads = [final_leads[m] for m in range(len(final)) if m != k]
        head = {final_leads[k]: g[final_leads[k]]}
        tail = {e: c for e, c in g.items() if e != final_leads[k]}
        tail = ring.reduce(tail, others, other_leads, counter=counter)
        head.update(tail)
        reduced.append(ring.monic(head))
    reduced.sort(key=lambda p: ring.key(ring.lead(p)), reverse=True)
    out = [
        MPoly(varset, {e: _from_internal(c) for e, c in p.items()})
        for p in reduced
    ]
    stats = {"pairs": processed, "reduction_steps": counter[0], "size": len(out)}
    return GroebnerBasis(order, out, varset, stats)


def s_polynomial(f, g, order=GREVLEX):
    lf, cf = f.leading_term(order)
    lg, cg = g.leading_term(order)
    l = _lcm(lf, lg)
    mf = MPoly.monomial(f.varset, _sub(l, lf), 1 / cf)
    mg = MPoly.monomial(g.varset, _sub(l, lg), 1 / cg)
    return mf * f - mg * g


def is_groebner(gb):
    """Post-hoc check: every S-polynomial reduces to zero modulo the basis."""
    from .multipoly import normal_form

    basis = gb.basis
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            s = s_polynomial(basis[a], basis[b], gb.order)
            if not normal_form(s, basis, gb.order).is_zero():
                return False
    return True


def ideal_membership(p, gb):
    from .multipoly import normal_form

    if not gb.basis:
        return p.is_zero()
    return normal_form(p, gb.basis, gb.order).is_zero()


# ---------------------------------------------------------------------------
# Hilbert series of monomial ideals


def _minimalize(monos):
    monos = sorted(set(monos), key=sum)
    out = []
    for m in monos:
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return out


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] += c
    return out


def _shift(p, k):
    return [0] * k + list(p)


def hilbert_numerator(monos, nvars):
    """Numerator ``N(t)`` with ``HS = N(t) / (1 - t)^nvars`` for a monomial ideal."""
    monos = _minimalize(monos)
    return _numerator(tuple(monos), nvars, {})


def _numerator(monos, nvars, memo):
    if not monos:
        return [1]
    hit = memo.get(monos)
    if hit is not None:
        return hit
    # pairwise coprime generators: product formula
    support = [tuple(k for k, x in enumerate(m) if x) for m in monos]
    used = set()
    coprime = True
    for s in support:
        if used.intersection(s):
            coprime = False
            break
        used.update(s)
    if coprime:
        out = [1]
        for m in monos:
            d = sum(m)
            out = _pmul(out, [1] + [0] * (d - 1) + [-1])
        memo[monos] = out
        return out
    # pivot on the variable that occurs in the most non-pure generators
    counts = [0] * nvars
    for m, s in zip(monos, support):
        if len(s) > 1:
            for k in s:
                counts[k] += 1
    var = max(range(nvars), key=lambda k: counts[k])
    pivot = tuple(int(k == var) for k in range(nvars))
    # N(I) = N(I + (x)) + t * N(I : x)
    plus = _minimalize(list(monos) + [pivot])
    colon = _minimalize([tuple(max(x - y, 0) for x, y in zip(m, pivot)) for m in monos])
    out = _padd(_numerator(tuple(plus), nvars, memo), _shift(_numerator(tuple(colon), nvars, memo), 1))
    memo[monos] = out
    return out


@dataclass
class HilbertData:
    dimension: int
    degree: int
    hilbert_polynomial: list
    numerator: list

    def as_dict(self):
        return {
            "dimension": self.dimension,
            "degree": self.degree,
            "hilbert_polynomial": [str(c) for c in self.hilbert_polynomial],
            "numerator": self.numerator,
        }


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def hilbert_from_monomials(monos, nvars):
    num = _trim(hilbert_numerator(monos, nvars))
    k = nvars
    # cancel factors of (1 - t)
    while k > 0 and sum(num) == 0 and any(num):
        quot = []
        acc = 0
        for c in num[:-1]:
            acc += c
            quot.append(acc)
        num = _trim(quot)
        k -= 1
    if not any(num):
        return HilbertData(-1, 0, [], [0])
    dim = k - 1
    degree = sum(num) if dim >= 0 else 0
    return HilbertData(dim, degree, _hilbert_polynomial(num, dim), num)


def _hilbert_polynomial(h, dim):
    """Coefficients (constant first) of ``sum_i h_i * C(s - i + dim, dim)`` in ``s``."""
    if dim < 0:
        return []
    # evaluate at dim + 1 large points and interpolate
    xs = list(range(len(h) + 1, len(h) + dim + 2))
    ys = [sum(c * comb(x - i + dim, dim) for i, c in enumerate(h)) for x in xs]
    return _interpolate(xs, ys)


def _interpolate(xs, ys):
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j != i:
                basis = _pmul(basis, [Fraction(-xs[j]), Fraction(1)])
                denom *= xs[i] - xs[j]
        for k, c in enumerate(basis):
            coeffs[k] += ys[i] * c / denom
    return coeffs


def hilbert_data(gb, num_vars=None):
    """Dimension and degree of the projective scheme cut out by a homogeneous ideal."""
    for g in gb.basis:
        if not g.is_homogeneous():
            raise NotHomogeneous(f"basis element {g} is not homogeneous")
    if num_vars is None:
        num_vars = len(gb.varset) if gb.varset is not None else 0
    return hilbert_from_monomials(gb.leading_monomials(), num_vars)
