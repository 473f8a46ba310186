"""Weights, sparse Laurent polynomials in x_1..x_n, and rational functions in x.

A ``LaurentPoly`` is a dict from exponent tuples to nonzero ``RatFunc``
coefficients.  An ``XRatFunc`` is an element of Q(q, t, x_1, ..., x_n); one
subclass is generated per rank so that FLINT contexts never mix.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .coeff import ONE, Q, RatFunc, ZERO, FractionField, _Fraction, _lowest_coeff

__all__ = [
    "parse_weight",
    "format_weight",
    "is_dominant",
    "dominance_leq",
    "dominant_below",
    "dominant_weights",
    "partitions",
    "delta",
    "two_rho",
    "LaurentPoly",
    "XRatFunc",
    "xfield",
    "monomial_sym",
    "elementary",
    "NonLaurentError",
]


class NonLaurentError(ValueError):
    """A rational function in x failed to reduce to a Laurent polynomial."""


# ---------------------------------------------------------------- weights

def parse_weight(text: str) -> tuple[int, ...]:
    text = text.strip().strip("()[]")
    if not text:
        raise ValueError("empty weight")
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ValueError(f"bad weight {text!r}") from None


def format_weight(w) -> str:
    return ",".join(str(int(a)) for a in w)


def is_dominant(w) -> bool:
    return all(w[i] >= w[i + 1] for i in range(len(w) - 1))


def dominance_leq(mu, lam) -> bool:
    """mu <= lam in dominance order (lam - mu a nonnegative sum of simple roots)."""
    if len(mu) != len(lam):
        raise ValueError("weights of different rank")
    if sum(mu) != sum(lam):
        raise ValueError("dominance comparison needs equal totals")
    acc = 0
    for a, b in zip(mu, lam):
        acc += b - a
        if acc < 0:
            return False
    return True


def dominant_below(lam) -> list[tuple[int, ...]]:
    """All dominant mu <= lam with |mu| = |lam|, in descending lexicographic order."""
    lam = tuple(lam)
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    n = len(lam)
    total = sum(lam)
    floor = lam[-1]
    prefix = list(itertools.accumulate(lam))
    out = []

    def rec(pos, upper, acc, cur):
        if pos == n - 1:
            last = total - acc
            if floor <= last <= upper:
                out.append(tuple(cur + [last]))
            return
        hi = min(upper, prefix[pos] - acc)
        for v in range(hi, floor - 1, -1):
            # remaining parts are between floor and v
            rest = n - pos - 1
            rem = total - acc - v
            if rem < floor * rest or rem > v * rest:
                continue
            rec(pos + 1, v, acc + v, cur + [v])

    rec(0, lam[0], 0, [])
    out.sort(reverse=True)
    return out


def partitions(size: int, n: int) -> list[tuple[int, ...]]:
    """Dominant weights with nonnegative parts, length n, summing to size."""
    out = []

    def rec(rem, maxpart, cur):
        if len(cur) == n:
            if rem == 0:
                out.append(tuple(cur))
            return
        for v in range(min(rem, maxpart), -1, -1):
            rec(rem - v, v, cur + [v])

    rec(size, size, [])
    return out


def dominant_weights(max_size: int, n: int) -> list[tuple[int, ...]]:
    return [lam for d in range(max_size + 1) for lam in partitions(d, n)]


def delta(n: int) -> tuple[int, ...]:
    return tuple(range(n - 1, -1, -1))


def two_rho(n: int) -> tuple[int, ...]:
    return tuple(n + 1 - 2 * i for i in range(1, n + 1))


# ------------------------------------------------------ Laurent polynomials

class LaurentPoly:
    """Sparse Laurent polynomial in x_1..x_n with RatFunc coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError("exponent length does not match rank")
                c = RatFunc(c) if not isinstance(c, RatFunc) else c
                if not c.is_zero():
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _wrap(cls, n, terms):
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, n, c=1):
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, exp, c=1):
        return cls(len(exp), {tuple(exp): c})

    @classmethod
    def var(cls, n, i, power=1):
        e = [0] * n
        e[i - 1] = power
        return cls(n, {tuple(e): ONE})

    def copy(self):
        return LaurentPoly._wrap(self.n, dict(self.terms))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if isinstance(other, LaurentPoly):
            if other.n != self.n:
                raise ValueError("rank mismatch")
            return other
        return LaurentPoly.constant(self.n, other)

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(e, None)
            else:
                out[e] = v
        return LaurentPoly._wrap(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        c = RatFunc(c) if not isinstance(c, RatFunc) else c
        if c.is_zero():
            return LaurentPoly._wrap(self.n, {})
        return LaurentPoly._wrap(self.n, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        other = self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return LaurentPoly._wrap(self.n, {e: c for e, c in out.items() if not c.is_zero()})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = LaurentPoly.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.n == other.n and self.terms == other.terms
        try:
            return self.terms == LaurentPoly.constant(self.n, other).terms
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def coefficient(self, exp) -> RatFunc:
        return self.terms.get(tuple(exp), ZERO)

    def permute(self, w):
        """Substitute x_i -> x_{w[i]} (w a 0-indexed tuple)."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.n
            for i, a in enumerate(e):
                ne[w[i]] += a
            out[tuple(ne)] = c
        return LaurentPoly._wrap(self.n, out)

    def shift(self, w, mu):
        """f(q^{2 mu_1} x_{w[0]}, ..., q^{2 mu_n} x_{w[n-1]})."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.n
            s = 0
            for i, a in enumerate(e):
                ne[w[i]] += a
                s += 2 * mu[i] * a
            out[tuple(ne)] = c * Q ** s if s else c
        return LaurentPoly._wrap(self.n, out)

    def is_symmetric(self) -> bool:
        for i in range(self.n - 1):
            w = list(range(self.n))
            w[i], w[i + 1] = w[i + 1], w[i]
            if self.permute(tuple(w)) != self:
                return False
        return True

    def map_coeffs(self, f):
        out = {}
        for e, c in self.terms.items():
            v = f(c)
            if not v.is_zero():
                out[e] = v
        return LaurentPoly._wrap(self.n, out)

    def specialize_t(self, k):
        return self.map_coeffs(lambda c: c.specialize_t(k))

    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def to_monomial_basis(self) -> dict:
        """Expansion {dominant lam: coeff} of a symmetric polynomial in the m-basis."""
        if not self.is_symmetric():
            raise ValueError("polynomial is not symmetric")
        return {e: c for e, c in self.terms.items() if is_dominant(e)}

    def to_xrat(self) -> "XRatFunc":
        cls = xfield(self.n)
        return cls.from_laurent(self)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-a for a in e])):
            mono = "*".join(
                (f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}") for i, a in enumerate(e) if a
            ) or "1"
            c = self.terms[e]
            parts.append(f"({c}) * {mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self.n}, {self})"


def monomial_sym(lam) -> LaurentPoly:
    lam = tuple(lam)
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    return LaurentPoly(len(lam), {p: ONE for p in set(itertools.permutations(lam))})


def elementary(r: int, sign: int, n: int) -> LaurentPoly:
    if not 1 <= r <= n:
        raise ValueError(f"elementary index {r} out of range 1..{n}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    terms = {}
    for subset in itertools.combinations(range(n), r):
        e = [0] * n
        for i in subset:
            e[i] = sign
        terms[tuple(e)] = ONE
    return LaurentPoly(n, terms)


# ----------------------------------------------------------- x-rational

class XRatFunc(_Fraction):
    """Element of Q(q, t, x_1..x_n); concrete subclasses come from xfield(n)."""

    __slots__ = ()
    n: int

    def _convert(self, other):
        if isinstance(other, RatFunc):
            return type(self).from_ratfunc(other)
        if isinstance(other, LaurentPoly) and other.n == self.n:
            return type(self).from_laurent(other)
        return None

    @classmethod
    def _embed(cls, p):
        # Z[q,t] -> Z[q,t,x]
        pad = (0,) * cls.n
        return cls.field.ctx.from_dict({tuple(int(a) for a in e) + pad: c for e, c in p.to_dict().items()})

    @classmethod
    def from_ratfunc(cls, c: RatFunc):
        return cls._raw(cls._embed(c.num), cls._embed(c.den))

    @classmethod
    def x(cls, i, power=1):
        g = cls.field.gens()[2 + i]
        if power >= 0:
            return cls._raw(g ** power, cls.field._one)
        return cls._raw(cls.field._one, g ** (-power))

    @classmethod
    def from_laurent(cls, f: LaurentPoly):
        if not f.terms:
            return cls.constant(0)
        n = cls.n
        shift = [min(e[i] for e in f.terms) for i in range(n)]
        shift = [min(s, 0) for s in shift]
        # common denominator of the q,t coefficients
        den = None
        for c in f.terms.values():
            if den is None:
                den = c.den
            elif c.den != den:
                g = den.gcd(c.den)
                den = den * (c.den / g)
        num_terms = {}
        for e, c in f.terms.items():
            scale = den / c.den
            p = c.num * scale
            xe = tuple(a - s for a, s in zip(e, shift))
            for me, mc in p.to_dict().items():
                key = (int(me[0]), int(me[1])) + xe
                num_terms[key] = num_terms.get(key, 0) + mc
        ctx = cls.field.ctx
        num = ctx.from_dict({k: v for k, v in num_terms.items() if v != 0})
        dterms = {(int(me[0]), int(me[1])) + tuple(-s for s in shift): mc for me, mc in den.to_dict().items()}
        return cls.from_polys(num, ctx.from_dict(dterms))

    def to_laurent(self) -> LaurentPoly:
        n = self.n
        dd = {tuple(int(a) for a in e): c for e, c in self.den.to_dict().items()}
        xparts = {e[2:] for e in dd}
        if len(xparts) != 1:
            raise NonLaurentError(f"denominator depends on x: {self}")
        (xs,) = xparts
        qt = RatFunc.field.ctx
        dpoly = qt.from_dict({e[:2]: c for e, c in dd.items()})
        groups: dict = {}
        for e, c in self.num.to_dict().items():
            e = tuple(int(a) for a in e)
            groups.setdefault(tuple(a - b for a, b in zip(e[2:], xs)), {})[e[:2]] = c
        terms = {}
        for xe, d in groups.items():
            terms[xe] = RatFunc.from_polys(qt.from_dict(d), dpoly)
        return LaurentPoly._wrap(n, terms)

    def act(self, w, mu):
        """c(q^{2 mu_1} x_{w[0]}, ..., q^{2 mu_n} x_{w[n-1]})."""
        if self.num.is_zero() or (not any(mu) and all(i == a for i, a in enumerate(w))):
            return self
        n = self.n
        num = self._act_poly(self.num, w, mu)
        den = self._act_poly(self.den, w, mu)
        sq = min(min(e[0] for e in num), min(e[0] for e in den))
        ctx = self.field.ctx
        if sq:
            num = {(e[0] - sq,) + e[1:]: c for e, c in num.items()}
            den = {(e[0] - sq,) + e[1:]: c for e, c in den.items()}
        pn = ctx.from_dict(num)
        pd = ctx.from_dict(den)
        if _lowest_coeff(pd) < 0:
            pn, pd = -pn, -pd
        return type(self)._raw(pn, pd)

    @staticmethod
    def _act_poly(p, w, mu):
        out = {}
        for e, c in p.to_dict().items():
            e = [int(a) for a in e]
            ne = [e[0], e[1]] + [0] * len(w)
            s = 0
            for i in range(len(w)):
                a = e[2 + i]
                if a:
                    ne[2 + w[i]] += a
                    s += 2 * mu[i] * a
            ne[0] += s
            out[tuple(ne)] = c
        return out

    def specialize(self, images):
        """Substitute (q, t) by RatFunc images (None keeps the variable)."""
        cls = type(self)
        full = [None if v is None else cls.from_ratfunc(v) for v in images] + [None] * self.n
        return self.substitute(full)


@lru_cache(maxsize=None)
def xfield(n: int):
    names = ("q", "t") + tuple(f"x{i}" for i in range(1, n + 1))
    cls = type(f"XRatFunc{n}", (XRatFunc,), {"__slots__": (), "field": FractionField(names), "n": n})
    return cls
