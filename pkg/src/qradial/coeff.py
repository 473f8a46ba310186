"""Exact rational functions in q and t with integer coefficients.

Values are stored as a reduced pair of integer polynomials (numerator,
denominator) backed by FLINT multivariate polynomials.  Reduction divides
out the polynomial gcd and fixes the sign so that the lowest term of the
denominator (ascending graded-lex order) is positive.  Because the
representative is unique, equality is structural.

The printed form is Laurent-friendly: any monomial factor of the denominator
is moved into the numerator as negative exponents, so ``1/q`` prints as
``q^-1``.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from numbers import Rational

import flint

__all__ = [
    "RatFunc",
    "FractionField",
    "Q",
    "T",
    "ONE",
    "ZERO",
    "q_int",
    "q_fact",
    "specialize_t",
    "eval_rational",
    "PoleError",
]


class PoleError(ZeroDivisionError):
    """A specialization or evaluation hit a zero denominator."""


def _lowest_coeff(p):
    # flint keeps terms sorted descending in deglex; the last one is lowest
    return p.coeffs()[-1]


def _reduce(num, den):
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return num, den.context().constant(1)
    if not den.is_one():
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        if _lowest_coeff(den) < 0:
            num, den = -num, -den
    return num, den


def _laurent_terms(num, den):
    """Split den = monomial * rest and return (Laurent terms of num, rest)."""
    nd = {tuple(int(a) for a in e): c for e, c in den.to_dict().items()}
    nvars = den.context().nvars()
    shift = [min(e[i] for e in nd) for i in range(nvars)]
    if any(shift):
        ctx = den.context()
        rest = ctx.from_dict({tuple(a - s for a, s in zip(e, shift)): c for e, c in nd.items()})
    else:
        rest = den
    terms = {tuple(int(a) - s for a, s in zip(e, shift)): int(c) for e, c in num.to_dict().items()}
    return terms, rest


def _term_key(exp):
    # ascending graded-lex with the first variable most significant
    return (sum(exp), exp)


def format_terms(terms: dict, names) -> str:
    """Render a Laurent polynomial {exponent tuple: int} in ascending order."""
    if not terms:
        return "0"
    parts = []
    for exp in sorted(terms, key=_term_key):
        c = terms[exp]
        mono = "*".join(
            (v if e == 1 else f"{v}^{e}") for v, e in zip(names, exp) if e != 0
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


class FractionField:
    """Field of fractions of Z[v_1..v_m]; hands out elements of one class."""

    def __init__(self, names):
        self.names = tuple(names)
        self.ctx = flint.fmpz_mpoly_ctx.get(self.names, "deglex")
        self._one = self.ctx.constant(1)

    def gens(self):
        return self.ctx.gens()


class _Fraction:
    """Shared arithmetic for reduced fractions of FLINT polynomials."""

    __slots__ = ("num", "den", "_hash")
    field: FractionField

    # -- construction -------------------------------------------------
    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def from_polys(cls, num, den=None):
        if den is None:
            den = num.context().constant(1)
        num, den = _reduce(num, den)
        return cls._raw(num, den)

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        ctx = self.num.context()
        if isinstance(other, int):
            return type(self)._raw(ctx.constant(other), ctx.constant(1))
        if isinstance(other, Rational):
            return type(self).from_polys(ctx.constant(int(other.numerator)),
                                         ctx.constant(int(other.denominator)))
        conv = getattr(type(self), "_convert", None)
        if conv is not None:
            res = conv(self, other)
            if res is not None:
                return res
        return NotImplemented

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        a = self
        if b.num.is_zero():
            return a
        if a.num.is_zero():
            return b
        if a.den == b.den:
            if a.den.is_one():
                return type(self)._raw(a.num + b.num, a.den)
            n = a.num + b.num
            return type(self).from_polys(n, a.den)
        g = a.den.gcd(b.den)
        if g.is_one():
            n = a.num * b.den + b.num * a.den
            if n.is_zero():
                return type(self)._raw(n, a.num.context().constant(1))
            d = a.den * b.den
            if _lowest_coeff(d) < 0:
                n, d = -n, -d
            return type(self)._raw(n, d)
        ad = a.den / g
        bd = b.den / g
        n = a.num * bd + b.num * ad
        return type(self).from_polys(n, ad * b.den)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(-self.num, self.den)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        a = self
        if a.num.is_zero() or b.num.is_zero():
            ctx = a.num.context()
            return type(self)._raw(ctx.constant(0), ctx.constant(1))
        if a.den.is_one() and b.den.is_one():
            return type(self)._raw(a.num * b.num, a.den)
        an, ad, bn, bd = a.num, a.den, b.num, b.den
        if not bd.is_one():
            g = an.gcd(bd)
            if not g.is_one():
                an = an / g
                bd = bd / g
        if not ad.is_one():
            g = bn.gcd(ad)
            if not g.is_one():
                bn = bn / g
                ad = ad / g
        n = an * bn
        d = ad * bd
        if _lowest_coeff(d) < 0:
            n, d = -n, -d
        return type(self)._raw(n, d)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        n, d = self.den, self.num
        if _lowest_coeff(d) < 0:
            n, d = -n, -d
        return type(self)._raw(n, d)

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return self * b.inverse()

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return b * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return type(self)._raw(self.num ** k, self.den ** k)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return self.num == b.num and self.den == b.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self.num.to_dict().items()),
                               tuple(self.den.to_dict().items())))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(int(self.num.coefficient(0)) if not self.num.is_zero() else 0,
                        int(self.den.coefficient(0)))

    def is_laurent_polynomial(self) -> bool:
        """True when the denominator is a monomial (unit in the Laurent ring)."""
        return len(self.den.to_dict()) == 1 and abs(int(_lowest_coeff(self.den))) == 1

    def __str__(self):
        names = self.field.names
        terms, rest = _laurent_terms(self.num, self.den)
        rest_terms = {tuple(map(int, e)): int(c) for e, c in rest.to_dict().items()}
        if len(rest_terms) == 1 and next(iter(rest_terms.values())) == 1 and not any(next(iter(rest_terms))):
            return format_terms(terms, names)
        ns = format_terms(terms, names)
        ds = format_terms(rest_terms, names)
        if len(terms) > 1:
            ns = f"({ns})"
        if len(rest_terms) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"{type(self).__name__}('{self}')"

    # -- parsing ------------------------------------------------------
    @classmethod
    def parse(cls, text: str):
        """Parse an expression in +, -, *, /, ^ over integers and the field's variables."""
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse {text!r}") from exc
        gens = dict(zip(cls.field.names, cls.field.gens()))

        def ev(node):
            if isinstance(node, ast.Expression):
                return ev(node.body)
            if isinstance(node, ast.Constant) and isinstance(node.value, int):
                return cls.constant(node.value)
            if isinstance(node, ast.Name) and node.id in gens:
                return cls.from_polys(gens[node.id])
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
                v = ev(node.operand)
                return -v if isinstance(node.op, ast.USub) else v
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Pow):
                    expo = node.right
                    sign = 1
                    if isinstance(expo, ast.UnaryOp) and isinstance(expo.op, ast.USub):
                        sign, expo = -1, expo.operand
                    if not (isinstance(expo, ast.Constant) and isinstance(expo.value, int)):
                        raise ValueError(f"non-integer exponent in {text!r}")
                    return ev(node.left) ** (sign * expo.value)
                left, right = ev(node.left), ev(node.right)
                if isinstance(node.op, ast.Add):
                    return left + right
                if isinstance(node.op, ast.Sub):
                    return left - right
                if isinstance(node.op, ast.Mult):
                    return left * right
                if isinstance(node.op, ast.Div):
                    return left / right
            raise ValueError(f"unsupported syntax in {text!r}")

        return ev(tree)

    @classmethod
    def constant(cls, value):
        ctx = cls.field.ctx
        if isinstance(value, int):
            return cls._raw(ctx.constant(value), ctx.constant(1))
        value = Fraction(value)
        return cls.from_polys(ctx.constant(value.numerator), ctx.constant(value.denominator))

    # -- evaluation ---------------------------------------------------
    def evaluate(self, values) -> Fraction:
        """Exact value at a rational point given in variable order."""
        vals = [Fraction(v) for v in values]
        d = _eval_poly(self.den, vals)
        if d == 0:
            raise PoleError(f"pole of {self} at {values}")
        return _eval_poly(self.num, vals) / d

    def substitute(self, images):
        """Substitute each variable by an element of the same class (None keeps it)."""
        cls = type(self)
        gens = [cls.from_polys(g) for g in cls.field.gens()]
        imgs = [gens[i] if v is None else v for i, v in enumerate(images)]
        n = _subst_poly(self.num, imgs, cls)
        d = _subst_poly(self.den, imgs, cls)
        if d.is_zero():
            raise PoleError(f"denominator of {self} vanishes under substitution")
        return n / d


def _eval_poly(p, vals):
    total = Fraction(0)
    for exp, c in p.to_dict().items():
        term = Fraction(int(c))
        for v, e in zip(vals, exp):
            if e:
                term *= v ** int(e)
        total += term
    return total


def _subst_poly(p, imgs, cls):
    total = cls.constant(0)
    cache = {}
    for exp, c in p.to_dict().items():
        term = cls.constant(int(c))
        for i, e in enumerate(exp):
            if e:
                e = int(e)
                key = (i, e)
                if key not in cache:
                    cache[key] = imgs[i] ** e
                term = term * cache[key]
        total = total + term
    return total


QT_FIELD = FractionField(("q", "t"))


class RatFunc(_Fraction):
    """Element of Q(q, t)."""

    __slots__ = ()
    field = QT_FIELD

    def __new__(cls, value=0):
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls.constant(value)

    def __reduce__(self):
        return (RatFunc.parse, (str(self),))

    def involves_t(self) -> bool:
        return any(e[1] for e in self.num.to_dict()) or any(e[1] for e in self.den.to_dict())

    def is_integral_laurent_q(self) -> bool:
        """Membership in Z[q, q^-1] (the integral lattice coefficient ring)."""
        return (not self.involves_t()) and self.is_laurent_polynomial()

    def at_q1(self) -> Fraction:
        """Value at q = 1 for a q-only function; errors on a pole."""
        if self.involves_t():
            raise ValueError(f"{self} depends on t")
        return self.evaluate((1, 0))

    def specialize_t(self, k: int) -> "RatFunc":
        return specialize_t(self, k)

    def q_exponent_shift(self, s: int) -> "RatFunc":
        return self * Q ** s

    def invert_q(self) -> "RatFunc":
        """The image under q -> q^-1."""
        return self.substitute([Q.inverse(), None])


Q = RatFunc.from_polys(QT_FIELD.gens()[0])
T = RatFunc.from_polys(QT_FIELD.gens()[1])
ONE = RatFunc(1)
ZERO = RatFunc(0)


def _base(base) -> RatFunc:
    if isinstance(base, RatFunc):
        return base
    table = {"q": Q, "t": T, "q2": Q ** 2, "t2": T ** 2, "q^2": Q ** 2, "t^2": T ** 2}
    try:
        return table[base]
    except KeyError:
        raise ValueError(f"unknown base {base!r}") from None


def q_int(k: int, base="q") -> RatFunc:
    """[k]_s = (1 - s^k)/(1 - s); for k < 0 it is (1 - s^k)/(1 - s^{-1})."""
    s = _base(base)
    if k >= 0:
        total = ZERO
        p = ONE
        for _ in range(k):
            total = total + p
            p = p * s
        return total
    return (1 - s ** k) / (1 - s ** -1)


def q_fact(k: int, base="q") -> RatFunc:
    if k < 0:
        raise ValueError("factorial of a negative integer")
    out = ONE
    for j in range(1, k + 1):
        out = out * q_int(j, base)
    return out


def specialize_t(a: RatFunc, k: int) -> RatFunc:
    """Substitute t = q^k; raises PoleError if the denominator vanishes."""
    return a.substitute([None, Q ** k])


def eval_rational(a: RatFunc, q0, t0) -> Fraction:
    return a.evaluate((q0, t0))
