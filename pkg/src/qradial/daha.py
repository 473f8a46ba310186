"""Difference-reflection operators and the polynomial representation of the DAHA.

An ``AffineOp`` is a finite sum of terms ``c(x) * D[w, mu]`` where
``D[w, mu] f (x) = f(q^{2 mu_1} x_{w(1)}, ..., q^{2 mu_n} x_{w(n)})``.
Permutations are 0-indexed tuples and shifts are exponents of q^2.

With this convention ``D[w, mu] D[v, nu] = D[w.v, nu + mu.v]`` where
``(w.v)(j) = w(v(j))`` and ``(mu.v)_j = mu_{v(j)}``, and moving a coefficient
to the left gives ``D[w, mu] c = c^{(w, mu)} D[w, mu]``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .coeff import ONE, Q, T, RatFunc, q_fact
from .laurent import LaurentPoly, XRatFunc, elementary, xfield

__all__ = [
    "AffineOp",
    "compose",
    "gen_T",
    "gen_T_inv",
    "gen_X",
    "gen_pi",
    "gen_pi_inv",
    "gen_Y",
    "gen_Y_inv",
    "shift_op",
    "symmetrizer",
    "hecke_T_w",
    "spherical_power",
    "elementary_Y",
    "elementary_X",
    "spherical",
    "macdonald_operator",
    "macdonald_operator_sum",
    "bidegree",
    "commutator",
    "relation_checks",
]


def _identity(n):
    return tuple(range(n))


def _compose_key(k1, k2):
    w, mu = k1
    v, nu = k2
    return (tuple(w[j] for j in v), tuple(nu[j] + mu[v[j]] for j in range(len(v))))


def _cycles(w) -> str:
    seen = set()
    out = []
    for start in range(len(w)):
        if start in seen or w[start] == start:
            seen.add(start)
            continue
        cyc = [start]
        seen.add(start)
        j = w[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = w[j]
        out.append("(" + " ".join(str(i + 1) for i in cyc) + ")")
    return "".join(out) or "id"


class AffineOp:
    """Finite sum of x-rational coefficients times permutation-shift operators."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        X = xfield(n)
        clean = {}
        for key, c in (terms or {}).items():
            if not isinstance(c, XRatFunc):
                c = X.constant(0) + c
            if not c.is_zero():
                clean[(tuple(key[0]), tuple(key[1]))] = c
        self.terms = clean

    @classmethod
    def _wrap(cls, n, terms):
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def identity(cls, n):
        return cls(n, {(_identity(n), (0,) * n): 1})

    @classmethod
    def zero(cls, n):
        return cls._wrap(n, {})

    @classmethod
    def multiplication(cls, c):
        """Multiplication by an XRatFunc, RatFunc or LaurentPoly."""
        if isinstance(c, LaurentPoly):
            n = c.n
            c = c.to_xrat()
        else:
            n = c.n
        return cls(n, {(_identity(n), (0,) * n): c})

    # -- linear structure --------------------------------------------
    def _same(self, other):
        if not isinstance(other, AffineOp):
            return AffineOp.identity(self.n).scale(other)
        if other.n != self.n:
            raise ValueError("rank mismatch between operators")
        return other

    def __add__(self, other):
        other = self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(k, None)
            else:
                out[k] = v
        return AffineOp._wrap(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return AffineOp._wrap(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def scale(self, c):
        X = xfield(self.n)
        if not isinstance(c, XRatFunc):
            c = X.constant(0) + c
        if c.is_zero():
            return AffineOp.zero(self.n)
        return AffineOp._wrap(self.n, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AffineOp):
            return compose(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = AffineOp.identity(self.n)
        for _ in range(k):
            out = compose(self, out)
        return out

    def __eq__(self, other):
        if not isinstance(other, AffineOp):
            other = self._same(other)
        return self.n == other.n and (self - other).is_zero()

    def __hash__(self):
        return hash((self.n, frozenset(self.terms)))

    def is_zero(self):
        return not self.terms

    # -- action -------------------------------------------------------
    def apply(self, f):
        """Apply to a LaurentPoly (result must be Laurent) or an XRatFunc."""
        if isinstance(f, LaurentPoly):
            if f.n != self.n:
                raise ValueError("rank mismatch")
            X = xfield(self.n)
            total = X.constant(0)
            for (w, mu), c in self.terms.items():
                total = total + c * X.from_laurent(f.shift(w, mu))
            return total.to_laurent()
        total = type(f).constant(0)
        for (w, mu), c in self.terms.items():
            total = total + c * f.act(w, mu)
        return total

    def map_coeffs(self, fn):
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[k] = v
        return AffineOp._wrap(self.n, out)

    def specialize(self, q=None, t=None):
        """Specialize the parameters q, t to RatFunc values in every coefficient."""
        return self.map_coeffs(lambda c: c.specialize([q, t]))

    def inverse_monomial(self):
        """Inverse of a single-term operator c * D[w, mu]."""
        if len(self.terms) != 1:
            raise ValueError("only single-term operators are inverted directly")
        ((w, mu), c), = self.terms.items()
        winv = [0] * self.n
        for i, a in enumerate(w):
            winv[a] = i
        winv = tuple(winv)
        nu = tuple(-mu[winv[j]] for j in range(self.n))
        # (c D)^{-1} = D^{-1} c^{-1} = (c^{-1})^{D^{-1}} D^{-1}
        cinv = c.inverse().act(winv, nu)
        return AffineOp._wrap(self.n, {(winv, nu): cinv})

    def __str__(self):
        if not self.terms:
            return "0"
        lines = []
        for (w, mu), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            lines.append(f"({c}) · {_cycles(w)} · T_{{q²}}^{{{','.join(map(str, mu))}}}")
        return "\n".join(lines)

    def __repr__(self):
        return f"AffineOp(n={self.n}, terms={len(self.terms)})"


def compose(A: AffineOp, B: AffineOp) -> AffineOp:
    if A.n != B.n:
        raise ValueError("rank mismatch between operators")
    out: dict = {}
    for k1, c1 in A.terms.items():
        w, mu = k1
        for k2, c2 in B.terms.items():
            key = _compose_key(k1, k2)
            v = c1 * c2.act(w, mu)
            prev = out.get(key)
            out[key] = v if prev is None else prev + v
    return AffineOp._wrap(A.n, {k: c for k, c in out.items() if not c.is_zero()})


def commutator(A: AffineOp, B: AffineOp) -> AffineOp:
    return compose(A, B) - compose(B, A)


# ------------------------------------------------------------- generators

def _check_index(i, lo, hi, what):
    if not lo <= i <= hi:
        raise IndexError(f"{what} index {i} out of range {lo}..{hi}")


@lru_cache(maxsize=None)
def gen_T(i: int, n: int) -> AffineOp:
    """Demazure-Lusztig operator t s_i + (t - t^-1)(s_i - 1)/(x_i/x_{i+1} - 1)."""
    _check_index(i, 1, n - 1, "T")
    X = xfield(n)
    w = list(range(n))
    w[i - 1], w[i] = w[i], w[i - 1]
    tt = X.from_ratfunc(T - T.inverse())
    frac = tt / (X.x(i - 1) / X.x(i) - 1)
    zero = (0,) * n
    return AffineOp(n, {(tuple(w), zero): X.from_ratfunc(T) + frac, (_identity(n), zero): -frac})


@lru_cache(maxsize=None)
def gen_T_inv(i: int, n: int) -> AffineOp:
    return gen_T(i, n) - (T - T.inverse())


@lru_cache(maxsize=None)
def gen_X(j: int, n: int, power: int = 1) -> AffineOp:
    _check_index(j, 1, n, "X")
    X = xfield(n)
    return AffineOp(n, {(_identity(n), (0,) * n): X.x(j - 1, power)})


@lru_cache(maxsize=None)
def gen_pi(n: int) -> AffineOp:
    """f(x_1..x_n) -> f(x_2, ..., x_n, q^-2 x_1)."""
    w = tuple((j + 1) % n for j in range(n))
    mu = (0,) * (n - 1) + (-1,)
    return AffineOp(n, {(w, mu): 1})


@lru_cache(maxsize=None)
def gen_pi_inv(n: int) -> AffineOp:
    return gen_pi(n).inverse_monomial()


def shift_op(n: int, mu) -> AffineOp:
    """T_{q^2}^{mu}: f(x) -> f(q^{2 mu_1} x_1, ...)."""
    return AffineOp(n, {(_identity(n), tuple(mu)): 1})


def _product(ops, n):
    out = AffineOp.identity(n)
    for op in reversed(ops):
        out = compose(op, out)
    return out


@lru_cache(maxsize=None)
def gen_Y(i: int, n: int) -> AffineOp:
    """Y_i = T_i ... T_{n-1} pi^-1 T_1^-1 ... T_{i-1}^-1."""
    _check_index(i, 1, n, "Y")
    ops = [gen_T(j, n) for j in range(i, n)] + [gen_pi_inv(n)]
    ops += [gen_T_inv(j, n) for j in range(1, i)]
    return _product(ops, n)


@lru_cache(maxsize=None)
def gen_Y_inv(i: int, n: int) -> AffineOp:
    """Y_i^-1 = T_{i-1} ... T_1 pi T_{n-1}^-1 ... T_i^-1."""
    _check_index(i, 1, n, "Y")
    ops = [gen_T(j, n) for j in range(i - 1, 0, -1)] + [gen_pi(n)]
    ops += [gen_T_inv(j, n) for j in range(n - 1, i - 1, -1)]
    return _product(ops, n)


def _reduced_word(w):
    """A reduced word (list of 1-based simple reflections) for permutation w."""
    w = list(w)
    word = []
    # bubble sort records descents; w = s_{i1} ... s_{ik}
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i + 1)
                changed = True
    return word[::-1]


@lru_cache(maxsize=None)
def hecke_T_w(w: tuple, n: int) -> AffineOp:
    return _product([gen_T(i, n) for i in _reduced_word(w)], n)


@lru_cache(maxsize=None)
def symmetrizer(n: int) -> AffineOp:
    """The idempotent (sum_w t^{l(w)} T_w) / [n]_{t^2}!."""
    total = AffineOp.zero(n)
    for w in itertools.permutations(range(n)):
        ell = len(_reduced_word(w))
        total = total + hecke_T_w(w, n).scale(T ** ell)
    return total.scale(q_fact(n, "t2").inverse())


def spherical(A: AffineOp) -> AffineOp:
    s = symmetrizer(A.n)
    return compose(s, compose(A, s))


@lru_cache(maxsize=None)
def elementary_Y(r: int, sign: int, n: int) -> AffineOp:
    """e_r(Y_1^{sign}, ..., Y_n^{sign}) built by composition."""
    gens = [gen_Y(i, n) if sign > 0 else gen_Y_inv(i, n) for i in range(1, n + 1)]
    total = AffineOp.zero(n)
    for subset in itertools.combinations(range(n), r):
        total = total + _product([gens[i] for i in subset], n)
    return total


def elementary_X(r: int, sign: int, n: int) -> AffineOp:
    return AffineOp.multiplication(elementary(r, sign, n))


@lru_cache(maxsize=None)
def spherical_power(a: int, b: int, n: int) -> AffineOp:
    """P_{a,-b} = s (sum_i X_i^a Y_i^{-b}) s."""
    if a < 0 or b < 0:
        raise ValueError("spherical_power takes a, b >= 0")
    inner = AffineOp.zero(n)
    for i in range(1, n + 1):
        term = gen_X(i, n, a) if a else AffineOp.identity(n)
        if b:
            term = compose(term, gen_Y_inv(i, n) ** b)
        inner = inner + term
    return spherical(inner)


def macdonald_operator_sum(r: int, sign: int, n: int) -> AffineOp:
    """The bare subset sum with the t^2 cross-ratio products (no normalization)."""
    if not 1 <= r <= n:
        raise IndexError(f"r={r} out of range 1..{n}")
    X = xfield(n)
    t2 = X.from_ratfunc(T ** 2)
    total = {}
    for subset in itertools.combinations(range(n), r):
        c = X.constant(1)
        for i in subset:
            for j in range(n):
                if j in subset:
                    continue
                ratio = X.x(i) / X.x(j) if sign > 0 else X.x(j) / X.x(i)
                c = c * (t2 * ratio - 1) / (ratio - 1)
        mu = tuple((sign if j in subset else 0) for j in range(n))
        total[(_identity(n), mu)] = c
    return AffineOp(n, total)


@lru_cache(maxsize=None)
def macdonald_operator(r: int, sign: int, n: int) -> AffineOp:
    """Closed form of r(s e_r(Y^{sign}) s) on symmetric functions.

    The bare subset sum equals t^{r(n-r)} times the spherical operator, so the
    prefactor t^{-r(n-r)} is applied here.
    """
    return macdonald_operator_sum(r, sign, n).scale(T ** (-r * (n - r)))


# ---------------------------------------------------------------- grading

def _scalar_ratio(A: AffineOp, B: AffineOp):
    """c with A = c B for a scalar RatFunc c, or None."""
    if set(A.terms) != set(B.terms):
        return None
    ratio = None
    for k, c in A.terms.items():
        r = c / B.terms[k]
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    if ratio is None:
        return None
    return ratio


def _q_power(c) -> int | None:
    """Exponent e when the XRatFunc c equals q^e, else None."""
    num = c.num.to_dict()
    den = c.den.to_dict()
    if len(num) != 1 or len(den) != 1:
        return None
    (en, cn), = num.items()
    (ed, cd), = den.items()
    if cn != cd or any(en[1:]) or any(ed[1:]):
        return None
    return int(en[0]) - int(ed[0])


def bidegree(A: AffineOp):
    """(a, b) from conjugation by s X_1..X_n s and s Y_1..Y_n s, or 'inhomogeneous'.

    Conjugating by the Y-product scales X-degree a by q^{2a}; conjugating by
    the X-product scales Y-degree b by q^{-2b}.
    """
    n = A.n
    if A.is_zero():
        return "inhomogeneous"
    xprod = _product([gen_X(i, n) for i in range(1, n + 1)], n)
    xinv = _product([gen_X(i, n, -1) for i in range(1, n + 1)], n)
    yprod = _product([gen_Y(i, n) for i in range(1, n + 1)], n)
    yinv = _product([gen_Y_inv(i, n) for i in range(n, 0, -1)], n)
    cx = compose(spherical(xprod), compose(A, spherical(xinv)))
    cy = compose(spherical(yprod), compose(A, spherical(yinv)))
    rx = _scalar_ratio(cx, A)
    ry = _scalar_ratio(cy, A)
    if rx is None or ry is None:
        return "inhomogeneous"
    ex, ey = _q_power(rx), _q_power(ry)
    if ex is None or ey is None or ex % 2 or ey % 2:
        return "inhomogeneous"
    return (ey // 2, -ex // 2)


# ---------------------------------------------------------------- relations

def relation_checks(n: int):
    """Every relation of the Y-presentation as an exact operator identity."""
    from .report import VerificationReport

    rep = VerificationReport("daha-relations", {"n": n})
    Tg = {i: gen_T(i, n) for i in range(1, n)}
    Ti = {i: gen_T_inv(i, n) for i in range(1, n)}
    X = {j: gen_X(j, n) for j in range(1, n + 1)}
    Y = {j: gen_Y(j, n) for j in range(1, n + 1)}
    Yi = {j: gen_Y_inv(j, n) for j in range(1, n + 1)}
    one = AffineOp.identity(n)
    t = T
    for i in range(1, n):
        rep.add(f"quadratic T{i}", ((Tg[i] - t) * (Tg[i] + t.inverse())).is_zero())
        rep.add(f"inverse T{i}", Tg[i] * Ti[i] == one)
        if i + 1 < n:
            rep.add(f"braid T{i}T{i+1}", Tg[i] * Tg[i + 1] * Tg[i] == Tg[i + 1] * Tg[i] * Tg[i + 1])
        for j in range(i + 2, n):
            rep.add(f"far T{i}T{j}", Tg[i] * Tg[j] == Tg[j] * Tg[i])
        rep.add(f"T{i}X{i}T{i}=X{i+1}", Tg[i] * X[i] * Tg[i] == X[i + 1])
        rep.add(f"T{i}^-1Y{i}T{i}^-1=Y{i+1}", Ti[i] * Y[i] * Ti[i] == Y[i + 1])
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                rep.add(f"T{i}X{j}=X{j}T{i}", Tg[i] * X[j] == X[j] * Tg[i])
                rep.add(f"T{i}Y{j}=Y{j}T{i}", Tg[i] * Y[j] == Y[j] * Tg[i])
    for j in range(1, n + 1):
        rep.add(f"inverse Y{j}", Y[j] * Yi[j] == one and Yi[j] * Y[j] == one)
        for k in range(j + 1, n + 1):
            rep.add(f"X{j}X{k}=X{k}X{j}", X[j] * X[k] == X[k] * X[j])
            rep.add(f"Y{j}Y{k}=Y{k}Y{j}", Y[j] * Y[k] == Y[k] * Y[j])
    xprod = _product(list(X.values()), n)
    yprod = _product(list(Y.values()), n)
    for j in range(1, n + 1):
        rep.add(f"Yprod X{j} = q^2 X{j} Yprod", yprod * X[j] == (X[j] * yprod).scale(Q ** 2))
        rep.add(f"Xprod Y{j} = q^-2 Y{j} Xprod", xprod * Y[j] == (Y[j] * xprod).scale(Q ** -2))
    if n >= 2:
        rep.add("X1Y2=Y2T1^2X1", X[1] * Y[2] == Y[2] * Tg[1] * Tg[1] * X[1])
    pi = gen_pi(n)
    rep.add("pi X_n = q^-2 X_1 pi", pi * X[n] == (X[1] * pi).scale(Q ** -2))
    for i in range(1, n - 1):
        rep.add(f"pi T{i} = T{i+1} pi", pi * Tg[i] == Tg[i + 1] * pi)
    return rep.finish()
