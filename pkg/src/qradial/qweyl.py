"""The quantum Weyl algebra, its q-difference representation and moment map.

Relations (i > j for the first two, i != j for the third):

    ξ_i ξ_j = q ξ_j ξ_i,    ∂_i ∂_j = q^{-1} ∂_j ∂_i,    ∂_i ξ_j = q ξ_j ∂_i,
    ∂_i ξ_i = 1 + q² ξ_i ∂_i + (q² - 1) Σ_{j<i} ξ_j ∂_j.

Elements are stored in the normal form ξ_1^{a_1}⋯ξ_n^{a_n} ∂_1^{b_1}⋯∂_n^{b_n}.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .coeff import ONE, Q, ZERO, RatFunc
from .linalg import add_into
from .report import VerificationReport

__all__ = [
    "WeylElement",
    "QDiffOp",
    "xi",
    "dd",
    "weyl_mul",
    "qdiff",
    "qdiff_u",
    "moment_w",
    "moment_w_literal",
    "verify_wbasic",
    "weyl_u_action",
    "weyl_relations",
    "word_element",
    "qdiff_word",
    "qdiff_relation_check",
    "moment_exchange_check",
    "monomials_of_degree",
]

Q2 = Q * Q
QQ = Q - Q.inverse()


def _qpow(k):
    return Q ** k if k else ONE


class WeylElement:
    """Sparse combination of normal-ordered monomials, keyed by (a, b)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def one(cls, n, c=ONE):
        z = (0,) * n
        return cls(n, {(z, z): RatFunc(c) if not isinstance(c, RatFunc) else c})

    def __add__(self, other):
        other = _as_weyl(other, self.n)
        out = dict(self.terms)
        add_into(out, other.terms)
        return WeylElement(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_weyl(other, self.n))

    def __rsub__(self, other):
        return _as_weyl(other, self.n) - self

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return weyl_mul(self, other)
        c = RatFunc(other) if not isinstance(other, RatFunc) else other
        return WeylElement(self.n, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = RatFunc(other) if not isinstance(other, RatFunc) else other
        return WeylElement(self.n, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            other = _as_weyl(other, self.n)
        return self.n == other.n and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def degree(self):
        degs = {sum(a) - sum(b) for a, b in self.terms}
        if len(degs) > 1:
            raise ValueError("inhomogeneous element")
        return degs.pop() if degs else 0

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            word = []
            for i, e in enumerate(a):
                if e:
                    word.append(f"ξ{i + 1}" + (f"^{e}" if e > 1 else ""))
            for i, e in enumerate(b):
                if e:
                    word.append(f"∂{i + 1}" + (f"^{e}" if e > 1 else ""))
            mono = "*".join(word)
            if not mono:
                parts.append(f"({c})")
            elif c.is_one():
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


def _as_weyl(x, n):
    if isinstance(x, WeylElement):
        return x
    return WeylElement.one(n, x)


def xi(i: int, n: int) -> WeylElement:
    z = (0,) * n
    a = tuple(int(j == i - 1) for j in range(n))
    return WeylElement(n, {(a, z): ONE})


def dd(i: int, n: int) -> WeylElement:
    z = (0,) * n
    b = tuple(int(j == i - 1) for j in range(n))
    return WeylElement(n, {(z, b): ONE})


# ---------------------------------------------------------------- normal ordering

def _xi_left(i, a, b):
    """ξ_i · ξ^a ∂^b = q^{Σ_{j<i} a_j} ξ^{a+e_i} ∂^b."""
    a2 = list(a)
    a2[i] += 1
    return _qpow(sum(a[:i])), tuple(a2)


@lru_cache(maxsize=None)
def _d_past_xi(i, a):
    """∂_i · ξ^a as {(c, l): coeff}: terms ξ^c (l = None) and ξ^c ∂_l."""
    n = len(a)
    first = next((j for j in range(n) if a[j]), None)
    if first is None:
        return {(a, i): ONE}
    rest = list(a)
    rest[first] -= 1
    rest = tuple(rest)
    out = {}

    def push(c, key, coef):
        old = out.get(key)
        s = coef * c if old is None else old + coef * c
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s

    def left_xi(j, terms, coef):
        for (c, l), v in terms.items():
            f, c2 = _xi_left(j, c, ())
            push(v * f, (c2, l), coef)

    if i != first:
        left_xi(first, _d_past_xi(i, rest), Q)
    else:
        # ∂_i ξ_i X = X + q² ξ_i ∂_i X + (q² - 1) Σ_{j<i} ξ_j ∂_j X
        push(ONE, (rest, None), ONE)
        left_xi(i, _d_past_xi(i, rest), Q2)
        for j in range(i):
            left_xi(j, _d_past_xi(j, rest), Q2 - 1)
    return out


def _d_left(i, a, b):
    """∂_i · ξ^a ∂^b as {(a', b'): coeff}."""
    out = {}
    for (c, l), v in _d_past_xi(i, a).items():
        if l is None:
            key, coef = (c, b), v
        else:
            b2 = list(b)
            b2[l] += 1
            key, coef = (c, tuple(b2)), v * _qpow(-sum(b[:l]))
        add_into(out, {key: coef})
    return out


def _left_gen(kind, i, u: WeylElement) -> WeylElement:
    out = {}
    for (a, b), c in u.terms.items():
        if kind == "xi":
            f, a2 = _xi_left(i, a, b)
            add_into(out, {(a2, b): f}, c)
        else:
            add_into(out, _d_left(i, a, b), c)
    return WeylElement(u.n, out)


def weyl_mul(u: WeylElement, v: WeylElement) -> WeylElement:
    if u.n != v.n:
        raise ValueError("rank mismatch")
    out = {}
    for (a, b), c in u.terms.items():
        w = v
        for i in reversed(range(u.n)):
            for _ in range(b[i]):
                w = _left_gen("d", i, w)
        for i in reversed(range(u.n)):
            for _ in range(a[i]):
                w = _left_gen("xi", i, w)
        add_into(out, w.terms, c)
    return WeylElement(u.n, out)


def weyl_relations(n: int):
    """Defining relations as (name, lhs word, [(coeff, word), ...]); words use 1-based ("x"|"d", i)."""
    rels = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i > j:
                rels.append((f"xi{i}xi{j}", (("x", i), ("x", j)), [(Q, (("x", j), ("x", i)))]))
                rels.append((f"d{i}d{j}", (("d", i), ("d", j)), [(Q.inverse(), (("d", j), ("d", i)))]))
            if i != j:
                rels.append((f"d{i}xi{j}", (("d", i), ("x", j)), [(Q, (("x", j), ("d", i)))]))
        rhs = [(ONE, ()), (Q2, (("x", i), ("d", i)))]
        rhs += [(Q2 - 1, (("x", j), ("d", j))) for j in range(1, i)]
        rels.append((f"d{i}xi{i}", (("d", i), ("x", i)), rhs))
    return rels


def word_element(word, n: int) -> WeylElement:
    out = WeylElement.one(n)
    for kind, i in word:
        out = weyl_mul(out, xi(i, n) if kind == "x" else dd(i, n))
    return out


def qdiff_word(word, n: int) -> "QDiffOp":
    op = QDiffOp.scalar(n)
    for kind, i in word:
        op = op * _qdiff_gen(kind, i - 1, n)
    return op


def qdiff_relation_check(n: int) -> VerificationReport:
    """Each defining relation maps to an exact identity of difference operators."""
    rep = VerificationReport("weyl-relations", {"n": n})
    for name, lhs, rhs in weyl_relations(n):
        diff = qdiff_word(lhs, n)
        for c, w in rhs:
            diff = diff - qdiff_word(w, n).scale(c)
        rep.add(name, diff.is_zero(), str(diff))
    return rep.finish()


# ---------------------------------------------------------------- q-difference operators

class QDiffOp:
    """Σ c z^λ T^μ with T^μ = Π T_{q,z_i}^{μ_i}, keyed by (λ, μ)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def scalar(cls, n, c=ONE):
        z = (0,) * n
        return cls(n, {(z, z): c})

    @classmethod
    def z(cls, n, lam, c=ONE):
        return cls(n, {(tuple(lam), (0,) * n): c})

    @classmethod
    def shift(cls, n, mu, c=ONE):
        return cls(n, {((0,) * n, tuple(mu)): c})

    def __add__(self, other):
        out = dict(self.terms)
        add_into(out, other.terms)
        return QDiffOp(self.n, out)

    def __neg__(self):
        return QDiffOp(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return QDiffOp(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, QDiffOp):
            return self.scale(other)
        out = {}
        for (l1, m1), c1 in self.terms.items():
            for (l2, m2), c2 in other.terms.items():
                f = _qpow(sum(x * y for x, y in zip(m1, l2)))
                key = (tuple(x + y for x, y in zip(l1, l2)), tuple(x + y for x, y in zip(m1, m2)))
                add_into(out, {key: c1 * c2 * f})
        return QDiffOp(self.n, out)

    def __eq__(self, other):
        return isinstance(other, QDiffOp) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def apply(self, poly: dict) -> dict:
        """Act on {exponent: coeff}; raises if a negative power appears."""
        out = {}
        for (lam, mu), c in self.terms.items():
            for k, v in poly.items():
                e = tuple(x + y for x, y in zip(lam, k))
                f = _qpow(sum(x * y for x, y in zip(mu, k)))
                add_into(out, {e: c * v * f})
        for e in out:
            if min(e) < 0:
                raise ValueError("operator leaves polynomials")
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (lam, mu), c in sorted(self.terms.items()):
            zs = "*".join(f"z{i + 1}^{e}" if e != 1 else f"z{i + 1}" for i, e in enumerate(lam) if e)
            ts = "*".join(f"T{i + 1}^{e}" if e != 1 else f"T{i + 1}" for i, e in enumerate(mu) if e)
            mono = "*".join(s for s in (zs, ts) if s)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


def _unit(n, i, k=1):
    return tuple(k if j == i else 0 for j in range(n))


def _prefix(n, i):
    return tuple(1 if j < i else 0 for j in range(n))


@lru_cache(maxsize=None)
def _qdiff_gen(kind, i, n):
    pre = _prefix(n, i)
    if kind == "x":
        return QDiffOp(n, {(_unit(n, i), pre): ONE})
    # z_i^{-1} T_{<i} (T_i² - 1)/(q² - 1)
    inv = (Q2 - 1).inverse()
    sh = tuple(p + 2 * (j == i) for j, p in enumerate(pre))
    return QDiffOp(n, {(_unit(n, i, -1), sh): inv, (_unit(n, i, -1), pre): -inv})


def qdiff(u: WeylElement) -> QDiffOp:
    n = u.n
    out = QDiffOp(n)
    for (a, b), c in u.terms.items():
        op = QDiffOp.scalar(n, c)
        for i in range(n):
            for _ in range(a[i]):
                op = op * _qdiff_gen("x", i, n)
        for i in range(n):
            for _ in range(b[i]):
                op = op * _qdiff_gen("d", i, n)
        out = out + op
    return out


def qdiff_u(gen: str, i: int, n: int) -> QDiffOp:
    """Image of E_i, F_i (1-based i < n), K_i = q^{ε_i}, or 'qomega' = q^{ω_n}."""
    if gen == "K":
        return QDiffOp.shift(n, _unit(n, i - 1))
    if gen == "Kinv":
        return QDiffOp.shift(n, _unit(n, i - 1, -1))
    if gen == "qomega":
        return QDiffOp.shift(n, (1,) * n)
    if gen in ("E", "F"):
        a, b = (i - 1, i) if gen == "E" else (i, i - 1)
        lam = tuple((j == a) - (j == b) for j in range(n))
        # z_a / z_b (T_b - T_b^{-1}) / (q - q^{-1})
        c = QQ.inverse()
        return QDiffOp(n, {(lam, _unit(n, b)): c, (lam, _unit(n, b, -1)): -c})
    raise ValueError(f"unknown generator {gen!r}")


def monomials_of_degree(n: int, m: int):
    return [k for k in itertools.product(range(m + 1), repeat=n) if sum(k) == m][::-1]


# ---------------------------------------------------------------- moment map

def moment_w(i: int, j: int, n: int) -> WeylElement:
    """μ_W(m^i_j) = q^{-2}δ_ij + (1 - q^{-2}) ∂_i ξ_j.

    The scalar term is q^{-2}δ_ij rather than δ_ij so that m^i_i acts as 1 on
    constants; this is the normalization forced by agreement with κ.
    """
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError("index out of range")
    out = weyl_mul(dd(i, n), xi(j, n)) * (1 - Q ** -2)
    if i == j:
        out = out + WeylElement.one(n, Q ** -2)
    return out


def moment_w_literal(i: int, j: int, n: int) -> WeylElement:
    """δ_ij + (1 - q^{-2}) ∂_i ξ_j, the formula as printed (kept for comparison)."""
    out = weyl_mul(dd(i, n), xi(j, n)) * (1 - Q ** -2)
    if i == j:
        out = out + WeylElement.one(n, ONE)
    return out


def verify_wbasic(n: int, m_max: int, moment=moment_w) -> VerificationReport:
    """Graded comparison of qdiff(μ_W(m^i_j)) with κ(m^i_j) on S_q^m V."""
    from .qgroup import kappa_matrix, qsym_power

    rep = VerificationReport("weyl", {"n": n, "m_max": m_max})
    ops = {(i, j): qdiff(moment(i, j, n)) for i in range(1, n + 1) for j in range(1, n + 1)}
    for m in range(m_max + 1):
        S = qsym_power(n, m)
        K = kappa_matrix(S)
        index = {lab: b for b, lab in enumerate(S.labels)}
        for (i, j), op in ops.items():
            ok = True
            for b, lab in enumerate(S.labels):
                got = op.apply({lab: ONE})
                want = {S.labels[c]: v for c, v in K[(i, j)][b].items()}
                if got != want:
                    ok = False
                    break
            rep.add(f"m={m} (i,j)=({i},{j})", ok, "" if ok else f"mismatch on z^{lab}")
        del index
    return rep.finish()


# ---------------------------------------------------------------- U-action

def _gen_action(g, i, kind, l, n):
    """g in {E, F, K, Kinv} (i 1-based; K is q^{ε_i}) on a generator ξ_l / ∂_l (0-based l)."""
    z = (0,) * n
    if kind == "x":
        mk = lambda idx, c: WeylElement(n, {(_unit(n, idx), z): c})
        if g == "E":
            return mk(i - 1, ONE) if l == i else WeylElement(n)
        if g == "F":
            return mk(i, ONE) if l == i - 1 else WeylElement(n)
        if g in ("K", "Kinv"):
            return mk(l, _qpow((1 if g == "K" else -1) * (l == i - 1)))
    else:
        mk = lambda idx, c: WeylElement(n, {(z, _unit(n, idx)): c})
        if g == "E":
            return mk(i, -Q) if l == i - 1 else WeylElement(n)
        if g == "F":
            return mk(i - 1, -Q.inverse()) if l == i else WeylElement(n)
        if g in ("K", "Kinv"):
            return mk(l, _qpow(-(1 if g == "K" else -1) * (l == i - 1)))
    raise ValueError(f"unknown generator {g!r}")


def _k_alpha(i, kind, l, inverse=False):
    # q^{α_i} on ξ_l has eigenvalue q^{δ_{l,i-1} - δ_{l,i}}; on ∂_l the inverse
    e = (l == i - 1) - (l == i)
    if kind == "d":
        e = -e
    return _qpow(-e if inverse else e)


def _word(a, b):
    w = []
    for i, e in enumerate(a):
        w.extend([("x", i)] * e)
    for i, e in enumerate(b):
        w.extend([("d", i)] * e)
    return w


def _act_word(g, i, word, n):
    """g • (product of the generator word), via the coproduct."""
    if not word:
        return WeylElement(n) if g in ("E", "F") else WeylElement.one(n)
    (kind, l), rest = word[0], word[1:]
    head = WeylElement(n, {_gen_key(kind, l, n): ONE})
    tail = _word_elem(rest, n)
    if g in ("K", "Kinv"):
        return weyl_mul(_gen_action(g, i, kind, l, n), _act_word(g, i, rest, n))
    if g == "E":
        # Δ(E) = E⊗K_α + 1⊗E
        k_tail = _word_elem(rest, n) * _k_alpha_word(i, rest)
        return weyl_mul(_gen_action("E", i, kind, l, n), k_tail) + weyl_mul(head, _act_word("E", i, rest, n))
    # Δ(F) = F⊗1 + K_α^{-1}⊗F
    return weyl_mul(_gen_action("F", i, kind, l, n), tail) + weyl_mul(head, _act_word("F", i, rest, n)) * _k_alpha(i, kind, l, True)


def _k_alpha_word(i, word):
    out = ONE
    for kind, l in word:
        out = out * _k_alpha(i, kind, l)
    return out


def _gen_key(kind, l, n):
    z = (0,) * n
    return (_unit(n, l), z) if kind == "x" else (z, _unit(n, l))


def _word_elem(word, n):
    out = WeylElement.one(n)
    for kind, l in word:
        out = weyl_mul(out, WeylElement(n, {_gen_key(kind, l, n): ONE}))
    return out


def weyl_u_action(g: str, i: int, u: WeylElement) -> WeylElement:
    """Action of E_i, F_i (1-based), K_i = q^{ε_i} or Kinv on u; 'qomega' is q^{ω_n}."""
    n = u.n
    if g == "qomega":
        return WeylElement(n, {(a, b): c * _qpow(sum(a) - sum(b)) for (a, b), c in u.terms.items()})
    out = WeylElement(n)
    for (a, b), c in u.terms.items():
        out = out + _act_word(g, i, _word(a, b), n) * c
    return out


def moment_exchange_check(n: int, max_deg: int = 4, moment=moment_w) -> VerificationReport:
    """μ(h) a = (h_(1)•a) μ(h_(2)) for h = κ(m^i_j) and a = ξ_l or ∂_l.

    The coproduct of κ(m^i_j) is expanded with the coideal formula
    Σ_k κ(m^i_k) r_s r_t ⊗ κ(_s r e^k ⊗ _t r e_j); the legs r_s r_t act on a
    through R_{V*⊗V, W} with W = V (for ξ) or V* (for ∂).  Both sides are
    compared in the functional representation on monomials of degree <= max_deg.
    """
    from .qgroup import dual, kappa_matrix, r_apply, tensor, vector_module

    rep = VerificationReport("moment", {"n": n, "max_deg": max_deg})
    V = vector_module(n)
    VsV = tensor(dual(V), V)
    polys = [k for m in range(max_deg + 1) for k in monomials_of_degree(n, m)]
    mom = {(i, j): moment(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1)}
    for kind, W in (("x", V), ("d", dual(V))):
        K = kappa_matrix(W)
        gen = xi if kind == "x" else dd
        for i, j, l in itertools.product(range(1, n + 1), repeat=3):
            lhs = weyl_mul(mom[(i, j)], gen(l, n))
            rhs = WeylElement(n)
            for k in range(n):
                img = r_apply(VsV, W, {(k * n + (j - 1)) * n + (l - 1): ONE})
                for key, c in img.items():
                    fu, w = divmod(key, n)
                    f, u = divmod(fu, n)
                    acted = WeylElement(n)
                    for w2, c2 in K[(i, k + 1)][w].items():
                        acted = acted + gen(w2 + 1, n) * c2
                    rhs = rhs + weyl_mul(acted, mom[(f + 1, u + 1)]) * c
            dl, dr = qdiff(lhs), qdiff(rhs)
            ok = all(dl.apply({p: ONE}) == dr.apply({p: ONE}) for p in polys)
            rep.add(f"mu(m^{i}_{j}) {'xi' if kind == 'x' else 'd'}{l}", ok)
    return rep.finish()
