"""Finite-dimensional U_q(gl_n)-modules with explicit matrices.

Modules are built from the vector representation V, duals, one-dimensional
determinant characters, tensor products and submodules.  The R-matrix is never
stored as a universal element: its action on X⊗Y is computed recursively from
the V⊗V matrix using

    R_{X1⊗X2,Y} = R13 R23,          R_{X,Y1⊗Y2} = R13 R12,
    R_{X*,Y} = (R^{-1}_{X,Y})^{T1},  R_{X,Y*} = ((1⊗K) R^{-1}_{X,Y} (1⊗K^{-1}))^{T2},

with K = q^{2ρ}, and the analogous rules for R^{-1}.

Conventions (pinned by the intertwining tests):

* E_i e_{i+1} = e_i, F_i e_i = e_{i+1}, q^{ε_j} e_j = q e_j;
* Δ(E) = E⊗K_i + 1⊗E, Δ(F) = F⊗1 + K_i^{-1}⊗F, K_i = q^{α_i};
* S(E) = -E K_i^{-1}, S(F) = -K_i F, and (x·f)(v) = f(S(x)v) on duals;
* R(e_i⊗e_i) = q e_i⊗e_i, R(e_i⊗e_j) = e_i⊗e_j + (q - q^{-1}) e_j⊗e_i for i > j,
  R(e_i⊗e_j) = e_i⊗e_j for i < j;  β_{X,Y} = flip ∘ R_{X,Y}.
"""

from __future__ import annotations

import itertools
import re
from math import comb

from .coeff import ONE, Q, ZERO, RatFunc, q_fact
from .laurent import LaurentPoly, is_dominant, parse_weight, two_rho
from .linalg import EchelonBasis, add_into, mat_vec, nullspace, scale

__all__ = [
    "UqModule",
    "vector_module",
    "dual",
    "tensor",
    "tensor_power",
    "det_module",
    "trivial_module",
    "submodule",
    "qsym_power",
    "qext_power",
    "highest_weight_submodule",
    "r_apply",
    "braiding",
    "braiding_inverse",
    "braiding_matrix",
    "r_matrix_vv",
    "hecke_apply",
    "double_braid",
    "kappa_matrix",
    "kappa_element",
    "qcoev_element",
    "ribbon_scalar",
    "character",
    "char_eval",
    "parse_module",
]

QQ = Q - Q.inverse()
_uid = itertools.count()


def _qpow(k: int) -> RatFunc:
    return Q ** k if k else ONE


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


class UqModule:
    """A module given by weights and E_i, F_i matrices (lists of sparse columns)."""

    def __init__(self, n, weights, E, F, kind, parts=(), name="", k=0):
        self.n = n
        self.weights = [tuple(w) for w in weights]
        self.dim = len(self.weights)
        self.E = E
        self.F = F
        self.kind = kind
        self.parts = parts
        self.name = name
        self.k = k
        self.uid = next(_uid)
        self.labels = None
        self._rcache = {}

    def __repr__(self):
        return f"UqModule({self.name}, dim={self.dim})"

    # -- actions
    def act(self, gen, i, vec: dict) -> dict:
        """Apply E_i, F_i (i 0-based) or q^{ε_i} ('K') to a vector."""
        if gen == "E":
            return mat_vec(self.E[i], vec)
        if gen == "F":
            return mat_vec(self.F[i], vec)
        if gen == "K":
            return {b: c * _qpow(self.weights[b][i]) for b, c in vec.items()}
        raise ValueError(f"unknown generator {gen!r}")

    def k_alpha(self, i: int, b: int) -> RatFunc:
        w = self.weights[b]
        return _qpow(w[i] - w[i + 1])

    def weight_space(self, lam) -> list[int]:
        lam = tuple(lam)
        return [b for b, w in enumerate(self.weights) if w == lam]

    def check_relations(self) -> list[str]:
        """Commutation and Serre relations as matrix identities; returns failures."""
        bad = []
        n = self.n
        for b in range(self.dim):
            e = {b: ONE}
            wb = self.weights[b]
            for i in range(n - 1):
                for j in range(n - 1):
                    lhs = self.act("E", i, self.act("F", j, e))
                    add_into(lhs, self.act("F", j, self.act("E", i, e)), -ONE)
                    if i == j:
                        kk = self.k_alpha(i, b)
                        rhs = {b: (kk - kk.inverse()) / QQ} if kk != kk.inverse() else {}
                    else:
                        rhs = {}
                    if lhs != rhs:
                        bad.append(f"[E{i + 1},F{j + 1}] on basis {b}")
                    if abs(i - j) == 1:
                        for g in ("E", "F"):
                            # X_i^2 X_j - [2] X_i X_j X_i + X_j X_i^2
                            a = self.act(g, i, self.act(g, i, self.act(g, j, e)))
                            mid = self.act(g, i, self.act(g, j, self.act(g, i, e)))
                            add_into(a, mid, -(Q + Q.inverse()))
                            add_into(a, self.act(g, j, self.act(g, i, self.act(g, i, e))))
                            if a:
                                bad.append(f"Serre {g}{i + 1}{g}{j + 1} on basis {b}")
                    if abs(i - j) > 1:
                        for g in ("E", "F"):
                            a = self.act(g, i, self.act(g, j, e))
                            add_into(a, self.act(g, j, self.act(g, i, e)), -ONE)
                            if a:
                                bad.append(f"{g}{i + 1}{g}{j + 1} commute on basis {b}")
                for g, sgn in (("E", 1), ("F", -1)):
                    for c in self.act(g, i, e):
                        alpha = tuple(self.weights[c][m] - wb[m] for m in range(n))
                        want = tuple(sgn * ((m == i) - (m == i + 1)) for m in range(n))
                        if alpha != want:
                            bad.append(f"{g}{i + 1} weight shift on basis {b}")
        if self.kind == "sub":
            bad.extend(_check_embedding(self))
        return bad


def _check_embedding(M) -> list[str]:
    P = M.parts[0]
    bad = []
    for b in range(M.dim):
        for i in range(M.n - 1):
            for g in ("E", "F"):
                down = _embed(M, M.act(g, i, {b: ONE}))
                up = P.act(g, i, M.emb[b])
                if down != up:
                    bad.append(f"embedding does not intertwine {g}{i + 1} on basis {b}")
    return bad


# ---------------------------------------------------------------- constructors

def vector_module(n: int) -> UqModule:
    if n < 2:
        raise ValueError("n must be at least 2")
    weights = [tuple(int(m == j) for m in range(n)) for j in range(n)]
    E, F = [], []
    for i in range(n - 1):
        e = [dict() for _ in range(n)]
        f = [dict() for _ in range(n)]
        e[i + 1] = {i: ONE}
        f[i] = {i + 1: ONE}
        E.append(e)
        F.append(f)
    return UqModule(n, weights, E, F, "vec", name="V")


def det_module(k: int, n: int) -> UqModule:
    zero = [[dict()] for _ in range(n - 1)]
    name = "1" if k == 0 else f"det^{k}"
    return UqModule(n, [(k,) * n], zero, [[dict()] for _ in range(n - 1)], "det", name=name, k=k)


def trivial_module(n: int) -> UqModule:
    return det_module(0, n)


def dual(M: UqModule) -> UqModule:
    n, d = M.n, M.dim
    weights = [tuple(-a for a in w) for w in M.weights]
    E, F = [], []
    for i in range(n - 1):
        e = [dict() for _ in range(d)]
        f = [dict() for _ in range(d)]
        # (E f)(v) = f(-E K^{-1} v):  E*[a][b] = -E[b][a] q^{-α(wt b)}
        for b, col in enumerate(M.E[i]):
            kb = M.k_alpha(i, b).inverse()
            for a, c in col.items():
                e[a][b] = -c * kb
        # (F f)(v) = f(-K F v):  F*[a][b] = -q^{α(wt a)} F[b][a]
        for b, col in enumerate(M.F[i]):
            for a, c in col.items():
                f[a][b] = -c * M.k_alpha(i, a)
        E.append(e)
        F.append(f)
    return UqModule(n, weights, E, F, "dual", parts=(M,), name=f"({M.name})*")


def tensor(A: UqModule, B: UqModule) -> UqModule:
    if A.n != B.n:
        raise ValueError("rank mismatch")
    n, dB = A.n, B.dim
    weights = [tuple(x + y for x, y in zip(wa, wb)) for wa in A.weights for wb in B.weights]
    E, F = [], []
    for i in range(n - 1):
        e, f = [], []
        for a in range(A.dim):
            ka_inv = A.k_alpha(i, a).inverse()
            for b in range(dB):
                ce, cf = {}, {}
                kb = B.k_alpha(i, b)
                for a2, c in A.E[i][a].items():
                    ce[a2 * dB + b] = c * kb
                for b2, c in B.E[i][b].items():
                    add_into(ce, {a * dB + b2: c})
                for a2, c in A.F[i][a].items():
                    cf[a2 * dB + b] = c
                for b2, c in B.F[i][b].items():
                    add_into(cf, {a * dB + b2: c * ka_inv})
                e.append(ce)
                f.append(cf)
        E.append(e)
        F.append(f)
    return UqModule(n, weights, E, F, "tensor", parts=(A, B), name=f"{A.name}⊗{B.name}")


def tensor_power(M: UqModule, m: int) -> UqModule:
    if m == 0:
        return trivial_module(M.n)
    out = M
    for _ in range(m - 1):
        out = tensor(out, M)
    return out


def _embed(M, vec: dict) -> dict:
    out = {}
    for b, c in vec.items():
        add_into(out, M.emb[b], c)
    return out


def _project(M, vec: dict) -> dict:
    """Coordinates in M of a parent vector lying in M (ValueError otherwise)."""
    P = M.parts[0]
    groups = {}
    for p, c in vec.items():
        groups.setdefault(P.weights[p], {})[p] = c
    out = {}
    for w, v in groups.items():
        basis, idx = M._coord.get(w, (None, None))
        if basis is None:
            raise ValueError("vector not in submodule")
        for loc, c in basis.coordinates(v).items():
            out[idx[loc]] = c
    return out


def submodule(P: UqModule, vectors, name="sub", labels=None) -> UqModule:
    """Submodule of P spanned by the given weight vectors (which must be stable)."""
    vectors = [dict(v) for v in vectors]
    weights = []
    coord = {}
    for b, v in enumerate(vectors):
        ws = {P.weights[p] for p in v}
        if len(ws) != 1:
            raise ValueError("basis vectors must be nonzero weight vectors")
        w = ws.pop()
        weights.append(w)
        basis, idx = coord.setdefault(w, (EchelonBasis(), []))
        if not basis.add(v):
            raise ValueError("basis vectors are dependent")
        idx.append(b)
    M = UqModule(P.n, weights, [], [], "sub", parts=(P,), name=name)
    M.emb = vectors
    M._coord = coord
    for i in range(P.n - 1):
        M.E.append([_project(M, P.act("E", i, v)) for v in vectors])
        M.F.append([_project(M, P.act("F", i, v)) for v in vectors])
    M.labels = labels
    return M


# ---------------------------------------------------------------- R-matrix

def r_matrix_vv(n: int, a: int, b: int, inv=False) -> dict:
    """R (or R^{-1}) on e_a⊗e_b in V⊗V, as a dict over flat indices."""
    if a == b:
        return {a * n + a: Q.inverse() if inv else Q}
    if a > b:
        return {a * n + b: ONE, b * n + a: -QQ if inv else QQ}
    return {a * n + b: ONE}


def r_apply(X: UqModule, Y: UqModule, vec: dict, inv=False) -> dict:
    """R_{X,Y} (or its inverse) applied to a vector of X⊗Y."""
    out = {}
    for idx, c in vec.items():
        add_into(out, _r_basis(X, Y, idx, inv), c)
    return out


def _r_basis(X, Y, idx, inv):
    key = (Y.uid, inv, idx)
    hit = X._rcache.get(key)
    if hit is None:
        hit = _r_compute(X, Y, idx, inv)
        X._rcache[key] = hit
    return hit


def _r_compute(X, Y, idx, inv):
    dY = Y.dim
    x, y = divmod(idx, dY)
    sgn = -1 if inv else 1
    if X.kind == "det":
        return {idx: _qpow(sgn * X.k * sum(Y.weights[y]))}
    if Y.kind == "det":
        return {idx: _qpow(sgn * Y.k * sum(X.weights[x]))}
    if X.kind == "sub":
        P = X.parts[0]
        lifted = {p * dY + y: c for p, c in X.emb[x].items()}
        img = r_apply(P, Y, lifted, inv)
        groups = {}
        for j, c in img.items():
            p, y2 = divmod(j, dY)
            groups.setdefault(y2, {})[p] = c
        out = {}
        for y2, v in groups.items():
            for x2, c in _project(X, v).items():
                out[x2 * dY + y2] = c
        return out
    if Y.kind == "sub":
        P = Y.parts[0]
        dP = P.dim
        lifted = {x * dP + p: c for p, c in Y.emb[y].items()}
        img = r_apply(X, P, lifted, inv)
        groups = {}
        for j, c in img.items():
            x2, p = divmod(j, dP)
            groups.setdefault(x2, {})[p] = c
        out = {}
        for x2, v in groups.items():
            for y2, c in _project(Y, v).items():
                out[x2 * dY + y2] = c
        return out
    if X.kind == "tensor":
        A, B = X.parts
        dB = B.dim
        a, b = divmod(x, dB)

        def r23(vec):  # on A⊗B⊗Y, act on B⊗Y
            out = {}
            for j, c in vec.items():
                a1, rest = divmod(j, dB * dY)
                for k2, c2 in _r_basis(B, Y, rest, inv).items():
                    add_into(out, {a1 * dB * dY + k2: c2}, c)
            return out

        def r13(vec):
            out = {}
            for j, c in vec.items():
                a1, rest = divmod(j, dB * dY)
                b1, y1 = divmod(rest, dY)
                for k2, c2 in _r_basis(A, Y, a1 * dY + y1, inv).items():
                    a2, y2 = divmod(k2, dY)
                    add_into(out, {(a2 * dB + b1) * dY + y2: c2}, c)
            return out

        start = {idx: ONE}
        return r23(r13(start)) if inv else r13(r23(start))
    if Y.kind == "tensor":
        C, D = Y.parts
        dC, dD = C.dim, D.dim

        def r12(vec):  # on X⊗C⊗D, act on X⊗C
            out = {}
            for j, c in vec.items():
                x1, rest = divmod(j, dY)
                c1, d1 = divmod(rest, dD)
                for k2, c2 in _r_basis(X, C, x1 * dC + c1, inv).items():
                    x2, c3 = divmod(k2, dC)
                    add_into(out, {x2 * dY + c3 * dD + d1: c2}, c)
            return out

        def r13(vec):
            out = {}
            for j, c in vec.items():
                x1, rest = divmod(j, dY)
                c1, d1 = divmod(rest, dD)
                for k2, c2 in _r_basis(X, D, x1 * dD + d1, inv).items():
                    x2, d2 = divmod(k2, dD)
                    add_into(out, {x2 * dY + c1 * dD + d2: c2}, c)
            return out

        start = {idx: ONE}
        return r12(r13(start)) if inv else r13(r12(start))
    if X.kind == "dual":
        X0 = X.parts[0]
        rho = two_rho(X.n)
        out = {}
        for x1 in range(X0.dim):
            # column (x1, y) of R^{∓1}_{X0,Y}; keep rows whose first slot is x
            for j, c in _r_basis(X0, Y, x1 * dY + y, not inv).items():
                x2, y2 = divmod(j, dY)
                if x2 != x:
                    continue
                if inv:
                    c = c * _qpow(_dot(rho, X0.weights[x]) - _dot(rho, X0.weights[x1]))
                add_into(out, {x1 * dY + y2: c})
        return out
    if Y.kind == "dual":
        Y0 = Y.parts[0]
        rho = two_rho(X.n)
        out = {}
        for y1 in range(Y0.dim):
            for j, c in _r_basis(X, Y0, x * dY + y1, not inv).items():
                x2, y2 = divmod(j, dY)
                if y2 != y:
                    continue
                if not inv:
                    c = c * _qpow(_dot(rho, Y0.weights[y]) - _dot(rho, Y0.weights[y1]))
                add_into(out, {x2 * dY + y1: c})
        return out
    if X.kind == "vec" and Y.kind == "vec":
        return r_matrix_vv(X.n, x, y, inv)
    raise TypeError(f"cannot braid {X.kind} with {Y.kind}: module is not word-derived")


def _flip(vec: dict, d1: int, d2: int) -> dict:
    """X⊗Y -> Y⊗X on flat indices (d1 = dim X, d2 = dim Y)."""
    return {(j % d2) * d1 + j // d2: c for j, c in vec.items()}


def braiding(X: UqModule, Y: UqModule, vec: dict) -> dict:
    """β_{X,Y} = flip ∘ R_{X,Y}: X⊗Y -> Y⊗X."""
    return _flip(r_apply(X, Y, vec), X.dim, Y.dim)


def braiding_inverse(X: UqModule, Y: UqModule, vec: dict) -> dict:
    """β_{X,Y}^{-1}: Y⊗X -> X⊗Y."""
    return r_apply(X, Y, _flip(vec, Y.dim, X.dim), inv=True)


def braiding_matrix(X: UqModule, Y: UqModule):
    return [braiding(X, Y, {j: ONE}) for j in range(X.dim * Y.dim)]


def hecke_apply(n: int, m: int, i: int, vec: dict) -> dict:
    """T_i = β_{V,V} on tensor slots i, i+1 (1-based) of V^{⊗m}."""
    if not 1 <= i < m:
        raise IndexError("slot out of range")
    lo = n ** (m - i - 1)
    out = {}
    for j, c in vec.items():
        a = (j // (lo * n)) % n
        b = (j // lo) % n
        base = j - (a * n + b) * lo
        for k, c2 in braiding_vv(n, a, b).items():
            add_into(out, {base + k * lo: c2}, c)
    return out


def braiding_vv(n, a, b) -> dict:
    return _flip(r_matrix_vv(n, a, b), n, n)


# ---------------------------------------------------------------- q-powers

def _hecke_symmetrize(n, m, vec, c):
    """sum_{w in S_m} c^{l(w)} T_w applied to vec, via the coset factorization.

    S_k = {s_{k-j} ... s_{k-1}} · S_{k-1}, so the sum over S_k is the coset sum
    applied after the sum over S_{k-1}.
    """
    for k in range(2, m + 1):
        out = dict(vec)
        cur = vec
        coef = ONE
        for j in range(1, k):
            cur = hecke_apply(n, m, k - j, cur)
            coef = coef * c
            add_into(out, cur, coef)
        vec = out
    return vec


def _flat(indices, n):
    j = 0
    for a in indices:
        j = j * n + a
    return j


def qsym_power(n: int, m: int) -> UqModule:
    """S_q^m V, spanned by the normalized q-symmetrizer images of e_{i1}⊗...⊗e_{im}, i1 <= ... <= im.

    The basis vector labelled by the exponent vector k corresponds to the
    monomial ξ_1^{k_1}⋯ξ_n^{k_n}.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        M = trivial_module(n)
        M.labels = [(0,) * n]
        return M
    P = tensor_power(vector_module(n), m)
    norm = q_fact(m, "q2").inverse()
    vectors, labels = [], []
    for idx in itertools.combinations_with_replacement(range(n), m):
        v = _hecke_symmetrize(n, m, {_flat(idx, n): ONE}, Q)
        vectors.append(scale(v, norm))
        labels.append(tuple(idx.count(a) for a in range(n)))
    M = submodule(P, vectors, name=f"S_q^{m}V", labels=labels)
    assert M.dim == comb(n + m - 1, m)
    return M


def qext_power(n: int, m: int) -> UqModule:
    """∧_q^m V, spanned by q-antisymmetrizer images of e_{i1}⊗...⊗e_{im}, i1 < ... < im."""
    if m < 0 or m > n:
        raise ValueError("need 0 <= m <= n")
    if m == 0:
        M = trivial_module(n)
        M.labels = [()]
        return M
    P = tensor_power(vector_module(n), m)
    c = -Q.inverse()
    vectors, labels = [], []
    for idx in itertools.combinations(range(n), m):
        v = _hecke_symmetrize(n, m, {_flat(idx, n): ONE}, c)
        vectors.append(v)
        labels.append(idx)
    vectors = [scale(v, _ext_norm(m)) for v in vectors]
    M = submodule(P, vectors, name=f"wedge_q^{m}V", labels=labels)
    assert M.dim == comb(n, m)
    return M


def _ext_norm(m):
    # sum_{w in S_m} q^{-2 l(w)} = [m]_{q^{-2}}!, which makes the antisymmetrizer idempotent
    out = ONE
    for j in range(1, m + 1):
        s = ZERO
        for i in range(j):
            s = s + Q ** (-2 * i)
        out = out * s
    return out.inverse()


# ---------------------------------------------------------------- highest weights

def highest_weight_submodule(W: UqModule, lam, which: int = 0) -> UqModule:
    """Submodule generated by a highest-weight vector of weight lam in W."""
    lam = tuple(lam)
    if len(lam) != W.n:
        raise ValueError("weight has the wrong length")
    space = W.weight_space(lam)
    rows = {}
    for i in range(W.n - 1):
        for b in space:
            for o, c in W.E[i][b].items():
                rows.setdefault((i, o), {})[b] = c
    sing = nullspace(list(rows.values()), space)
    if not sing:
        raise ValueError(f"no highest-weight vector of weight {lam} in {W.name}")
    if which >= len(sing):
        raise ValueError("not that many highest-weight vectors")
    top = sing[which]
    first = min(top)
    top = scale(top, top[first].inverse())
    vectors, parents = [top], [None]
    spaces = {lam: EchelonBasis()}
    spaces[lam].add(top)
    queue = [0]
    while queue:
        b = queue.pop(0)
        for i in range(W.n - 1):
            v = W.act("F", i, vectors[b])
            if not v:
                continue
            w = W.weights[next(iter(v))]
            basis = spaces.setdefault(w, EchelonBasis())
            if basis.add(v):
                vectors.append(v)
                parents.append((i, b))
                queue.append(len(vectors) - 1)
    name = "V_(" + ",".join(map(str, lam)) + ")"
    M = submodule(W, vectors, name=name)
    M.parents = parents
    M.top = lam
    return M


# ---------------------------------------------------------------- κ and ribbon

def double_braid(A: UqModule, B: UqModule, vec: dict) -> dict:
    """β_{B,A} ∘ β_{A,B} on A⊗B."""
    return braiding(B, A, braiding(A, B, vec))


def kappa_element(W: UqModule, X: UqModule, elem: dict):
    """Matrix on X of κ(Σ c w^a⊗w_b), elem = {(a, b): c}, via the double braiding."""
    dX = X.dim
    cols = []
    for x in range(dX):
        out = {}
        by_b = {}
        for (a, b), c in elem.items():
            by_b.setdefault(b, []).append((a, c))
        for b, pairs in by_b.items():
            img = double_braid(W, X, {b * dX + x: ONE})
            for a, c in pairs:
                for j, c2 in img.items():
                    a2, x2 = divmod(j, dX)
                    if a2 == a:
                        add_into(out, {x2: c2}, c)
        cols.append(out)
    return cols


def kappa_matrix(W: UqModule) -> dict:
    """{(i, j): matrix of κ(m^i_j) on W} with 1-based i, j."""
    n = W.n
    V = vector_module(n)
    dW = W.dim
    out = {(i, j): [dict() for _ in range(dW)] for i in range(1, n + 1) for j in range(1, n + 1)}
    for j in range(n):
        for x in range(dW):
            img = double_braid(V, W, {j * dW + x: ONE})
            for k, c in img.items():
                i, x2 = divmod(k, dW)
                out[(i + 1, j + 1)][x][x2] = c
    return out


def qcoev_element(W: UqModule) -> dict:
    """The element Σ_i w^i ⊗ q^{-2ρ} w_i of W*⊗W, as {(i, i): q^{-<2ρ, wt w_i>}}."""
    rho = two_rho(W.n)
    return {(i, i): _qpow(-_dot(rho, w)) for i, w in enumerate(W.weights)}


def ribbon_scalar(lam) -> RatFunc:
    """q^{<λ, λ+2ρ>}."""
    lam = tuple(lam)
    if not is_dominant(lam):
        raise ValueError("weight must be dominant")
    rho = two_rho(len(lam))
    return _qpow(_dot(lam, lam) + _dot(lam, rho))


def character(M: UqModule) -> LaurentPoly:
    out = LaurentPoly(M.n)
    for w in M.weights:
        out = out + LaurentPoly.monomial(w)
    return out


def char_eval(M: UqModule, point) -> RatFunc:
    """Σ_v q^{2<wt v, point>}."""
    out = ZERO
    for w in M.weights:
        out = out + _qpow(2 * _dot(w, point))
    return out


# ---------------------------------------------------------------- descriptors

_DESC = [
    (re.compile(r"^V\*$"), lambda m, n: dual(vector_module(n))),
    (re.compile(r"^V$"), lambda m, n: vector_module(n)),
    (re.compile(r"^det\^(-?\d+)$"), lambda m, n: det_module(int(m.group(1)), n)),
    (re.compile(r"^S_q\^(\d+)\s*V$"), lambda m, n: qsym_power(n, int(m.group(1)))),
    (re.compile(r"^wedge_q\^(\d+)\s*V$"), lambda m, n: qext_power(n, int(m.group(1)))),
    (re.compile(r"^V_\(([-\d,\s]+)\)$"), lambda m, n: _irreducible(parse_weight(m.group(1)), n)),
]


def _irreducible(lam, n):
    if len(lam) != n or not is_dominant(lam):
        raise ValueError(f"bad highest weight {lam}")
    shift = lam[-1]
    base = tuple(a - shift for a in lam)
    size = sum(base)
    V = vector_module(n)
    W = tensor_power(V, size) if size else trivial_module(n)
    M = highest_weight_submodule(W, base) if size else W
    if shift:
        M = tensor(M, det_module(shift, n))
    return M


def parse_module(desc: str, n: int) -> UqModule:
    """Parse descriptors like "V", "V*", "det^k", "S_q^m V", "wedge_q^m V", "V⊗V", "V_(2,0)"."""
    parts = [p.strip() for p in re.split(r"⊗|\(x\)", desc)]
    mods = []
    for p in parts:
        for pat, build in _DESC:
            m = pat.match(p)
            if m:
                mods.append(build(m, n))
                break
        else:
            raise ValueError(f"unknown module descriptor {p!r}")
    out = mods[0]
    for M in mods[1:]:
        out = tensor(out, M)
    out.name = desc
    return out
