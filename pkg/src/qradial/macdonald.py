"""Macdonald polynomials by a triangular eigen-solve.

P_lambda is expanded in the monomial basis m_mu.  Coefficients are found by
back-substitution against the e_1 Macdonald operator, whose matrix in the
m-basis is triangular for dominance.  The normalization is the one where
P_lambda(q, t) coincides with the classical P_lambda(q^2, t^2).
"""

from __future__ import annotations

import fcntl
import json
import os
import tempfile
from functools import lru_cache
from pathlib import Path

from .coeff import ONE, Q, T, ZERO, RatFunc
from .daha import macdonald_operator
from .laurent import (
    LaurentPoly,
    dominance_leq,
    dominant_below,
    format_weight,
    is_dominant,
    monomial_sym,
    parse_weight,
)

__all__ = [
    "CONVENTION",
    "ENGINE_VERSION",
    "MacPoly",
    "macdonald",
    "mac_eigenvalue",
    "spectrum",
    "specialize_mac",
    "expand_in_mac",
    "gaussian_eigenvalue",
    "operator_on_monomials",
    "MacdonaldCache",
    "TriangularityError",
    "tau_window_check",
]

CONVENTION = "q2t2"
ENGINE_VERSION = "0.1.0"


class TriangularityError(RuntimeError):
    pass


class MacPoly:
    """P_lambda as {mu: coefficient of m_mu}."""

    __slots__ = ("lam", "n", "coeffs")

    def __init__(self, lam, coeffs):
        self.lam = tuple(lam)
        self.n = len(self.lam)
        self.coeffs = {tuple(m): c for m, c in coeffs.items() if not c.is_zero()}

    def to_laurent(self) -> LaurentPoly:
        total = LaurentPoly(self.n)
        for mu, c in self.coeffs.items():
            total = total + monomial_sym(mu).scale(c)
        return total

    def coefficient(self, mu) -> RatFunc:
        return self.coeffs.get(tuple(mu), ZERO)

    def specialize(self, k: int) -> "MacPoly":
        return specialize_mac(self, k)

    def __eq__(self, other):
        return isinstance(other, MacPoly) and self.lam == other.lam and self.coeffs == other.coeffs

    def __str__(self):
        parts = []
        for mu in sorted(self.coeffs, reverse=True):
            c = self.coeffs[mu]
            label = f"m[{format_weight(mu)}]"
            parts.append(label if c.is_one() else f"({c})*{label}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "lambda": format_weight(self.lam),
            "coeffs": [{"mu": format_weight(mu), "ratfunc": str(c)}
                       for mu, c in sorted(self.coeffs.items(), reverse=True)],
            "convention": CONVENTION,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MacPoly":
        if data.get("convention") != CONVENTION:
            raise ValueError("cached polynomial uses a different convention")
        lam = parse_weight(data["lambda"])
        return cls(lam, {parse_weight(e["mu"]): RatFunc.parse(e["ratfunc"]) for e in data["coeffs"]})


def spectrum(lam, t=T) -> list[RatFunc]:
    """The Y-spectrum q^{2 lam_i} t^{n+1-2i}."""
    n = len(lam)
    return [Q ** (2 * lam[i]) * t ** (n - 1 - 2 * i) for i in range(n)]


def mac_eigenvalue(f: LaurentPoly, lam) -> RatFunc:
    """f evaluated at the Y-spectrum of lam."""
    lam = tuple(lam)
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    if f.n != len(lam):
        raise ValueError("rank mismatch")
    spec = spectrum(lam)
    total = ZERO
    for e, c in f.terms.items():
        term = c
        for s, a in zip(spec, e):
            if a:
                term = term * s ** a
        total = total + term
    return total


def operator_on_monomials(op, mu) -> dict:
    """m-basis expansion of op applied to m_mu."""
    return op.apply(monomial_sym(mu)).to_monomial_basis()


@lru_cache(maxsize=None)
def _e1_row(mu):
    return operator_on_monomials(macdonald_operator(1, 1, len(mu)), mu)


def _solve(lam) -> MacPoly:
    n = len(lam)
    if n == 1:
        return MacPoly(lam, {lam: ONE})
    shift = lam[-1]
    base = tuple(a - shift for a in lam)
    support = dominant_below(base)
    energy = {mu: mac_eigenvalue(_e1_poly(n), mu) for mu in support}
    e_lam = energy[base]
    coeffs = {base: ONE}
    # rows: D m_mu = sum_nu c[mu][nu] m_nu, with nu <= mu
    rows = {}
    for mu in support:
        row = _e1_row(mu)
        for nu in row:
            if not dominance_leq(nu, mu):
                raise TriangularityError(f"operator not triangular: m_{mu} -> m_{nu}")
        rows[mu] = row
    for nu in support[1:]:
        acc = ZERO
        for mu, u in coeffs.items():
            c = rows[mu].get(nu)
            if c is not None:
                acc = acc + u * c
        gap = e_lam - energy[nu]
        if gap.is_zero():
            raise TriangularityError(f"eigenvalue collision between {base} and {nu}")
        val = acc / gap
        if not val.is_zero():
            coeffs[nu] = val
    if shift:
        coeffs = {tuple(a + shift for a in mu): c for mu, c in coeffs.items()}
    return MacPoly(lam, coeffs)


@lru_cache(maxsize=None)
def _e1_poly(n):
    from .laurent import elementary

    return elementary(1, 1, n)


class MacdonaldCache:
    """JSON cache file macdonald-n{n}.json guarded by an exclusive lock."""

    def __init__(self, directory=None):
        if directory is None:
            directory = os.environ.get("HC_CACHE_DIR") or Path.home() / ".cache" / "qradial"
        self.directory = Path(directory)

    def path(self, n: int) -> Path:
        return self.directory / f"macdonald-n{n}.json"

    def _read(self, n):
        p = self.path(n)
        if not p.exists():
            return {}
        try:
            data = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError):
            return {}
        entries = {}
        for item in data if isinstance(data, list) else []:
            if item.get("convention") != CONVENTION or item.get("engine_version") != ENGINE_VERSION:
                continue
            entries[item["lambda"]] = item
        return entries

    def load(self, lam):
        entry = self._read(len(lam)).get(format_weight(lam))
        return None if entry is None else MacPoly.from_json(entry)

    def store(self, poly: MacPoly):
        self.directory.mkdir(parents=True, exist_ok=True)
        lock_path = self.directory / f".macdonald-n{poly.n}.lock"
        with open(lock_path, "w") as lock:
            fcntl.flock(lock, fcntl.LOCK_EX)
            entries = self._read(poly.n)
            item = poly.to_json()
            item["engine_version"] = ENGINE_VERSION
            entries[item["lambda"]] = item
            payload = json.dumps(sorted(entries.values(), key=lambda e: e["lambda"]), indent=1)
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".mac-", suffix=".json")
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
            os.replace(tmp, self.path(poly.n))


@lru_cache(maxsize=None)
def _macdonald_cached(lam):
    return _solve(lam)


def macdonald(lam, n: int | None = None, cache: MacdonaldCache | None = None) -> MacPoly:
    lam = tuple(lam)
    if n is not None and n != len(lam):
        raise ValueError(f"weight {lam} does not have {n} entries")
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    if cache is not None:
        hit = cache.load(lam)
        if hit is not None:
            return hit
    poly = _macdonald_cached(lam)
    if cache is not None:
        cache.store(poly)
    return poly


def specialize_mac(P: MacPoly, k: int) -> MacPoly:
    if k <= 0:
        raise ValueError("t = q^k needs k > 0")
    return MacPoly(P.lam, {mu: c.specialize_t(k) for mu, c in P.coeffs.items()})


def expand_in_mac(f: LaurentPoly, k: int | None = None) -> dict:
    """Coefficients of a symmetric f in the P-basis (at t = q^k if k is given)."""
    rest = dict(f.to_monomial_basis())
    out = {}
    while rest:
        top = max(rest)
        c = rest[top]
        P = macdonald(top)
        if k is not None:
            P = specialize_mac(P, k)
        for mu, v in P.coeffs.items():
            new = rest.get(mu, ZERO) - c * v
            if new.is_zero():
                rest.pop(mu, None)
            else:
                rest[mu] = new
        out[top] = c
    return out


def gaussian_eigenvalue(lam, n: int | None = None) -> RatFunc:
    """prod_i q^{lam_i^2} t^{(n - 2i) lam_i}."""
    lam = tuple(lam)
    n = len(lam) if n is None else n
    out = ONE
    for i, a in enumerate(lam, start=1):
        out = out * Q ** (a * a) * T ** ((n - 2 * i) * a)
    return out


def _p_matrix_column(op, mu):
    """P-basis expansion of op applied to P_mu."""
    return expand_in_mac(op.apply(macdonald(mu).to_laurent()))


def tau_window_check(n: int = 2, max_size: int = 4):
    """Windowed check of Gamma r(s X s) Gamma^{-1} = q^n r(s Y X s) on the P-basis.

    Gamma is diagonal on P_lambda with gaussian_eigenvalue.  Columns are taken
    for P_mu with |mu| + n <= max_size so both images stay in the window.
    Alongside the literal identity the report records the per-column scalars,
    which makes any normalization mismatch visible.
    """
    from .daha import gen_X, gen_Y, _product, spherical
    from .laurent import partitions
    from .report import VerificationReport

    rep = VerificationReport("tau-window", {"n": n, "max_size": max_size})
    xs = _product([gen_X(i, n) for i in range(1, n + 1)], n)
    ys = _product([gen_Y(i, n) for i in range(1, n + 1)], n)
    A = spherical(xs)
    B = spherical(ys * xs).scale(Q ** n)
    for d in range(0, max_size - n + 1):
        for mu in partitions(d, n):
            col_a = _p_matrix_column(A, mu)
            col_b = _p_matrix_column(B, mu)
            g_mu = gaussian_eigenvalue(mu, n)
            lhs = {nu: c * gaussian_eigenvalue(nu, n) / g_mu for nu, c in col_a.items()}
            ok = lhs == col_b
            witness = ""
            if not ok:
                ratios = {format_weight(nu): str(col_b.get(nu, ZERO) / c) for nu, c in lhs.items()}
                witness = f"rhs/lhs per row: {ratios}"
            rep.add(f"column P[{format_weight(mu)}]", ok, witness)
    return rep.finish()
