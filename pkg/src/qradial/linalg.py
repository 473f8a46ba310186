"""Sparse exact linear algebra over RatFunc.

Vectors are dicts index -> RatFunc with no stored zeros.  Matrices are lists of
column vectors (column j is the image of basis vector j).
"""

from __future__ import annotations

from .coeff import ONE, RatFunc



def add_into(acc: dict, vec: dict, c=ONE):
    """acc += c * vec, in place."""
    one = c.is_one()
    for k, v in vec.items():
        term = v if one else v * c
        old = acc.get(k)
        if old is None:
            acc[k] = term
        else:
            s = old + term
            if s.is_zero():
                del acc[k]
            else:
                acc[k] = s
    return acc


def scale(vec: dict, c) -> dict:
    if c.is_zero():
        return {}
    return {k: v * c for k, v in vec.items()}


def lin_comb(pairs) -> dict:
    out = {}
    for c, vec in pairs:
        if not c.is_zero():
            add_into(out, vec, c)
    return out


def mat_vec(mat, vec: dict) -> dict:
    out = {}
    for j, c in vec.items():
        col = mat[j]
        if col:
            add_into(out, col, c)
    return out


def mat_mul(a, b):
    return [mat_vec(a, col) for col in b]


def mat_sub(a, b):
    out = []
    for ca, cb in zip(a, b):
        col = dict(ca)
        add_into(col, cb, -ONE)
        out.append(col)
    return out


def mat_scale(a, c):
    return [scale(col, c) for col in a]


def identity(dim: int):
    return [{j: ONE} for j in range(dim)]


def is_zero_matrix(a) -> bool:
    return all(not col for col in a)


def mat_equal(a, b) -> bool:
    return len(a) == len(b) and all(ca == cb for ca, cb in zip(a, b))


def transpose(a, nrows: int):
    out = [dict() for _ in range(nrows)]
    for j, col in enumerate(a):
        for i, v in col.items():
            out[i][j] = v
    return out


def _pick_pivot(vec: dict):
    best, best_key = None, None
    for k, v in vec.items():
        key = (len(str(v)), k)
        if best_key is None or key < best_key:
            best, best_key = k, key
    return best


class EchelonBasis:
    """Incremental semi-echelon form that remembers how each row was built.

    Each stored row r_k has a pivot p_k with coefficient 1 and vanishes at the
    pivots of earlier rows; ``trans[k]`` expresses r_k in the added vectors.
    """

    def __init__(self):
        self.rows = []
        self.pivots = []
        self.trans = []
        self.count = 0

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict):
        v = dict(vec)
        coords = {}
        for row, p, tr in zip(self.rows, self.pivots, self.trans):
            c = v.get(p)
            if c is not None:
                add_into(v, row, -c)
                add_into(coords, tr, c)
        return v, coords

    def add(self, vec: dict) -> bool:
        """Add vec if independent; returns True when it was new."""
        resid, coords = self.reduce(vec)
        if not resid:
            return False
        p = _pick_pivot(resid)
        inv = resid[p].inverse()
        tr = scale(coords, -ONE)
        tr[self.count] = ONE
        self.rows.append(scale(resid, inv))
        self.pivots.append(p)
        self.trans.append(scale(tr, inv))
        self.count += 1
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def coordinates(self, vec: dict) -> dict:
        """Coordinates of vec in the added vectors; ValueError if outside the span."""
        resid, coords = self.reduce(vec)
        if resid:
            raise ValueError("vector not in span")
        return coords


def rref(rows, key=None):
    """Row-reduce a list of sparse rows; returns {pivot: row} with pivots cleared elsewhere.

    With ``key`` the pivot of each row is its largest entry under that key
    (a leading-term choice); otherwise the entry with the shortest coefficient.
    """
    piv = {}
    for r in rows:
        v = dict(r)
        for p, pr in piv.items():
            c = v.get(p)
            if c is not None:
                add_into(v, pr, -c)
        if not v:
            continue
        p = max(v, key=key) if key is not None else _pick_pivot(v)
        v = scale(v, v[p].inverse())
        for q_, qr in piv.items():
            c = qr.get(p)
            if c is not None:
                add_into(qr, v, -c)
        piv[p] = v
    return piv


def rank(rows) -> int:
    basis = EchelonBasis()
    r = 0
    for row in rows:
        if basis.add(row):
            r += 1
    return r


def nullspace(rows, unknowns):
    """Basis of {x : row . x = 0 for all rows}, x indexed by ``unknowns``."""
    piv = rref(rows)
    free = [u for u in unknowns if u not in piv]
    basis = []
    for f in free:
        vec = {f: ONE}
        for p, row in piv.items():
            c = row.get(f)
            if c is not None:
                vec[p] = -c
        basis.append(vec)
    return basis


def solve(rows, rhs, unknowns):
    """One solution x of rows . x = rhs (rhs a list of RatFunc), or None."""
    aug = []
    marker = object()
    for row, b in zip(rows, rhs):
        r = dict(row)
        if not b.is_zero():
            r[marker] = b
        aug.append(r)
    piv = rref(aug)
    if marker in piv:
        return None
    sol = {}
    for p, row in piv.items():
        c = row.get(marker)
        if c is not None:
            sol[p] = c
    return sol
