"""Named verification suites.

Each suite expands into independent tasks (a function plus arguments).
Tasks can run in a process pool. The merged report is always assembled in
task order, so output does not depend on scheduling.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor

from .coeff import ONE
from .linalg import add_into
from .report import VerificationReport

SUITES = (
    "daha-relations",
    "macdonald-eigen",
    "yang-baxter",
    "weyl",
    "moment",
    "pbw",
    "traces",
    "degeneration",
    "ek-ratio",
    "radial-dictionary",
    "appendix",
)

EK_RANGES = ((2, 2, 3), (2, 3, 3), (3, 2, 2))


# ---------------------------------------------------------------- task bodies

def _daha(n):
    from .daha import relation_checks

    return relation_checks(n)


def _eigen(n, max_size):
    from .daha import macdonald_operator
    from .laurent import elementary, partitions
    from .macdonald import mac_eigenvalue, macdonald

    rep = VerificationReport("macdonald-eigen", {"n": n, "max_size": max_size})
    ops = {(r, s): macdonald_operator(r, s, n) for r in range(1, n + 1) for s in (1, -1)}
    for d in range(max_size + 1):
        for lam in partitions(d, n):
            f = macdonald(lam).to_laurent()
            for (r, s), op in ops.items():
                ev = mac_eigenvalue(elementary(r, s, n), lam)
                rep.add(f"e_{r}^{'+' if s > 0 else '-'} on P{lam}", op.apply(f) == f.scale(ev))
    return rep.finish()


def _closed_form(n, max_size):
    from .daha import elementary_Y, macdonald_operator, spherical
    from .laurent import monomial_sym, partitions

    rep = VerificationReport("closed-form", {"n": n, "max_size": max_size})
    for r in range(1, n + 1):
        for s in (1, -1):
            closed = macdonald_operator(r, s, n)
            composed = spherical(elementary_Y(r, s, n))
            for d in range(max_size + 1):
                for lam in partitions(d, n):
                    m = monomial_sym(lam)
                    rep.add(f"e_{r}^{'+' if s > 0 else '-'} closed = composed on m{lam}",
                            closed.apply(m) == composed.apply(m))
    return rep.finish()


def _r_slots(n, vec, s, t):
    from .qgroup import r_matrix_vv

    out = {}
    for d, c in vec.items():
        for k, c2 in r_matrix_vv(n, d[s], d[t]).items():
            d2 = list(d)
            d2[s], d2[t] = divmod(k, n)
            add_into(out, {tuple(d2): c2}, c)
    return out


def _yang_baxter(n):
    from .coeff import Q
    from .qgroup import braiding, vector_module

    rep = VerificationReport("yang-baxter", {"n": n})
    bad = 0
    for idx in itertools.product(range(n), repeat=3):
        v = {idx: ONE}
        lhs = _r_slots(n, _r_slots(n, _r_slots(n, v, 1, 2), 0, 2), 0, 1)
        rhs = _r_slots(n, _r_slots(n, _r_slots(n, v, 0, 1), 0, 2), 1, 2)
        bad += lhs != rhs
    rep.add("R12 R13 R23 = R23 R13 R12 on V^3", bad == 0, f"{bad} basis vectors fail")
    V = vector_module(n)
    qq = Q - Q.inverse()
    bad = 0
    for j in range(n * n):
        e = {j: ONE}
        b = braiding(V, V, e)
        out = dict(braiding(V, V, b))
        add_into(out, b, -qq)
        add_into(out, e, -ONE)
        bad += bool(out)
    rep.add("(beta - q)(beta + q^-1) = 0 on V⊗V", bad == 0, f"{bad} basis vectors fail")
    return rep.finish()


def _braiding_intertwines(n, pair):
    from .qgroup import braiding, parse_module, tensor

    X, Y = (parse_module(d, n) for d in pair)
    XY, YX = tensor(X, Y), tensor(Y, X)
    rep = VerificationReport("braiding", {"n": n, "pair": list(pair)})
    bad = []
    for j in range(XY.dim):
        e = {j: ONE}
        gens = [(g, i) for i in range(n - 1) for g in "EFK"] + [("K", n - 1)]
        for g, i in gens:
            if braiding(X, Y, XY.act(g, i, e)) != YX.act(g, i, braiding(X, Y, e)):
                bad.append(f"{g}{i} on basis {j}")
    rep.add(f"beta on {pair[0]} ⊗ {pair[1]} intertwines", not bad, "; ".join(bad[:3]))
    return rep.finish()


def _weyl_relations(n):
    from .qweyl import qdiff_relation_check

    return qdiff_relation_check(n)


def _wbasic(n, m_max):
    from .qweyl import verify_wbasic

    return verify_wbasic(n, m_max)


def _moment_exchange(n, max_deg):
    from .qweyl import moment_exchange_check

    return moment_exchange_check(n, max_deg)


def _pbw(builder, n, max_total):
    from . import rewrite

    return rewrite.pbw_check(getattr(rewrite, builder)(n), max_total)


def _trace_invariance(n, max_power):
    from .rewrite import trace_invariance_check

    return trace_invariance_check(n, max_power)


def _ideal(k, n):
    from .rewrite import ideal_reduction_check

    return ideal_reduction_check(k, n)


def _degeneration(n):
    from .rewrite import trace_degeneration_check

    return trace_degeneration_check(n)


def _ek(n, k, max_deg):
    from .ek import ek_ratio_suite

    return ek_ratio_suite(n, k, max_deg)


def _radial(n, k, max_deg):
    from .ek import radial_dictionary_suite

    return radial_dictionary_suite(n, k, max_deg)


def _ribbon(max_size, alpha, ns):
    from .ek import ribbon_gaussian_check

    return ribbon_gaussian_check(max_size, alpha, ns)


def _appendix_traces(n):
    from .rewrite import appendix_trace_check

    return appendix_trace_check(n)


def _tau(n, max_size):
    from .macdonald import tau_window_check

    return tau_window_check(n, max_size)


# ---------------------------------------------------------------- plans

_PAIRS = (("V", "V"), ("V", "V*"), ("V*", "V"), ("V*", "V*"), ("S_q^2 V", "V"), ("V", "det^1"))


def _ns(n, default):
    return (n,) if n is not None else default


def plan(suite: str, n=None, k=None, max_deg=None, max_total_deg=None):
    """List of (label, function, args) for a suite, at acceptance scale unless capped."""
    if suite == "daha-relations":
        return [(f"n={m}", _daha, (m,)) for m in _ns(n, (2, 3))]
    if suite == "macdonald-eigen":
        out = []
        for m in _ns(n, (2, 3)):
            size = max_deg if max_deg is not None else (5 if m == 2 else 3)
            out.append((f"eigen n={m}", _eigen, (m, size)))
            size = max_deg if max_deg is not None else 4
            out.append((f"closed-form n={m}", _closed_form, (m, size)))
        return out
    if suite == "yang-baxter":
        out = []
        for m in _ns(n, (2, 3, 4)):
            out.append((f"n={m}", _yang_baxter, (m,)))
            out += [(f"n={m} {a}|{b}", _braiding_intertwines, (m, (a, b))) for a, b in _PAIRS]
        return out
    if suite == "weyl":
        out = [(f"relations n={m}", _weyl_relations, (m,)) for m in _ns(n, (1, 2, 3))]
        m_max = max_deg if max_deg is not None else 4
        out += [(f"wbasic n={m}", _wbasic, (m, m_max)) for m in _ns(n, (2, 3))]
        return out
    if suite == "moment":
        d = max_deg if max_deg is not None else 4
        return [(f"n={m}", _moment_exchange, (m, d)) for m in _ns(n, (2, 3))]
    if suite == "pbw":
        total = max_total_deg if max_total_deg is not None else 4
        builders = ("re_presentation", "div_presentation", "miv_presentation")
        return [(f"{b.split('_')[0]} n={m}", _pbw, (b, m, total)) for m in _ns(n, (2,)) for b in builders]
    if suite == "traces":
        p = max_deg if max_deg is not None else 3
        out = [(f"invariance n={m}", _trace_invariance, (m, p)) for m in _ns(n, (2, 3))]
        ks = (k,) if k is not None else (1, 2)
        out += [(f"ideal k={kk}", _ideal, (kk, 2)) for kk in ks]
        return out
    if suite == "degeneration":
        return [(f"n={m}", _degeneration, (m,)) for m in _ns(n, (1, 2, 3))]
    if suite in ("ek-ratio", "radial-dictionary"):
        fn = _ek if suite == "ek-ratio" else _radial
        if n is None and k is None and max_deg is None:
            ranges = EK_RANGES
        else:
            ranges = ((n or 2, k or 2, max_deg if max_deg is not None else (3 if (n or 2) == 2 else 2)),)
        return [(f"n={a} k={b}", fn, (a, b, c)) for a, b, c in ranges]
    if suite == "appendix":
        size = max_deg if max_deg is not None else 4
        ns = _ns(n, (1, 2, 3))
        out = [(f"ribbon alpha={a}", _ribbon, (size, a, ns)) for a in ((k,) if k else (1, 2, 3))]
        out += [(f"traces n={m}", _appendix_traces, (m,)) for m in _ns(n, (1, 2))]
        out.append(("tau n=2", _tau, (2, size)))
        return out
    raise KeyError(suite)


def _call(fn, args):
    return fn(*args).to_dict()


def run_suite(suite: str, jobs: int = 1, **params) -> VerificationReport:
    """Run every task of a suite and merge the sub-reports into one."""
    tasks = plan(suite, **params)
    rep = VerificationReport(suite, {k: v for k, v in params.items() if v is not None})
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_call, fn, args) for _, fn, args in tasks]
            results = [VerificationReport.from_dict(f.result()) for f in futures]
    else:
        results = [fn(*args) for _, fn, args in tasks]
    for (label, _, _), sub in zip(tasks, results):
        rep.extend(sub, prefix=f"[{label}] ")
    return rep.finish()
