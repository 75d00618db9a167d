"""Hot numerical kernels with a numba-compiled fast path.

Every kernel is a plain numpy function compiled with ``numba.njit`` when numba
is importable.  Setting the environment variable ``PURSUITLAB_NO_NUMBA=1``
(before import) selects the pure-numpy path: the same source functions run
undecorated.  benchmarks/bench_kernels.py and tests/test_kernels.py compare
the two paths through that flag.
"""

import os

import numpy as np


def _want_numba() -> bool:
    flag = os.environ.get("PURSUITLAB_NO_NUMBA", "").strip().lower()
    if flag in {"1", "true", "yes", "on"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USING_NUMBA = _want_numba()

if USING_NUMBA:
    from numba import njit

    def _jit(fn):
        return njit(cache=True)(fn)
else:
    def _jit(fn):
        return fn


@_jit
def _select_top(v, cap):
    """Indices of the up-to-``cap`` largest-magnitude nonzero entries of v.

    Stable descending magnitude order, so equal magnitudes resolve to the
    lowest index.  Exact zeros are never selected.
    """
    order = np.argsort(-np.abs(v), kind="mergesort")
    out = np.empty(cap, dtype=np.int64)
    picked = 0
    for j in range(v.shape[0]):
        if picked >= cap:
            break
        jj = order[j]
        if v[jj] == 0.0:
            break  # magnitudes are sorted, the rest are zero too
        out[picked] = jj
        picked += 1
    return out[:picked]


@_jit
def _ls_fit(a, idx, y):
    """Least-squares coefficients of y against the columns a[:, idx].

    Returns (coefficients, rank).  The solve goes through an explicit SVD
    with the cutoff max(shape) * eps * sigma_max, so rank-deficient subsets
    yield the minimum-norm solution and an honest rank in compiled and
    interpreted mode alike.  Empty index sets short-circuit because the
    LAPACK driver rejects zero-column problems.
    """
    if idx.shape[0] == 0:
        return np.zeros(0), 0
    sub = np.ascontiguousarray(a[:, idx])
    u, sing, vt = np.linalg.svd(sub, full_matrices=False)
    cutoff = max(sub.shape[0], sub.shape[1]) * 2.220446049250313e-16 * sing[0]
    rank = 0
    for j in range(sing.shape[0]):
        if sing[j] > cutoff:
            rank += 1
    # explicit contractions: the factor layouts differ between backends, so
    # BLAS would accumulate these small products in different orders
    coef = np.zeros(idx.shape[0])
    for j in range(rank):
        acc = 0.0
        for i in range(u.shape[0]):
            acc += u[i, j] * y[i]
        w = acc / sing[j]
        for i in range(idx.shape[0]):
            coef[i] += w * vt[j, i]
    return coef, rank


@_jit
def _l2(v):
    """Euclidean norm with a fixed left-to-right accumulation order.

    numpy's sum reduces pairwise while compiled loops run sequentially; a
    shared explicit loop keeps the two backends bit-identical.
    """
    acc = 0.0
    for i in range(v.shape[0]):
        acc += v[i] * v[i]
    return np.sqrt(acc)


@_jit
def cosamp_loop(a, y, k, max_iters, residual_tol, stall_tol,
                divergence_factor):
    m, n = a.shape
    ynorm = _l2(y)
    estimate = np.zeros(n)
    in_support = np.zeros(n, dtype=np.bool_)
    hist = np.empty(max_iters + 1)
    r = y.copy()
    rnorm = ynorm
    hist[0] = rnorm
    iterations = 0
    converged = rnorm <= residual_tol * ynorm
    diverged = False
    rank_warnings = 0
    cap = min(2 * k, n)
    while not converged and not diverged and iterations < max_iters:
        u = a.T @ r
        cand = in_support.copy()
        top = _select_top(u, cap)
        for j in range(top.shape[0]):
            cand[top[j]] = True
        union = np.nonzero(cand)[0]
        coef, rank = _ls_fit(a, union, y)
        if rank < union.shape[0]:
            rank_warnings += 1
        # pruning to the union loses nothing: entries off the union are zero
        keep = _select_top(coef, min(k, n))
        estimate = np.zeros(n)
        in_support = np.zeros(n, dtype=np.bool_)
        r = y.copy()
        for j in range(keep.shape[0]):
            col = union[keep[j]]
            val = coef[keep[j]]
            estimate[col] = val
            in_support[col] = True
            r -= a[:, col] * val
        new_rnorm = _l2(r)
        iterations += 1
        hist[iterations] = new_rnorm
        if new_rnorm > divergence_factor * ynorm:
            diverged = True
        elif new_rnorm <= residual_tol * ynorm:
            converged = True
        elif rnorm > 0.0 and abs(new_rnorm - rnorm) < stall_tol * rnorm:
            converged = True
        rnorm = new_rnorm
    return estimate, iterations, hist[:iterations + 1].copy(), \
        converged, diverged, rank_warnings


@_jit
def sp_loop(a, y, k, max_iters, residual_tol, stall_tol, divergence_factor):
    m, n = a.shape
    ynorm = _l2(y)
    cap = min(k, n)
    rank_warnings = 0
    # initialization stage: LS fit on the top-K correlation support
    sel = _select_top(a.T @ y, cap)
    in_support = np.zeros(n, dtype=np.bool_)
    for j in range(sel.shape[0]):
        in_support[sel[j]] = True
    support = np.nonzero(in_support)[0]
    coef, rank = _ls_fit(a, support, y)
    if rank < support.shape[0]:
        rank_warnings += 1
    estimate = np.zeros(n)
    r = y.copy()
    for j in range(support.shape[0]):
        estimate[support[j]] = coef[j]
        r -= a[:, support[j]] * coef[j]
    rnorm = _l2(r)
    hist = np.empty(max_iters + 1)
    hist[0] = rnorm
    iterations = 0
    converged = rnorm <= residual_tol * ynorm
    diverged = rnorm > divergence_factor * ynorm
    while not converged and not diverged and iterations < max_iters:
        u = a.T @ r
        cand = in_support.copy()
        top = _select_top(u, cap)
        for j in range(top.shape[0]):
            cand[top[j]] = True
        union = np.nonzero(cand)[0]
        coef, rank = _ls_fit(a, union, y)
        if rank < union.shape[0]:
            rank_warnings += 1
        keep = _select_top(coef, cap)
        in_support = np.zeros(n, dtype=np.bool_)
        for j in range(keep.shape[0]):
            in_support[union[keep[j]]] = True
        support = np.nonzero(in_support)[0]
        coef, rank = _ls_fit(a, support, y)
        if rank < support.shape[0]:
            rank_warnings += 1
        estimate = np.zeros(n)
        r = y.copy()
        for j in range(support.shape[0]):
            estimate[support[j]] = coef[j]
            r -= a[:, support[j]] * coef[j]
        new_rnorm = _l2(r)
        iterations += 1
        hist[iterations] = new_rnorm
        if new_rnorm > divergence_factor * ynorm:
            diverged = True
        elif new_rnorm <= residual_tol * ynorm:
            converged = True
        elif rnorm > 0.0 and abs(new_rnorm - rnorm) < stall_tol * rnorm:
            converged = True
        rnorm = new_rnorm
    return estimate, iterations, hist[:iterations + 1].copy(), \
        converged, diverged, rank_warnings


@_jit
def iht_loop(a, y, k, max_iters, residual_tol, stall_tol, divergence_factor,
             col_floor):
    m, n = a.shape
    ynorm = _l2(y)
    iterate_cap = divergence_factor * (ynorm / col_floor)
    estimate = np.zeros(n)
    hist = np.empty(max_iters + 1)
    r = y.copy()
    rnorm = ynorm
    hist[0] = rnorm
    iterations = 0
    converged = rnorm <= residual_tol * ynorm
    diverged = False
    growth_streak = 0
    while not converged and not diverged and iterations < max_iters:
        v = estimate + a.T @ r
        keep = _select_top(v, min(k, n))
        estimate = np.zeros(n)
        r = y.copy()
        snorm_sq = 0.0
        for j in range(keep.shape[0]):
            col = keep[j]
            val = v[col]
            estimate[col] = val
            snorm_sq += val * val
            r -= a[:, col] * val
        new_rnorm = _l2(r)
        iterations += 1
        hist[iterations] = new_rnorm
        if new_rnorm > rnorm:
            growth_streak += 1
        else:
            growth_streak = 0
        if new_rnorm > divergence_factor * ynorm:
            diverged = True
        elif np.sqrt(snorm_sq) > iterate_cap:
            diverged = True
        elif growth_streak >= 10:
            diverged = True
        elif new_rnorm <= residual_tol * ynorm:
            converged = True
        elif rnorm > 0.0 and abs(new_rnorm - rnorm) < stall_tol * rnorm:
            converged = True
        rnorm = new_rnorm
    return estimate, iterations, hist[:iterations + 1].copy(), \
        converged, diverged, 0


@_jit
def ric_scan(a, subsets):
    """Largest isometry deviation max(lmax - 1, 1 - lmin) over column subsets.

    ``subsets`` holds one k-subset of column indices per row.  Returns the
    maximal deviation and the row index attaining it.
    """
    count = subsets.shape[0]
    best = -1.0
    best_row = 0
    for i in range(count):
        sub = np.ascontiguousarray(a[:, subsets[i]])
        w = np.linalg.eigvalsh(sub.T @ sub)
        dev = max(w[-1] - 1.0, 1.0 - w[0])
        if dev > best:
            best = dev
            best_row = i
    return best, best_row


@_jit
def kcol_scan(a, subsets):
    """Largest squared spectral norm over column subsets, with argmax row."""
    count = subsets.shape[0]
    best = -1.0
    best_row = 0
    for i in range(count):
        sub = np.ascontiguousarray(a[:, subsets[i]])
        w = np.linalg.eigvalsh(sub.T @ sub)
        if w[-1] > best:
            best = w[-1]
            best_row = i
    return best, best_row
