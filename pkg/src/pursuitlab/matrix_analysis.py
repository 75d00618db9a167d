"""Spectral quantities used by the recovery bounds.

Covers the spectral norm, restricted isometry constants (exact by exhaustive
submatrix enumeration at small scale, Monte Carlo lower bounds otherwise),
largest K-column-submatrix spectral norms, and the closed-form bound on the
isometry constant of an additively perturbed matrix.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._kernels import kcol_scan, ric_scan

#: Largest number of submatrices the exact enumeration routines will visit.
DEFAULT_ENUMERATION_CAP = 20_000

_POWER_ITER_CAP = 10_000
_GRAM_DIM_LIMIT = 2_048


class EnumerationBudgetError(ValueError):
    """Raised when an exact submatrix scan would exceed its enumeration cap."""


@dataclass(frozen=True)
class RicEstimate:
    """Restricted isometry constant at level k, with provenance.

    ``method`` is "exact" when every k-column submatrix was visited and
    "monte-carlo-lower-bound" when only ``samples`` random submatrices were;
    in the latter case the true constant can only be larger.
    """

    k: int
    value: float
    method: str
    samples: int = 0


def _validate_matrix(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a nonempty 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _validate_level(a, k):
    if not 1 <= k <= a.shape[1]:
        raise ValueError(f"need 1 <= k <= {a.shape[1]} columns, got k={k}")


def spectral_norm(m, tol=1e-10):
    """Largest singular value of m within relative tolerance tol.

    Small problems (smaller dimension at most 2048) form the Gram matrix on
    that side and take the square root of its top eigenvalue, which is exact.
    Larger problems run a power iteration on the Gram operator from the
    normalized all-ones vector, restarting from a canonical basis vector if
    the iterate ever collapses, until the Rayleigh quotient moves by less
    than tol relatively (capped at 10000 passes).

    Parameters
    ----------
    m : ndarray of shape (rows, cols)
    tol : float
        Relative tolerance on the returned value.

    Returns
    -------
    float
    """
    a = _validate_matrix(m)
    rows, cols = a.shape
    if min(rows, cols) <= _GRAM_DIM_LIMIT:
        gram = a @ a.T if rows <= cols else a.T @ a
        top = np.linalg.eigvalsh(gram)[-1]
        return float(np.sqrt(max(top, 0.0)))

    def gram_apply(v):
        return a.T @ (a @ v)

    v = np.ones(cols) / np.sqrt(cols)
    rayleigh = 0.0
    restart = 0
    for _ in range(_POWER_ITER_CAP):
        w = gram_apply(v)
        wnorm = np.linalg.norm(w)
        if wnorm == 0.0:
            # started inside the null space; restart deterministically
            v = np.zeros(cols)
            v[restart % cols] = 1.0
            restart += 1
            continue
        new_rayleigh = float(v @ w)
        v = w / wnorm
        if rayleigh > 0.0 and abs(new_rayleigh - rayleigh) <= tol * rayleigh:
            rayleigh = new_rayleigh
            break
        rayleigh = new_rayleigh
    return float(np.sqrt(max(rayleigh, 0.0)))


def _all_k_subsets(n, k):
    subsets = np.fromiter(
        (i for combo in combinations(range(n), k) for i in combo),
        dtype=np.int64,
        count=math.comb(n, k) * k,
    )
    return subsets.reshape(-1, k)


def _sampled_k_subsets(n, k, samples, rng):
    # one sequential draw per sample so that a longer run with the same seed
    # extends a shorter one (nested sample sets)
    subsets = np.empty((samples, k), dtype=np.int64)
    for i in range(samples):
        subsets[i] = np.sort(rng.choice(n, size=k, replace=False))
    return subsets


def exact_ric(a, k, cap=DEFAULT_ENUMERATION_CAP):
    """Exact restricted isometry constant at level k by full enumeration.

    Visits every k-column submatrix, takes the extremal eigenvalues of its
    Gram matrix, and returns the largest deviation max(lmax - 1, 1 - lmin).

    Parameters
    ----------
    a : ndarray of shape (m, n)
    k : int
        Isometry level, 1 <= k <= n.
    cap : int
        Refuse to enumerate more than this many submatrices.

    Returns
    -------
    RicEstimate
        With ``method="exact"``.

    Raises
    ------
    EnumerationBudgetError
        If C(n, k) exceeds cap; use mc_ric_lower_bound instead.
    """
    a = _validate_matrix(a)
    _validate_level(a, k)
    n = a.shape[1]
    count = math.comb(n, k)
    if count > cap:
        raise EnumerationBudgetError(
            f"C({n}, {k}) = {count} submatrices exceeds the cap of {cap}; "
            "use mc_ric_lower_bound for a sampled lower bound"
        )
    value, _ = ric_scan(a, _all_k_subsets(n, k))
    return RicEstimate(k=k, value=float(value), method="exact")


def mc_ric_lower_bound(a, k, samples, rng):
    """Monte Carlo lower bound on the level-k restricted isometry constant.

    Samples k-subsets of columns i.i.d. uniformly and returns the largest
    isometry deviation seen.  As a maximum over a subset of the search space
    it never exceeds the exact constant, and with the same generator seed a
    larger sample count extends the smaller one, so the estimate is
    nondecreasing in ``samples``.

    Parameters
    ----------
    a : ndarray of shape (m, n)
    k : int
    samples : int
        Number of submatrices to draw, at least 1.
    rng : numpy.random.Generator

    Returns
    -------
    RicEstimate
        With ``method="monte-carlo-lower-bound"``.
    """
    a = _validate_matrix(a)
    _validate_level(a, k)
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    subsets = _sampled_k_subsets(a.shape[1], k, samples, rng)
    value, _ = ric_scan(a, subsets)
    return RicEstimate(
        k=k, value=float(value), method="monte-carlo-lower-bound",
        samples=samples,
    )


def k_col_spectral_norm(a, k, mode="exact", budget=DEFAULT_ENUMERATION_CAP,
                        rng=None):
    """Largest spectral norm over k-column submatrices of a.

    Parameters
    ----------
    a : ndarray of shape (m, n)
    k : int
    mode : {"exact", "sampled"}
        Exact enumeration of all C(n, k) submatrices, or a sampled lower
        bound visiting ``budget`` random submatrices.
    budget : int
        Enumeration cap in exact mode; sample count in sampled mode.
    rng : numpy.random.Generator, optional
        Used by sampled mode only; defaults to a fixed-seed generator so the
        sampled value is reproducible.

    Returns
    -------
    float

    Raises
    ------
    EnumerationBudgetError
        In exact mode when C(n, k) exceeds budget.
    """
    a = _validate_matrix(a)
    _validate_level(a, k)
    n = a.shape[1]
    if mode == "exact":
        count = math.comb(n, k)
        if count > budget:
            raise EnumerationBudgetError(
                f"C({n}, {k}) = {count} submatrices exceeds the budget of "
                f"{budget}; use mode='sampled'"
            )
        subsets = _all_k_subsets(n, k)
    elif mode == "sampled":
        if rng is None:
            rng = np.random.default_rng(0)
        subsets = _sampled_k_subsets(n, k, budget, rng)
    else:
        raise ValueError(f"mode must be 'exact' or 'sampled', got {mode!r}")
    top, _ = kcol_scan(a, subsets)
    return float(np.sqrt(max(top, 0.0)))


def perturbed_ric_bound(delta_k, eps_a_k):
    """Upper bound on the isometry constant of an additively perturbed matrix.

    If A has level-K constant delta_k and the perturbation E satisfies
    ||E||_2^(K) = eps_a_k * ||A||_2^(K), then A + E has level-K constant at
    most (1 + delta_k) * (1 + eps_a_k)**2 - 1.
    """
    if delta_k < 0 or eps_a_k < 0:
        raise ValueError(
            f"inputs must be nonnegative, got delta_k={delta_k}, "
            f"eps_a_k={eps_a_k}"
        )
    return (1.0 + delta_k) * (1.0 + eps_a_k) ** 2 - 1.0
