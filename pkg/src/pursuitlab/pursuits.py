"""Greedy sparse-recovery pursuits: CoSaMP, subspace pursuit, and IHT.

All three solve y ~ A s for a K-sparse s by iterating support selection,
least-squares fitting, and hard thresholding.  The iteration bodies live in
``_kernels`` (numba-compiled by default); this module owns validation,
option handling, and result packaging.

Stopping is a composite of three tests evaluated after every iteration:
relative residual below ``residual_tol``, relative residual change below
``stall_tol`` (stall), or ``max_iters`` reached.  Divergence is detected
separately and reported on the output rather than raised, because parameter
sweeps routinely push the algorithms past their guarantee regions.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .signals import best_k_split


@dataclass(frozen=True)
class PursuitOptions:
    """Shared knobs for the three pursuits.

    ``divergence_factor`` bounds how far the residual (and, for IHT, the
    iterate norm) may grow relative to the measurements before the run is
    declared diverged.
    """

    k: int
    max_iters: int = 100
    residual_tol: float = 1e-6
    stall_tol: float = 1e-7
    divergence_factor: float = 10.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"sparsity level must be positive, got {self.k}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.residual_tol < 0 or self.stall_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.divergence_factor <= 1:
            raise ValueError(
                f"divergence_factor must exceed 1, got {self.divergence_factor}"
            )


@dataclass(frozen=True)
class RecoveryOutput:
    """Result of one pursuit run.

    ``residual_history`` holds ||y - A s^[l]||_2 for l = 0 .. iterations, so
    its length is always iterations + 1.  ``rank_warnings`` counts the
    rank-deficient least-squares subproblems encountered (each solved in the
    minimum-norm sense).
    """

    estimate: np.ndarray
    support: np.ndarray
    iterations: int
    residual_history: np.ndarray
    converged: bool
    diverged: bool
    rank_warnings: int = 0


def hard_threshold(v, k):
    """Keep the k largest-magnitude entries of v, zeroing the rest.

    Ties in magnitude keep the lowest index.
    """
    return best_k_split(v, k).head


def ls_on_support(a, y, support):
    """Least-squares fit of y restricted to the given columns of a.

    Returns a full-length coefficient vector that is zero off the support.
    The subproblem is solved through an orthogonal factorization; a
    rank-deficient column subset yields the minimum-norm solution and a
    RuntimeWarning instead of an error.

    Parameters
    ----------
    a : ndarray of shape (m, n)
    y : ndarray of shape (m,)
    support : array_like of int
        Column indices; duplicates are ignored.

    Returns
    -------
    ndarray of shape (n,)
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    idx = np.unique(np.asarray(support, dtype=np.int64))
    if idx.size > a.shape[0]:
        raise ValueError(
            f"support size {idx.size} exceeds the {a.shape[0]} rows of a"
        )
    out = np.zeros(a.shape[1])
    if idx.size == 0:
        return out
    coef, rank = _kernels._ls_fit(a, idx, y)
    if rank < idx.size:
        warnings.warn(
            f"rank-deficient least-squares subproblem ({rank} < {idx.size}); "
            "returning the minimum-norm solution",
            RuntimeWarning,
            stacklevel=2,
        )
    out[idx] = coef
    return out


def _validate_problem(a, y, opts, k_limit_rows):
    a = np.ascontiguousarray(a, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if y.shape != (a.shape[0],):
        raise ValueError(
            f"measurement length {y.shape} does not match the {a.shape[0]} rows"
        )
    if opts.k > a.shape[1]:
        raise ValueError(
            f"sparsity {opts.k} exceeds the {a.shape[1]} columns of a"
        )
    if k_limit_rows and opts.k > a.shape[0]:
        raise ValueError(
            f"sparsity {opts.k} exceeds the {a.shape[0]} rows of a"
        )
    return a, y


def _package(kernel_result):
    estimate, iterations, history, converged, diverged, rank_warnings = \
        kernel_result
    if rank_warnings > 0:
        warnings.warn(
            f"{rank_warnings} rank-deficient least-squares subproblem(s); "
            "minimum-norm solutions were used",
            RuntimeWarning,
            stacklevel=3,
        )
    return RecoveryOutput(
        estimate=estimate,
        support=np.flatnonzero(estimate),
        iterations=int(iterations),
        residual_history=history,
        converged=bool(converged),
        diverged=bool(diverged),
        rank_warnings=int(rank_warnings),
    )


def cosamp(a, y, opts):
    """Compressive sampling matching pursuit.

    Each iteration correlates the residual with the columns of a, merges the
    2K strongest candidates with the current support, solves least squares on
    the merged set, and keeps the K largest coefficients.

    Parameters
    ----------
    a : ndarray of shape (m, n)
    y : ndarray of shape (m,)
    opts : PursuitOptions

    Returns
    -------
    RecoveryOutput
    """
    a, y = _validate_problem(a, y, opts, k_limit_rows=True)
    return _package(_kernels.cosamp_loop(
        a, y, opts.k, opts.max_iters, opts.residual_tol, opts.stall_tol,
        opts.divergence_factor,
    ))


def sp(a, y, opts):
    """Subspace pursuit.

    Starts from a least-squares fit on the K columns most correlated with y.
    Each iteration merges the K strongest residual correlations into the
    support, fits, keeps the K largest coefficients, and refits on the kept
    support, so the returned residual is orthogonal to the selected columns.

    Parameters
    ----------
    a : ndarray of shape (m, n)
    y : ndarray of shape (m,)
    opts : PursuitOptions

    Returns
    -------
    RecoveryOutput
    """
    a, y = _validate_problem(a, y, opts, k_limit_rows=True)
    return _package(_kernels.sp_loop(
        a, y, opts.k, opts.max_iters, opts.residual_tol, opts.stall_tol,
        opts.divergence_factor,
    ))


def iht(a, y, opts):
    """Iterative hard thresholding with unit step size.

    Each iteration takes one gradient step s + A.T @ (y - A s) and hard
    thresholds to the K largest magnitudes.  On top of the shared stopping
    tests, a run is declared diverged when the iterate norm exceeds
    divergence_factor * ||y|| / (smallest column norm of a) or the residual
    grows for 10 consecutive iterations; without this the iterates overflow
    once the step operator stops being a contraction.

    Parameters
    ----------
    a : ndarray of shape (m, n)
    y : ndarray of shape (m,)
    opts : PursuitOptions

    Returns
    -------
    RecoveryOutput
    """
    a, y = _validate_problem(a, y, opts, k_limit_rows=False)
    col_floor = float(np.min(np.linalg.norm(a, axis=0)))
    col_floor = max(col_floor, np.finfo(float).tiny)
    return _package(_kernels.iht_loop(
        a, y, opts.k, opts.max_iters, opts.residual_tol, opts.stall_tol,
        opts.divergence_factor, col_floor,
    ))
