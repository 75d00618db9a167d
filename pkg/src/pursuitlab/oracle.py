"""Oracle least-squares recovery and its worst-case error analysis.

The oracle knows the true support S and simply solves least squares on the
corresponding columns.  Its error splits exactly into an on-support part
(noise filtered through the pseudo-inverse) and an off-support part (the
signal tail), which makes it the natural baseline for the pursuits.

The module also constructs adversarial instances on which the oracle error
provably exceeds a closed-form lower bound: the system perturbation is a
scalar multiple of the matrix itself, the head signal is the top right
singular vector of the extremal K-column submatrix, and tail and noise are
aligned so that no cancellation occurs.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .matrix_analysis import (
    DEFAULT_ENUMERATION_CAP,
    _all_k_subsets,
    _sampled_k_subsets,
    _validate_matrix,
)
from .pursuits import ls_on_support


@dataclass(frozen=True)
class AdversarialInstance:
    """Worst-case oracle input: signal, noise, perturbation, and support.

    ``kcol_norm`` records the spectral norm of the selected K-column
    submatrix and ``kcol_method`` whether the selection searched all subsets
    ("exact") or only a sample ("sampled"); in the sampled case the recorded
    norm may undershoot the true K-column maximum.
    """

    s: np.ndarray
    e_vec: np.ndarray
    e_mat: np.ndarray
    support: np.ndarray
    eps_a_k: float
    kcol_norm: float
    kcol_method: str


def oracle_ls(a_tilde, y_tilde, support):
    """Least-squares recovery given the true support.

    Parameters
    ----------
    a_tilde : ndarray of shape (m, n)
        The matrix available to the estimator.
    y_tilde : ndarray of shape (m,)
        Noisy measurements.
    support : array_like of int
        The K known signal positions, K <= m.

    Returns
    -------
    ndarray of shape (n,)
        Zero off the support, the restricted pseudo-inverse solution on it.
    """
    return ls_on_support(a_tilde, y_tilde, support)


def error_decomposition(s, s_hat, support):
    """Split the squared estimation error by support membership.

    For an estimate that vanishes off the support the two parts are exactly
    the filtered-noise energy and the signal-tail energy, and they always sum
    to ||s - s_hat||_2^2.

    Returns
    -------
    (float, float)
        Squared error on the support and off it.
    """
    s = np.asarray(s, dtype=float)
    s_hat = np.asarray(s_hat, dtype=float)
    diff_sq = (s - s_hat) ** 2
    mask = np.zeros(s.size, dtype=bool)
    mask[np.asarray(support, dtype=np.int64)] = True
    return float(diff_sq[mask].sum()), float(diff_sq[~mask].sum())


def build_adversarial_instance(a, k, eps_a, noise_norm, rng,
                               tail_norm=0.1, cap=DEFAULT_ENUMERATION_CAP,
                               samples=200):
    """Construct a worst-case instance for oracle recovery on the matrix a.

    The construction aligns every error source: the support S maximizes the
    K-column spectral norm, the perturbation is E = eps_a * a (so its
    restriction to S attains the full K-column norm), the unit-norm head
    signal is the top right singular vector of the S columns, the tail sits
    on the lowest disjoint K positions with its sign chosen to reinforce the
    perturbation, and the noise points along the projection of the combined
    error onto the column space of the S columns.

    Parameters
    ----------
    a : ndarray of shape (m, n)
    k : int
        Sparsity of both the head and the tail; needs 2k <= n.
    eps_a : float
        Relative K-column perturbation level, nonnegative.
    noise_norm : float
        Target l2 norm of the measurement noise, nonnegative.
    rng : numpy.random.Generator
        Used only when the subset search falls back to sampling.
    tail_norm : float
        Requested l2 norm of the tail; shrunk when needed to keep every tail
        magnitude strictly below every head magnitude, so the head stays the
        best K-term approximation.
    cap : int
        Exhaustive subset search is used while C(n, k) <= cap.
    samples : int
        Subset sample count beyond the cap.

    Returns
    -------
    AdversarialInstance
    """
    a = _validate_matrix(a)
    m, n = a.shape
    if not 1 <= k <= m or 2 * k > n:
        raise ValueError(f"need 1 <= k <= {m} and 2k <= {n}, got k={k}")
    if eps_a < 0 or noise_norm < 0 or tail_norm <= 0:
        raise ValueError("eps_a and noise_norm must be nonnegative, tail_norm positive")

    if math.comb(n, k) <= cap:
        subsets = _all_k_subsets(n, k)
        method = "exact"
    else:
        subsets = _sampled_k_subsets(n, k, samples, rng)
        method = "sampled"
    top_sq, row = _kernels.kcol_scan(a, subsets)
    support = np.sort(subsets[row])

    a_s = a[:, support]
    _, _, vh = np.linalg.svd(a_s, full_matrices=False)
    head_vals = vh[0]
    if head_vals[np.argmax(np.abs(head_vals))] < 0:
        head_vals = -head_vals
    s = np.zeros(n)
    s[support] = head_vals

    # lowest-indexed k positions disjoint from the support carry the tail
    free = np.setdiff1d(np.arange(n), support)[:k]
    head_floor = np.min(np.abs(head_vals[head_vals != 0.0]))
    per_entry = min(tail_norm / np.sqrt(k), 0.9 * head_floor)
    tail = np.zeros(n)
    tail[free] = per_entry

    e_mat = eps_a * a
    proj = a_s @ a_s.T
    if (-e_mat @ s) @ (proj @ (a @ tail)) < 0:
        tail = -tail
    s = s + tail

    if noise_norm == 0:
        e_vec = np.zeros(m)
    else:
        w = proj @ (-e_mat @ (s - tail) + a @ tail)
        wnorm = np.linalg.norm(w)
        if wnorm == 0.0:
            w = a_s[:, 0]
            wnorm = np.linalg.norm(w)
        e_vec = noise_norm * w / wnorm

    return AdversarialInstance(
        s=s, e_vec=e_vec, e_mat=e_mat, support=support, eps_a_k=float(eps_a),
        kcol_norm=float(np.sqrt(max(top_sq, 0.0))), kcol_method=method,
    )


def oracle_lower_bound(e_norm, es_term, approx_term, delta_k, delta_tilde_k,
                       psi_inv_norm=1.0):
    """Closed-form lower bound on the oracle estimation error.

    Evaluates

        (1 / (2 ||Psi^-1||_2)) * ( sqrt(1 - delta_k) / (1 + delta_tilde_k)
            * (e_norm + es_term) + approx_term / sqrt(2) )

    where ``es_term`` stands for ||E||_2^(K) * ||s_K||_2 and ``approx_term``
    for ||s||_2 * (r_K + s_K).

    Parameters
    ----------
    e_norm, es_term, approx_term : float
        Nonnegative magnitudes of the three error sources.
    delta_k : float
        Isometry constant of the nominal matrix, in [0, 1).
    delta_tilde_k : float
        Isometry constant of the perturbed matrix, in [0, 1).
    psi_inv_norm : float
        Spectral norm of the inverse sparsity basis, positive.

    Returns
    -------
    float
    """
    if not 0 <= delta_k < 1 or not 0 <= delta_tilde_k < 1:
        raise ValueError(
            f"isometry constants must lie in [0, 1), got {delta_k} and "
            f"{delta_tilde_k}"
        )
    if min(e_norm, es_term, approx_term) < 0 or psi_inv_norm <= 0:
        raise ValueError("error terms must be nonnegative and psi_inv_norm positive")
    gain = np.sqrt(1.0 - delta_k) / (1.0 + delta_tilde_k)
    return float(
        (gain * (e_norm + es_term) + approx_term / np.sqrt(2.0))
        / (2.0 * psi_inv_norm)
    )
