"""Test-signal generators and best-K approximation analysis.

Three signal classes are supported: exactly sparse vectors with Gaussian
amplitudes, compressible vectors with power-law ordered magnitudes, and
strongly decaying vectors with geometric ordered magnitudes.  The module also
computes best-K splits and the two tail ratios

    r_k = ||s - s_K||_2 / ||s||_2
    s_k = ||s - s_K||_1 / (sqrt(K) * ||s||_2)

that quantify how far a vector is from being K-sparse.
"""

from typing import NamedTuple

import numpy as np


class BestKSplit(NamedTuple):
    """Decomposition s = head + tail where head is the best K-term part."""

    head: np.ndarray
    tail: np.ndarray
    k: int


class ApproxRatios(NamedTuple):
    """Relative l2 and scaled l1 norms of the best-K approximation tail."""

    r_k: float
    s_k: float


def gen_sparse(n, k, rng):
    """Draw an exactly k-sparse vector with standard normal amplitudes.

    The support is a uniformly random size-k subset of {0, ..., n-1} and the
    nonzero values are i.i.d. N(0, 1), redrawn in the (measure-zero) event
    that one comes out exactly zero.

    Parameters
    ----------
    n : int
        Signal dimension.
    k : int
        Number of nonzero entries, 1 <= k <= n.
    rng : numpy.random.Generator
        Source of randomness.

    Returns
    -------
    ndarray of shape (n,)
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    support = rng.choice(n, size=k, replace=False)
    values = rng.standard_normal(k)
    while np.any(values == 0.0):
        zero = values == 0.0
        values[zero] = rng.standard_normal(np.count_nonzero(zero))
    s = np.zeros(n)
    s[support] = values
    return s


def gen_power_law(n, radius, p, rng=None):
    """Build a compressible vector whose l-th magnitude is radius * l**(-p).

    With the default ``rng=None`` the entries are positive and already sorted
    (entry i holds magnitude rank i+1).  Passing a generator randomizes both
    the signs and the positions while keeping the magnitude profile exact.

    Parameters
    ----------
    n : int
        Signal dimension.
    radius : float
        Magnitude of the largest entry; must be positive.
    p : float
        Decay exponent, strictly greater than 1.
    rng : numpy.random.Generator, optional
        Randomizes signs and entry positions when given.

    Returns
    -------
    ndarray of shape (n,)
    """
    if p <= 1:
        raise ValueError(f"decay exponent must exceed 1, got p={p}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    s = radius * np.arange(1, n + 1, dtype=float) ** (-p)
    if rng is not None:
        s *= rng.choice([-1.0, 1.0], size=n)
        s = s[rng.permutation(n)]
    return s


def gen_strong_decay(n, p, scale):
    """Build a vector with exact geometric magnitude decay scale * p**(-l).

    Each ordered magnitude is exactly p times the next one, the tightest
    profile with the strong-decay property |s|_(l) >= p * |s|_(l+1).

    Parameters
    ----------
    n : int
        Signal dimension.
    p : float
        Decay factor per rank, strictly greater than 1.
    scale : float
        Overall amplitude; the leading entry equals scale / p.

    Returns
    -------
    ndarray of shape (n,)
    """
    if p <= 1:
        raise ValueError(f"decay factor must exceed 1, got p={p}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return scale * float(p) ** (-np.arange(1, n + 1, dtype=float))


def best_k_split(s, k):
    """Split s into its best K-term approximation and the remainder.

    The head keeps the k largest-magnitude entries (ties keep the lowest
    index) and zeroes the rest; the tail is s - head, so the two parts always
    reconstruct s exactly.

    Parameters
    ----------
    s : ndarray
        Input vector.
    k : int
        Number of entries to keep, 1 <= k <= len(s).

    Returns
    -------
    BestKSplit
    """
    s = np.asarray(s, dtype=float)
    if not 1 <= k <= s.size:
        raise ValueError(f"need 1 <= k <= {s.size}, got k={k}")
    order = np.argsort(-np.abs(s), kind="stable")
    head = np.zeros_like(s)
    head[order[:k]] = s[order[:k]]
    return BestKSplit(head=head, tail=s - head, k=k)


def approx_ratios(s, k):
    """Tail ratios r_k and s_k of the best-K approximation of s.

    Parameters
    ----------
    s : ndarray
        Input vector; must have positive l2 norm.
    k : int
        Approximation order.

    Returns
    -------
    ApproxRatios
        r_k = ||tail||_2 / ||s||_2 and s_k = ||tail||_1 / (sqrt(k) * ||s||_2).
    """
    s = np.asarray(s, dtype=float)
    snorm = np.linalg.norm(s)
    if snorm == 0.0:
        raise ValueError("approximation ratios are undefined for the zero signal")
    tail = best_k_split(s, k).tail
    return ApproxRatios(
        r_k=float(np.linalg.norm(tail) / snorm),
        s_k=float(np.linalg.norm(tail, 1) / (np.sqrt(k) * snorm)),
    )
