"""Closed-form recovery guarantees for the three pursuits.

Each algorithm carries a set of constants parameterized by the restricted
isometry constant delta at level b*K: a contraction factor C, a per-iteration
noise factor C1, and a limit noise factor D = C1/(1 - C) in simplified form.
Evaluating the same formulas at the perturbed matrix's isometry constant
gives the perturbed-regime constants (called C-tilde and D-tilde here).

On top of the constants, the module evaluates the relative-error bounds for
perturbed systems (general and exactly-sparse forms), the iteration-count
estimate, the alternate bound for the scenario where measurements come from
the perturbed matrix while recovery uses the nominal one, and the closed-form
tail-ratio bounds of the two compressible signal classes.

Inputs that land where a guarantee formula stops being defined (a denominator
hits zero, a contraction factor reaches 1) raise OutOfRegimeError so sweeps
can record exactly where the theory gives out instead of reporting a
meaningless number.
"""

import math
from dataclasses import dataclass

ALGORITHMS = ("cosamp", "sp", "iht")

#: Per-algorithm leading factor a, RIP-level multiplier b, and RIC threshold c.
_SMALL_CONSTANTS = {
    "cosamp": (1.0, 4, 0.171),
    "sp": (1.26, 3, 0.206),
    "iht": (1.0, 3, 0.353),
}


class OutOfRegimeError(ValueError):
    """A guarantee formula was evaluated outside its region of validity."""


@dataclass(frozen=True)
class BoundConstants:
    """Nominal-matrix constants of one algorithm at a given delta."""

    algorithm: str
    a: float
    b: int
    c: float
    big_c: float
    c1: float
    d: float


@dataclass(frozen=True)
class PerturbedBoundConstants:
    """Perturbed-matrix constants: contraction and limit noise factor."""

    algorithm: str
    c_tilde: float
    d_tilde: float


def _check_algorithm(algorithm):
    if algorithm not in ALGORITHMS:
        raise ValueError(
            f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}"
        )


def _check_delta(delta):
    if not 0 <= delta < 1:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")


def contraction_factor(algorithm, delta):
    """Contraction factor C of one algorithm at isometry constant delta.

    Exposed separately from table1_constants because C stays well defined on
    all of [0, 1) while the limit factor D blows up earlier (for SP the D
    denominator crosses zero slightly before C reaches 1).
    """
    _check_algorithm(algorithm)
    _check_delta(delta)
    if algorithm == "cosamp":
        return 4.0 * delta / (1.0 - delta) ** 2
    if algorithm == "sp":
        return (2.0 * delta + 2.0 * delta ** 2) / (1.0 - delta) ** 3
    return math.sqrt(8.0) * delta


def _noise_factors(algorithm, delta):
    """C1 and D with the D denominator, which the caller must sign-check."""
    if algorithm == "cosamp":
        c1 = (6.0 + 2.0 * delta) / (1.0 - delta) ** 2
        d_num = 6.0 + 2.0 * delta
        d_den = 1.0 - 6.0 * delta + delta ** 2
    elif algorithm == "sp":
        c1 = 4.0 * (1.0 + delta) / (1.0 - delta) ** 2
        d_num = 5.0 - 4.0 * delta - 8.0 * delta ** 2 - delta ** 4
        d_den = (1.0 - 6.0 * delta + 6.0 * delta ** 2
                 - 2.0 * delta ** 3 + delta ** 4)
    else:
        c1 = 2.0 * math.sqrt(1.0 + delta)
        d_num = 2.0 * math.sqrt(1.0 + delta)
        d_den = 1.0 - math.sqrt(8.0) * delta
    return c1, d_num, d_den


def table1_constants(algorithm, delta):
    """All per-algorithm constants evaluated at the nominal-matrix delta.

    Parameters
    ----------
    algorithm : {"cosamp", "sp", "iht"}
    delta : float
        Isometry constant of the nominal matrix at level b*K, in [0, 1).

    Returns
    -------
    BoundConstants

    Raises
    ------
    OutOfRegimeError
        If delta drives the D denominator to zero or below.
    """
    _check_algorithm(algorithm)
    _check_delta(delta)
    a, b, c = _SMALL_CONSTANTS[algorithm]
    big_c = contraction_factor(algorithm, delta)
    c1, d_num, d_den = _noise_factors(algorithm, delta)
    if d_den <= 0:
        raise OutOfRegimeError(
            f"limit noise factor of {algorithm} is undefined at delta={delta}"
        )
    return BoundConstants(
        algorithm=algorithm, a=a, b=b, c=c,
        big_c=big_c, c1=c1, d=d_num / d_den,
    )


def table2_constants(algorithm, delta_tilde):
    """Contraction and limit noise factor at the perturbed-matrix delta.

    Same formulas as table1_constants, evaluated at the isometry constant of
    the perturbed matrix.
    """
    consts = table1_constants(algorithm, delta_tilde)
    return PerturbedBoundConstants(
        algorithm=algorithm, c_tilde=consts.big_c, d_tilde=consts.d,
    )


def _check_bound_inputs(kappa_psi, r_k, s_k, delta_k, eps_y, eps_a_k):
    if kappa_psi < 1:
        raise ValueError(f"kappa_psi is a condition number >= 1, got {kappa_psi}")
    if min(r_k, s_k, eps_y, eps_a_k) < 0:
        raise ValueError("ratios and perturbation levels must be nonnegative")
    _check_delta(delta_k)


def theorem2_bound(kappa_psi, a, c_tilde, l, r_k, s_k, d_tilde, delta_k,
                   eps_y, eps_a_k):
    """Relative-error bound for perturbed recovery of a general signal.

    For finite l the bound is

        kappa_psi * (a * c_tilde**l + r_k
                     + d_tilde * sqrt(1 + delta_k)
                       * (eps_y + eps_a_k + (1 + eps_y) * (r_k + s_k)))

    and with ``l=math.inf`` (or None) the limit form

        kappa_psi * (d_tilde * sqrt(1 + delta_k) + 1)
                  * (eps_y + eps_a_k + (1 + eps_y) * (r_k + s_k))

    which requires c_tilde < 1.

    Parameters
    ----------
    kappa_psi : float
        Condition number of the sparsity basis, at least 1.
    a, c_tilde, d_tilde : float
        Algorithm constants at the perturbed-matrix delta.
    l : int, float or None
        Iteration count; math.inf or None selects the limit form.
    r_k, s_k : float
        Tail ratios of the signal.
    delta_k : float
        Level-K isometry constant of the nominal matrix.
    eps_y, eps_a_k : float
        Relative noise and relative K-column perturbation levels.

    Returns
    -------
    float
    """
    _check_bound_inputs(kappa_psi, r_k, s_k, delta_k, eps_y, eps_a_k)
    drive = eps_y + eps_a_k + (1.0 + eps_y) * (r_k + s_k)
    root = math.sqrt(1.0 + delta_k)
    if l is None or l == math.inf:
        if c_tilde >= 1:
            raise OutOfRegimeError(
                f"limit bound requires contraction below 1, got {c_tilde}"
            )
        return kappa_psi * (d_tilde * root + 1.0) * drive
    if l < 0:
        raise ValueError(f"iteration count must be nonnegative, got {l}")
    return kappa_psi * (a * c_tilde ** l + r_k + d_tilde * root * drive)


def theorem3_bound(kappa_psi, a, c_tilde, l, d_tilde, delta_k, eps_y,
                   eps_a_k):
    """Relative-error bound for perturbed recovery of an exactly sparse signal.

    The general bound with both tail ratios zero.
    """
    return theorem2_bound(kappa_psi, a, c_tilde, l, 0.0, 0.0, d_tilde,
                          delta_k, eps_y, eps_a_k)


def iteration_estimate(c_tilde, a, eps_y, eps_a_k, s_k):
    """Iterations after which the finite-l bound meets its limit form.

    Evaluates ceil(log((eps_y + eps_a_k + s_k) / a) / log(c_tilde)), clamped
    to 0 when the perturbation sum already exceeds a (nothing to contract)
    and defined as 1 when c_tilde is exactly 0 (one step contracts fully).

    Raises
    ------
    OutOfRegimeError
        If c_tilde >= 1 (no contraction) or the perturbation sum is zero
        (the logarithm diverges).
    """
    if min(eps_y, eps_a_k, s_k) < 0:
        raise ValueError("perturbation levels must be nonnegative")
    if a <= 0:
        raise ValueError(f"constant a must be positive, got {a}")
    if not 0 <= c_tilde < 1:
        raise OutOfRegimeError(
            f"iteration estimate requires contraction in [0, 1), got {c_tilde}"
        )
    total = eps_y + eps_a_k + s_k
    if total == 0:
        raise OutOfRegimeError(
            "iteration estimate is undefined at zero perturbation and tail"
        )
    if total >= a:
        return 0
    if c_tilde == 0:
        return 1
    # tiny nudge so exact powers of c_tilde do not round up at the float edge
    return math.ceil(math.log(total / a) / math.log(c_tilde) - 1e-12)


def remark3_bound(kappa_psi, a, big_c, l, r_k, s_k, d, delta_k, eps_y,
                  eps_a_k):
    """Relative-error bound when the measurements come from the perturbed
    matrix but recovery runs with the nominal one.

    Evaluates

        kappa_psi * (a * big_c**l + r_k
                     + d * sqrt(1 + delta_k)
                       * (eps_y + eps_a_k
                          + (1 + eps_y + eps_a_k) * (r_k + s_k)))

    with the nominal-matrix constants, since in this scenario the recovery
    matrix itself is unperturbed.
    """
    _check_bound_inputs(kappa_psi, r_k, s_k, delta_k, eps_y, eps_a_k)
    if l < 0:
        raise ValueError(f"iteration count must be nonnegative, got {l}")
    drive = eps_y + eps_a_k + (1.0 + eps_y + eps_a_k) * (r_k + s_k)
    return kappa_psi * (
        a * big_c ** l + r_k + d * math.sqrt(1.0 + delta_k) * drive
    )


def pseudoinverse_norm_bound(delta_tilde_k):
    """Upper bound 1/sqrt(1 - delta) on the restricted pseudo-inverse norm.

    This is the oracle's noise gain: with the perturbed matrix's level-K
    isometry constant below 1, the pseudo-inverse of any K-column submatrix
    has spectral norm at most this value.
    """
    if not 0 <= delta_tilde_k < 1:
        raise OutOfRegimeError(
            f"pseudo-inverse bound requires delta in [0, 1), got {delta_tilde_k}"
        )
    return 1.0 / math.sqrt(1.0 - delta_tilde_k)


def contraction_breakdown(algorithm):
    """The delta at which the contraction factor reaches 1, by bisection."""
    _check_algorithm(algorithm)
    lo, hi = 0.0, 1.0 - 1e-12
    if contraction_factor(algorithm, hi) <= 1.0:
        raise OutOfRegimeError(f"{algorithm} never stops contracting on [0, 1)")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if contraction_factor(algorithm, mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def decay_ratio_bounds(model, p, k):
    """Closed-form tail-ratio values for the two compressible signal classes.

    For ``model="strong-decay"`` the values are true upper bounds on
    (r_k, s_k); for ``model="power-law"`` they are the standard
    approximations, accurate to leading order in k.

    Parameters
    ----------
    model : {"strong-decay", "power-law"}
    p : float
        Decay parameter, strictly greater than 1.
    k : int
        Approximation order, at least 1.

    Returns
    -------
    (float, float)
        The r_k and s_k values.
    """
    if p <= 1:
        raise ValueError(f"decay parameter must exceed 1, got p={p}")
    if k < 1:
        raise ValueError(f"approximation order must be positive, got k={k}")
    if model == "strong-decay":
        r = float(p) ** (-k)
        s = math.sqrt(p + 1.0) / math.sqrt(k * (p - 1.0)) * float(p) ** (-k)
    elif model == "power-law":
        r = float(k) ** (0.5 - p)
        s = math.sqrt(2.0 * p - 1.0) / (p - 1.0) * float(k) ** (0.5 - p)
    else:
        raise ValueError(
            f"model must be 'strong-decay' or 'power-law', got {model!r}"
        )
    return r, s
