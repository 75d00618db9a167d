"""Sensing-system construction with controlled perturbations.

Builds Gaussian sensing matrices and packages one recovery instance: the
nominal system A = Phi @ Psi, an additive system perturbation E = Delta @ Psi
scaled to a requested relative spectral norm, measurement noise scaled to a
requested relative l2 norm, and the noisy measurements.

Two scenarios fix who is wrong about the matrix.  Under "model-mismatch" the
measurements come from the nominal system (y = A s) but recovery runs with
the perturbed matrix A + E.  Under "physical-implementation" the hardware
applies the perturbed system (y = (A + E) s) while recovery runs with the
nominal A it believes in.
"""

from dataclasses import dataclass

import numpy as np

from .matrix_analysis import spectral_norm
from .signals import best_k_split

SCENARIOS = ("model-mismatch", "physical-implementation")


@dataclass(frozen=True)
class PerturbedSystem:
    """One sensing instance: matrices, measurements, and noise levels.

    ``eps_y`` is the realized ||e_vec||/||y|| and ``eps_a`` the realized
    ||e_mat||_2/||a||_2; both are hit exactly by construction.
    """

    a: np.ndarray
    e_mat: np.ndarray
    a_tilde: np.ndarray
    y: np.ndarray
    e_vec: np.ndarray
    y_tilde: np.ndarray
    eps_y: float
    eps_a: float
    scenario: str

    @property
    def recovery_matrix(self):
        """The matrix the recovery algorithm is given."""
        if self.scenario == "model-mismatch":
            return self.a_tilde
        return self.a


def gen_gaussian_sensing(m, n, rng):
    """Draw an m-by-n sensing matrix with i.i.d. N(0, 1/m) entries.

    The variance 1/m makes each column have unit expected l2 norm.
    """
    if m < 1 or n < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m}x{n}")
    return rng.standard_normal((m, n)) / np.sqrt(m)


def make_system(phi, psi, s, eps_y, eps_phi, scenario, rng):
    """Assemble a perturbed sensing instance around the signal s.

    A fresh Gaussian matrix Delta is rescaled so that its spectral norm is
    exactly eps_phi times that of phi, and a fresh Gaussian vector is
    rescaled so that its l2 norm is exactly eps_y times that of the clean
    measurements.  Both draws happen even at zero perturbation levels, so an
    rng seed consumes the same stream regardless of the epsilon values.

    Parameters
    ----------
    phi : ndarray of shape (m, n)
        Sensing matrix.
    psi : ndarray of shape (n, n) or None
        Sparsity basis; None means the identity.
    s : ndarray of shape (n,)
        Coefficient vector being sensed.
    eps_y : float
        Relative measurement-noise level in [0, 1).
    eps_phi : float
        Relative system-perturbation level in [0, 1).
    scenario : {"model-mismatch", "physical-implementation"}
    rng : numpy.random.Generator

    Returns
    -------
    PerturbedSystem
    """
    if not 0 <= eps_y < 1:
        raise ValueError(f"eps_y must lie in [0, 1), got {eps_y}")
    if not 0 <= eps_phi < 1:
        raise ValueError(f"eps_phi must lie in [0, 1), got {eps_phi}")
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}, expected one of {SCENARIOS}")
    phi = np.asarray(phi, dtype=float)
    s = np.asarray(s, dtype=float)

    delta = rng.standard_normal(phi.shape)
    if eps_phi > 0:
        delta *= eps_phi * spectral_norm(phi) / spectral_norm(delta)
    else:
        delta = np.zeros_like(phi)

    if psi is None:
        a = phi
        e_mat = delta
        eps_a = eps_phi
    else:
        psi = np.asarray(psi, dtype=float)
        a = phi @ psi
        e_mat = delta @ psi
        eps_a = spectral_norm(e_mat) / spectral_norm(a) if eps_phi > 0 else 0.0
    a_tilde = a + e_mat

    if scenario == "model-mismatch":
        y = a @ s
    else:
        y = a_tilde @ s

    noise = rng.standard_normal(y.shape)
    ynorm = np.linalg.norm(y)
    if eps_y > 0:
        if ynorm == 0.0:
            raise ValueError("relative noise is undefined for zero measurements")
        noise *= eps_y * ynorm / np.linalg.norm(noise)
    else:
        noise = np.zeros_like(y)

    return PerturbedSystem(
        a=a, e_mat=e_mat, a_tilde=a_tilde,
        y=y, e_vec=noise, y_tilde=y + noise,
        eps_y=eps_y, eps_a=eps_a, scenario=scenario,
    )


def equivalent_noise(system, s, k):
    """Lumped noise term that makes the K-sparse model exact.

    Returns the vector r satisfying y_tilde = M @ head + r, where head is the
    best K-term approximation of the sensed signal s and M is the matrix
    recovery runs with.  Everything the solver cannot model (measurement
    noise, the matrix error acting on the head, and the signal tail) lands
    in r.
    """
    split = best_k_split(s, k)
    if system.scenario == "model-mismatch":
        return system.e_vec - system.e_mat @ split.head + system.a @ split.tail
    return (system.e_vec + system.e_mat @ split.head
            + system.a_tilde @ split.tail)
