"""Symmetric logarithmic derivative and quantum/classical Fisher information.

For a state ``sigma`` and the generator ``H`` the SLD solves

    sigma L + L sigma = -2i [H, sigma]

and the QFI per unit ``t^2`` is ``Tr(sigma L^2)``.  In the eigenbasis of
``sigma`` the equation is diagonal: ``L_ij = B_ij / (lambda_i + lambda_j)``.
"""

from dataclasses import dataclass

import numpy as np

from .dephasing import NoiseGeometry, dephase, evolve, gamma_at
from .errors import DegenerateObjectiveError, InvalidStateError
from .hilbert import hamiltonian_diagonal, qubit_count

KERNEL_RTOL = 1e-12
FD_PHASE_STEP = 1e-5
P_FLOOR = 1e-12


@dataclass(frozen=True)
class SldSolution:
    L: np.ndarray
    qfi: float
    support_dim: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _hermitian_eigh(sigma):
    if np.max(np.abs(sigma - sigma.conj().T), initial=0.0) > 1e-10:
        raise InvalidStateError("SLD solver needs a Hermitian matrix")
    try:
        return np.linalg.eigh(sigma)
    except np.linalg.LinAlgError as exc:
        raise InvalidStateError(f"eigendecomposition failed: {exc}") from None


def commutator_rhs(sigma, hdiag):
    """``-2i [H, sigma]`` for diagonal ``H``."""
    return -2j * (hdiag[:, None] - hdiag[None, :]) * sigma


def solve_sld(sigma, hdiag=None):
    """Minimal-norm SLD of ``sigma`` for the diagonal generator ``hdiag``.

    Pairs of eigenvalues whose sum is at most ``1e-12 * lambda_max`` are
    treated as kernel and their block of ``L`` is set to zero.
    """
    sigma = np.asarray(sigma, dtype=complex)
    if hdiag is None:
        hdiag = hamiltonian_diagonal(qubit_count(sigma))
    hdiag = np.asarray(hdiag, dtype=float)
    lam, vec = _hermitian_eigh(sigma)
    # B must be built in the computational basis: for nearly degenerate
    # spectra the eigenvalue differences lose all relative precision.
    b = vec.conj().T @ commutator_rhs(sigma, hdiag) @ vec
    denom = lam[:, None] + lam[None, :]
    eps = KERNEL_RTOL * max(lam[-1], 0.0)
    keep = denom > eps
    l_eig = np.zeros_like(b)
    l_eig[keep] = b[keep] / denom[keep]
    qfi = float(np.sum(np.clip(lam, 0.0, None)[:, None] * np.abs(l_eig) ** 2))
    l_mat = vec @ l_eig @ vec.conj().T
    l_mat = 0.5 * (l_mat + l_mat.conj().T)
    support = int(np.count_nonzero(lam > eps))
    return SldSolution(l_mat, qfi, support, lam, vec)


def lyapunov_residual(sigma, solution, hdiag=None):
    """Max-norm residual of the SLD equation restricted to the support of sigma."""
    sigma = np.asarray(sigma, dtype=complex)
    if hdiag is None:
        hdiag = hamiltonian_diagonal(qubit_count(sigma))
    lam, vec = solution.eigenvalues, solution.eigenvectors
    eps = KERNEL_RTOL * max(lam[-1], 0.0)
    p = vec[:, lam > eps]
    proj = p @ p.conj().T
    res = sigma @ solution.L + solution.L @ sigma - commutator_rhs(sigma, np.asarray(hdiag))
    return float(np.max(np.abs(proj @ res @ proj)))


def qfi_at(rho, t, model, geometry):
    """Quantum Fisher information ``t^2 Tr(Lambda_t(rho) L^2)`` (units time^2).

    The rotation by omega is omitted: the QFI does not depend on omega.
    """
    if t == 0:
        return 0.0
    sigma = dephase(rho, gamma_at(model, t), geometry)
    return t * t * solve_sld(sigma).qfi


def sld_initial_factor(rho, hdiag=None):
    """``I_rho = Tr(rho L_rho^2)`` of the undephased state."""
    return solve_sld(rho, hdiag).qfi


def analytic_qfi_ghz(n, t, model, geometry):
    g = gamma_at(model, t)
    k = NoiseGeometry.parse(geometry).k
    return n * n * t * t * np.exp(-2.0 * g * n**k)


def analytic_qfi_css_local(n, t, model):
    return n * t * t * np.exp(-2.0 * gamma_at(model, t))


@dataclass(frozen=True)
class PovmMeasurement:
    elements: tuple

    def __post_init__(self):
        els = [np.asarray(e, dtype=complex) for e in self.elements]
        if not els:
            raise InvalidStateError("POVM needs at least one element")
        dim = els[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for e in els:
            if e.shape != (dim, dim):
                raise InvalidStateError("POVM elements must share one square shape")
            if np.max(np.abs(e - e.conj().T)) > 1e-10 or np.linalg.eigvalsh(e)[0] < -1e-10:
                raise InvalidStateError("POVM element is not positive semidefinite")
            total += e
        if np.max(np.abs(total - np.eye(dim))) > 1e-10:
            raise InvalidStateError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", tuple(els))

    def probabilities(self, rho):
        rho = np.asarray(rho)
        # Tr(rho P) = sum_ij rho_ij P_ji
        return np.array([np.real(np.sum(rho * e.T)) for e in self.elements])

    def conjugated(self, u):
        """The POVM ``{U P U^dagger}``."""
        u = np.asarray(u)
        return PovmMeasurement(tuple(u @ e @ u.conj().T for e in self.elements))


def parity_povm(n):
    """Projectors onto the +1 / -1 eigenspaces of sigma^x on every atom."""
    dim = 1 << n
    flip = np.zeros((dim, dim))
    flip[np.arange(dim), dim - 1 - np.arange(dim)] = 1.0
    eye = np.eye(dim)
    return PovmMeasurement((0.5 * (eye + flip), 0.5 * (eye - flip)))


def computational_povm(n):
    dim = 1 << n
    out = []
    for m in range(dim):
        e = np.zeros((dim, dim))
        e[m, m] = 1.0
        out.append(e)
    return PovmMeasurement(tuple(out))


def classical_fisher(povm, rho, omega, t, model, geometry, *, p_floor=P_FLOOR):
    """Fisher information of ``povm`` outcomes about omega at ``(omega, t)``.

    The omega derivative is a central difference with step ``1e-5 / t``;
    outcomes with probability below ``p_floor`` contribute nothing.
    """
    if not t > 0:
        raise ValueError(f"interrogation time must be > 0, got {t}")
    h = FD_PHASE_STEP / t
    p = povm.probabilities(evolve(rho, omega, t, model, geometry))
    if np.all(p < p_floor):
        raise DegenerateObjectiveError("every POVM outcome has probability below the floor")
    p_hi = povm.probabilities(evolve(rho, omega + h, t, model, geometry))
    p_lo = povm.probabilities(evolve(rho, omega - h, t, model, geometry))
    dp = (p_hi - p_lo) / (2 * h)
    keep = p >= p_floor
    return float(np.sum(dp[keep] ** 2 / p[keep]))
