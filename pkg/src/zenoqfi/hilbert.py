"""N-qubit states and the frequency generator in the computational basis.

Basis index ``m`` is the big-endian bit string of the atoms, bit 0 meaning
spin up (+1/2), so the generator ``H = 1/2 sum_j sigma^z_j`` is diagonal with
``H[m, m] = (N - 2 popcount(m)) / 2``.

Density matrices are plain complex ``numpy`` arrays; constructors hand them
out read-only.
"""

import numpy as np

from .errors import DimensionError, InvalidStateError

N_MAX = 10

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_ATOL = 1e-10


def _check_count(n, n_max=None):
    if int(n) != n or n < 1:
        raise DimensionError(f"qubit count must be a positive integer, got {n!r}")
    n_max = N_MAX if n_max is None else n_max
    if n > n_max:
        raise DimensionError(
            f"N={n} exceeds n_max={n_max} (dense matrices of dimension 2^N)"
        )
    return int(n)


def _frozen(a):
    a.flags.writeable = False
    return a


def qubit_count(rho):
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def check_density_matrix(rho, *, herm_atol=HERMITIAN_ATOL, trace_atol=TRACE_ATOL,
                         psd_atol=PSD_ATOL):
    """Raise :class:`InvalidStateError` unless ``rho`` is a valid density matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"expected a square matrix, got shape {rho.shape}")
    qubit_count(rho)
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_atol:
        raise InvalidStateError(f"not Hermitian (max deviation {herm:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_atol:
        raise InvalidStateError(f"trace is {tr.real:.15g}, expected 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -psd_atol:
        raise InvalidStateError(f"not positive semidefinite (min eigenvalue {lo:.3g})")
    return rho


def pure_density(psi):
    psi = np.asarray(psi, dtype=complex)
    return _frozen(np.outer(psi, psi.conj()))


def ghz_state(n, *, n_max=None):
    """(|0...0> + |1...1>)/sqrt(2) as a density matrix."""
    n = _check_count(n, n_max)
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=complex)
    ends = [0, dim - 1]
    rho[np.ix_(ends, ends)] = 0.5
    return _frozen(rho)


def css_state(n, *, n_max=None):
    """Coherent spin state |+><+|^{(x)N}; every entry equals 2^-N."""
    n = _check_count(n, n_max)
    dim = 1 << n
    return _frozen(np.full((dim, dim), 1.0 / dim, dtype=complex))


def basis_state(n, m, *, n_max=None):
    n = _check_count(n, n_max)
    dim = 1 << n
    if not 0 <= m < dim:
        raise DimensionError(f"basis index {m} out of range for N={n}")
    rho = np.zeros((dim, dim), dtype=complex)
    rho[m, m] = 1.0
    return _frozen(rho)


def maximally_mixed_state(n, *, n_max=None):
    n = _check_count(n, n_max)
    dim = 1 << n
    return _frozen(np.eye(dim, dtype=complex) / dim)


def random_pure_state(n, seed, *, n_max=None):
    """Haar-random pure state from a normalized complex Gaussian vector.

    The generator is ``numpy.random.default_rng(seed)`` (PCG64); the same
    seed always yields a bit-identical matrix.
    """
    n = _check_count(n, n_max)
    dim = 1 << n
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    psi /= np.linalg.norm(psi)
    return pure_density(psi)


def hamiltonian_diagonal(n):
    """Diagonal of ``H = 1/2 sum_j sigma^z_j`` in half-spin units."""
    if int(n) != n or n < 1:
        raise DimensionError(f"qubit count must be a positive integer, got {n!r}")
    m = np.arange(1 << int(n), dtype=np.uint64)
    return _frozen((n - 2.0 * np.bitwise_count(m)) / 2.0)


def hamming_distances(n):
    """Matrix of Hamming distances d(m, m') between basis indices."""
    m = np.arange(1 << int(n), dtype=np.uint64)
    return np.bitwise_count(m[:, None] ^ m[None, :]).astype(float)


def variance_of_h(rho, hdiag=None):
    """Tr(rho H^2) - Tr(rho H)^2 for the diagonal generator."""
    rho = np.asarray(rho)
    if hdiag is None:
        hdiag = hamiltonian_diagonal(qubit_count(rho))
    p = np.real(np.diagonal(rho))
    mean = p @ hdiag
    return float(p @ hdiag**2 - mean**2)


def purity(rho):
    rho = np.asarray(rho)
    return float(np.real(np.vdot(rho.conj().T, rho)))
