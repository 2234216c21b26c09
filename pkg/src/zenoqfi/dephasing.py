"""Gaussian dephasing: the decoherence function gamma(t) and the channels.

A Gaussian random phase with variance ``2 gamma(t)`` multiplies each
coherence by ``exp(-gamma(t) * delta^2)``, where ``delta`` is the phase
difference per unit phase between the two basis states involved.

* local: one independent phase per atom, ``delta^2`` summed over atoms gives
  the Hamming distance ``d(m, m')``;
* collective: one shared phase, ``delta = h_m - h_m'``.

On the GHZ corners these give ``exp(-gamma(t) N^k)`` with ``k = 1, 2``.
Both channels are entrywise (Hadamard) multipliers in the eigenbasis of H,
so they commute with each other and with the free rotation.

The Markovian law satisfies the semigroup property
``Lambda_{t1+t2} = Lambda_{t1} Lambda_{t2}``.
"""

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ModelRangeError
from .hilbert import _frozen, hamiltonian_diagonal, hamming_distances, qubit_count


@dataclass(frozen=True)
class Markovian:
    """gamma(t) = rate * t."""

    rate: float

    kind = "markovian"

    def __post_init__(self):
        if not self.rate > 0:
            raise ModelRangeError(f"Markovian rate must be > 0, got {self.rate}")


@dataclass(frozen=True)
class Zeno:
    """Short-time law gamma(t) = (gamma^2 / 2) t^2 of any Gaussian bath."""

    gamma: float

    kind = "zeno"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ModelRangeError(f"Zeno gamma must be > 0, got {self.gamma}")


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear gamma(t) through ``(t, gamma_t)`` samples; no extrapolation."""

    times: tuple
    values: tuple

    kind = "tabulated"

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        g = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != g.shape or t.size < 2:
            raise ModelRangeError("tabulated gamma(t) needs at least two (t, gamma) rows")
        if t[0] != 0 or g[0] != 0:
            raise ModelRangeError("tabulated gamma(t) must start at (0, 0)")
        if np.any(np.diff(t) <= 0):
            raise ModelRangeError("tabulated times must be strictly increasing")
        if np.any(g < 0):
            raise ModelRangeError("tabulated gamma values must be >= 0")

    @property
    def t_max(self):
        return self.times[-1]


def load_tabulated(path):
    """Read a two-column ``t,gamma`` CSV into a :class:`Tabulated` model."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["t", "gamma"]:
            raise ModelRangeError(f"{path}: expected header 't,gamma', got {','.join(header)!r}")
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    try:
        times = tuple(float(r[0]) for r in rows)
        values = tuple(float(r[1]) for r in rows)
    except (ValueError, IndexError) as exc:
        raise ModelRangeError(f"{path}: malformed row ({exc})") from None
    return Tabulated(times, values)


class NoiseGeometry(enum.Enum):
    LOCAL = "local"
    COLLECTIVE = "collective"

    @property
    def k(self):
        """Exponent of N in the GHZ decay rate."""
        return 1 if self is NoiseGeometry.LOCAL else 2

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ModelRangeError(f"unknown noise geometry {value!r}") from None


def gamma_at(model, t):
    """Dimensionless decoherence gamma(t) for ``model`` at time ``t``."""
    if t < 0:
        raise ModelRangeError(f"time must be >= 0, got {t}")
    if isinstance(model, Markovian):
        return model.rate * t
    if isinstance(model, Zeno):
        return 0.5 * model.gamma**2 * t * t
    if isinstance(model, Tabulated):
        if t > model.t_max:
            raise ModelRangeError(
                f"t={t} outside tabulated range [0, {model.t_max}]"
            )
        return float(np.interp(t, model.times, model.values))
    raise TypeError(f"not a decoherence model: {model!r}")


def _check_gamma(gamma_t):
    if gamma_t < 0 or math.isnan(gamma_t):
        raise ModelRangeError(f"gamma(t) must be >= 0, got {gamma_t}")


def apply_local_dephasing(rho, gamma_t):
    """Multiply coherence (m, m') by ``exp(-gamma_t * hamming(m, m'))``."""
    _check_gamma(gamma_t)
    rho = np.asarray(rho)
    if gamma_t == 0:
        return rho
    n = qubit_count(rho)
    return _frozen(rho * np.exp(-gamma_t * hamming_distances(n)))


def apply_collective_dephasing(rho, gamma_t, hdiag=None):
    """Multiply coherence (m, m') by ``exp(-gamma_t * (h_m - h_m')^2)``."""
    _check_gamma(gamma_t)
    rho = np.asarray(rho)
    if hdiag is None:
        hdiag = hamiltonian_diagonal(qubit_count(rho))
    hdiag = np.asarray(hdiag)
    if hdiag.shape != (rho.shape[0],):
        raise DimensionError(
            f"Hamiltonian diagonal of length {hdiag.size} does not match dimension {rho.shape[0]}"
        )
    if gamma_t == 0:
        return rho
    diff = hdiag[:, None] - hdiag[None, :]
    return _frozen(rho * np.exp(-gamma_t * diff**2))


def dephase(rho, gamma_t, geometry):
    if NoiseGeometry.parse(geometry) is NoiseGeometry.LOCAL:
        return apply_local_dephasing(rho, gamma_t)
    return apply_collective_dephasing(rho, gamma_t)


def rotate(rho, phase, hdiag=None):
    """Free evolution ``e^{-i phase H} rho e^{i phase H}`` with ``phase = omega t``."""
    rho = np.asarray(rho)
    if hdiag is None:
        hdiag = hamiltonian_diagonal(qubit_count(rho))
    u = np.exp(-1j * phase * np.asarray(hdiag))
    return _frozen(rho * np.outer(u, u.conj()))


def evolve(rho, omega, t, model, geometry):
    """rho_{omega,t}: dephase with gamma(t), then rotate by omega t."""
    return rotate(dephase(rho, gamma_at(model, t), geometry), omega * t)
