"""Total-time accounting: splitting a budget T into experiments of length t_j.

The figure of merit is ``F_T = sum_j F(rho_j, t_j)``.  With identical
experiments of length ``t`` there are ``n = T / t`` of them, so the objective
over ``t`` is ``(T / t) F(rho, t)``; ``n`` is continuous while optimizing.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    bound_total_markovian_collective,
    bound_total_markovian_local,
    bound_total_zeno_collective,
    bound_total_zeno_local,
)
from .dephasing import Markovian, NoiseGeometry, Tabulated, Zeno
from .errors import ConvergenceError, ModelRangeError, UnsupportedCaseError
from .hilbert import qubit_count
from .optimize import maximize_log_scale, project_to_simplex
from .qfi import analytic_qfi_css_local, analytic_qfi_ghz, qfi_at

STATE_CLASSES = ("ghz", "css")
MODEL_KINDS = ("markovian", "zeno")


@dataclass(frozen=True)
class ProtocolBudget:
    total_time: float
    times: tuple

    def __post_init__(self):
        if not self.total_time > 0:
            raise ModelRangeError(f"total time must be > 0, got {self.total_time}")
        if not self.times or any(not t > 0 for t in self.times):
            raise ModelRangeError("interrogation times must all be > 0")
        if abs(sum(self.times) - self.total_time) > 1e-10 * self.total_time:
            raise ModelRangeError(
                f"interrogation times sum to {sum(self.times)}, not T={self.total_time}"
            )

    @classmethod
    def uniform(cls, total_time, n):
        return cls(total_time, (total_time / n,) * n)


@dataclass(frozen=True)
class OptimumReport:
    t_star: float
    n_star: float
    f_max: float
    method: str
    n_int: int
    f_at_n_int: float


def make_model(model_kind, gamma):
    if model_kind == "markovian":
        return Markovian(gamma)
    if model_kind == "zeno":
        return Zeno(gamma)
    raise UnsupportedCaseError(f"unknown model kind {model_kind!r}")


def model_scale(model):
    """Characteristic inverse time of a model, used to place default brackets."""
    if isinstance(model, Markovian):
        return model.rate
    if isinstance(model, Zeno):
        return model.gamma
    if isinstance(model, Tabulated):
        return 1.0 / model.t_max
    raise TypeError(f"not a decoherence model: {model!r}")


def total_qfi(states, budget, model, geometry):
    if len(states) != len(budget.times):
        raise ModelRangeError(
            f"{len(states)} states but {len(budget.times)} interrogation times"
        )
    return float(sum(qfi_at(rho, t, model, geometry) for rho, t in zip(states, budget.times)))


def analytic_qfi(state_class, n, t, model, geometry):
    """Per-experiment QFI of GHZ (either geometry) or CSS (local) from closed forms."""
    geometry = NoiseGeometry.parse(geometry)
    if state_class == "ghz":
        return analytic_qfi_ghz(n, t, model, geometry)
    if state_class == "css":
        if geometry is not NoiseGeometry.LOCAL:
            raise UnsupportedCaseError(
                "no closed-form QFI for CSS under collective dephasing (only an upper bound)"
            )
        return analytic_qfi_css_local(n, t, model)
    raise UnsupportedCaseError(f"unknown state class {state_class!r}")


def _integer_point(total_time, t_star, qfi_of_t):
    n_int = max(1, round(total_time / t_star))
    return n_int, n_int * qfi_of_t(total_time / n_int)


def optimize_time_closed_form(state_class, n, total_time, model_kind, gamma, geometry):
    """Optimal uniform interrogation time from the known closed forms."""
    geometry = NoiseGeometry.parse(geometry)
    local = geometry is NoiseGeometry.LOCAL
    T, g = total_time, gamma
    root2e = math.sqrt(2.0 * math.e)
    key = (state_class, model_kind, local)
    if key == ("ghz", "markovian", True):
        t_star, f = 1.0 / (2 * g * n), n * T / (2 * g * math.e)
    elif key == ("ghz", "markovian", False):
        t_star, f = 1.0 / (2 * g * n * n), T / (2 * g * math.e)
    elif key == ("css", "markovian", True):
        t_star, f = 1.0 / (2 * g), n * T / (2 * g * math.e)
    elif key == ("ghz", "zeno", True):
        t_star, f = 1.0 / (g * math.sqrt(2 * n)), n**1.5 * T / (g * root2e)
    elif key == ("ghz", "zeno", False):
        t_star, f = 1.0 / (math.sqrt(2) * g * n), n * T / (g * root2e)
    elif key == ("css", "zeno", True):
        t_star, f = 1.0 / (math.sqrt(2) * g), n * T / (g * root2e)
    elif state_class == "css" and not local:
        raise UnsupportedCaseError(
            "CSS under collective dephasing has no closed-form optimum; only the "
            "N^(1/2) T/(2 gamma) upper bound is known"
        )
    else:
        raise UnsupportedCaseError(
            f"unsupported combination state={state_class!r} model={model_kind!r}"
        )
    model = make_model(model_kind, gamma)
    n_int, f_int = _integer_point(
        T, t_star, lambda t: analytic_qfi(state_class, n, t, model, geometry)
    )
    return OptimumReport(t_star, T / t_star, f, "closed_form", n_int, float(f_int))


def _optimize(qfi_of_t, total_time, bracket):
    def objective(t):
        return total_time / t * qfi_of_t(t)

    t_star, f_max = maximize_log_scale(objective, *bracket)
    n_int, f_int = _integer_point(total_time, t_star, qfi_of_t)
    return OptimumReport(t_star, total_time / t_star, float(f_max), "numeric",
                         n_int, float(f_int))


def default_bracket(model, n=1, *, wide=False):
    """``[1e-4, 1e2] / scale``; ``wide`` stretches the lower end by N^2 for large N."""
    s = model_scale(model)
    lo = 1e-4 / s / (n * n if wide else 1)
    hi = 1e2 / s
    if isinstance(model, Tabulated):
        hi = model.t_max
    return lo, hi


def optimize_time_numeric(state, total_time, model, geometry, t_bracket=None):
    """Maximize ``(T/t) qfi_at(state, t)`` over ``t`` with the exact SLD solver."""
    bracket = t_bracket or default_bracket(model, qubit_count(state))
    return _optimize(lambda t: qfi_at(state, t, model, geometry), total_time, bracket)


def optimize_time_analytic(state_class, n, total_time, model, geometry, t_bracket=None):
    """Same objective as :func:`optimize_time_numeric` but with closed-form QFI (any N)."""
    analytic_qfi(state_class, n, 0.0, model, geometry)  # rejects unsupported cases
    bracket = t_bracket or default_bracket(model, n, wide=True)
    return _optimize(lambda t: analytic_qfi(state_class, n, t, model, geometry),
                     total_time, bracket)


def total_time_bound(n, total_time, model_kind, gamma, geometry):
    """Matching total-time ceiling for a general state."""
    local = NoiseGeometry.parse(geometry) is NoiseGeometry.LOCAL
    if model_kind == "markovian":
        return (bound_total_markovian_local(n, total_time, gamma) if local
                else bound_total_markovian_collective(total_time, gamma))
    if model_kind == "zeno":
        fn = bound_total_zeno_local if local else bound_total_zeno_collective
        return fn(n, total_time, gamma)[0]
    raise UnsupportedCaseError(f"unknown model kind {model_kind!r}")


# --- uniform division of time -------------------------------------------------

@dataclass(frozen=True)
class UniformAllocationReport:
    n: int
    total_time: float
    c: float
    gamma: float
    best_allocation: tuple
    best_value: float
    uniform_value: float
    gap: float
    relative_gap: float
    max_deviation: float
    uniform_is_best: bool
    restarts: int


def allocation_objective(times, c, gamma):
    t = np.asarray(times, dtype=float)
    return float(np.sum(t * t / (gamma**2 * t * t + c)))


def allocation_gradient(times, c, gamma):
    t = np.asarray(times, dtype=float)
    return 2.0 * t * c / (gamma**2 * t * t + c) ** 2


def _projected_ascent(x, total_time, c, gamma, *, max_iter=20000, tol=1e-14):
    fx = allocation_objective(x, c, gamma)
    step = total_time / max(np.max(allocation_gradient(x, c, gamma)), 1e-300)
    history = [fx]
    for _ in range(max_iter):
        grad = allocation_gradient(x, c, gamma)
        while True:
            x_new = project_to_simplex(x + step * grad, total_time)
            f_new = allocation_objective(x_new, c, gamma)
            if f_new >= fx + 1e-4 * grad @ (x_new - x) or step < 1e-300:
                break
            step *= 0.5
        moved = np.max(np.abs(x_new - x))
        x, gain, fx = x_new, f_new - fx, f_new
        history.append(fx)
        if moved <= tol * total_time or (0 <= gain <= 1e-16 * abs(fx) and moved <= 1e-9 * total_time):
            return x, fx, len(history)
        step *= 2.0
    raise ConvergenceError("projected-gradient ascent did not converge", len(history))


def verify_uniform_allocation(n, total_time, c, gamma, trials=20, seed=0, *, rtol=1e-6):
    """Search the simplex ``sum t_j = T`` for allocations beating the uniform one.

    Objective: ``sum_j t_j^2 / (gamma^2 t_j^2 + c)``.  Projected-gradient
    ascent is run from ``trials`` random interior points (Dirichlet(1)).
    ``uniform_is_best`` is False whenever any allocation beats uniform by
    more than ``rtol`` relative; for ``gamma^2 (T/n)^2`` well below ``c`` the
    summand is convex and lumping time into fewer experiments wins.
    """
    if n < 2:
        raise ModelRangeError(f"need n >= 2 experiments, got {n}")
    if not c > 0:
        raise ModelRangeError(f"c must be > 0, got {c}")
    rng = np.random.default_rng(seed)
    uniform = np.full(n, total_time / n)
    f_uniform = allocation_objective(uniform, c, gamma)
    best_x, best_f = None, -math.inf
    for _ in range(trials):
        x0 = rng.dirichlet(np.ones(n)) * total_time
        x, fx, _ = _projected_ascent(x0, total_time, c, gamma)
        if fx > best_f:
            best_x, best_f = x, fx
    gap = best_f - f_uniform
    rel = gap / f_uniform
    return UniformAllocationReport(
        n=n, total_time=total_time, c=c, gamma=gamma,
        best_allocation=tuple(float(v) for v in best_x),
        best_value=float(best_f), uniform_value=float(f_uniform),
        gap=float(gap), relative_gap=float(rel),
        max_deviation=float(np.max(np.abs(best_x - uniform))),
        uniform_is_best=bool(rel <= rtol), restarts=trials,
    )
