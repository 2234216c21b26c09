"""Closed-form upper bounds on the QFI, per experiment and per total time.

Single-experiment bounds are in units of time^2, total-time bounds in units
of time (Fisher information accumulated over a budget ``T``).  The Zeno
totals assume ``gamma(t) ~ gamma^2 t^2 / 2``, which only holds for short
interrogation times; their reports carry that caveat.
"""

import math
from dataclasses import dataclass, field

from .errors import ModelRangeError

ZENO_CAVEAT = (
    "valid only where gamma(t) ~ gamma^2 t^2 / 2 holds, i.e. t_opt inside "
    "the short-time (Zeno) regime of the bath; asymptotically true as N grows"
)


@dataclass(frozen=True)
class BoundReport:
    bound_name: str
    value: float
    arguments: dict
    t_opt: float | None = None
    caveat: str | None = None
    extra: dict = field(default_factory=dict)


def _nonneg(**kw):
    for name, v in kw.items():
        if not v >= 0:
            raise ModelRangeError(f"{name} must be >= 0, got {v}")


def _pos(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise ModelRangeError(f"{name} must be > 0, got {v}")


def bound_single_local(n, t, gamma_t, i_rho):
    """``t^2 N / (2 gamma(t) + N / I_rho)`` for independent dephasing.

    ``i_rho == 0`` (a state commuting with H) gives exactly 0.
    """
    _nonneg(t=t, gamma_t=gamma_t, i_rho=i_rho)
    if i_rho == 0:
        return 0.0
    return t * t * n / (2.0 * gamma_t + n / i_rho)


def bound_single_collective(t, gamma_t, i_rho):
    """``t^2 / (2 gamma(t) + 1 / I_rho)`` for collective dephasing."""
    _nonneg(t=t, gamma_t=gamma_t, i_rho=i_rho)
    if i_rho == 0:
        return 0.0
    return t * t / (2.0 * gamma_t + 1.0 / i_rho)


def bound_escher(n, t, gamma_t):
    """``N t^2 / (e^{2 gamma(t)} - 1 + 1/N)``, tighter than the local bound at I = N^2."""
    _nonneg(t=t, gamma_t=gamma_t)
    return n * t * t / (math.expm1(2.0 * gamma_t) + 1.0 / n)


def bound_total_markovian_local(n, total_time, rate):
    _pos(total_time=total_time, rate=rate)
    return n * total_time / (2.0 * rate)


def bound_total_markovian_collective(total_time, rate):
    _pos(total_time=total_time, rate=rate)
    return total_time / (2.0 * rate)


def bound_total_zeno_local(n, total_time, gamma):
    """Maximum over t of ``N T t / (gamma^2 t^2 + 1/N)``; returns ``(bound, t_opt)``."""
    _pos(n=n, total_time=total_time, gamma=gamma)
    return n**1.5 * total_time / (2.0 * gamma), 1.0 / (gamma * math.sqrt(n))


def bound_total_zeno_collective(n, total_time, gamma):
    """Maximum over t of ``T t / (gamma^2 t^2 + 1/N^2)``; returns ``(bound, t_opt)``."""
    _pos(n=n, total_time=total_time, gamma=gamma)
    return n * total_time / (2.0 * gamma), 1.0 / (gamma * n)


def bound_total_zeno_css_collective(n, total_time, gamma):
    """Maximum over t of ``T t / (gamma^2 t^2 + 1/N)`` (CSS, collective noise).

    The maximizer is ``t = 1 / (gamma sqrt(N))``.  This is a ceiling only;
    nothing here claims a CSS protocol reaches it.
    """
    _pos(n=n, total_time=total_time, gamma=gamma)
    return math.sqrt(n) * total_time / (2.0 * gamma), 1.0 / (gamma * math.sqrt(n))


# Pre-optimization objectives whose maxima over t are the Zeno totals above.

def zeno_local_objective(t, n, total_time, gamma):
    return n * total_time * t / (gamma**2 * t * t + 1.0 / n)


def zeno_collective_objective(t, n, total_time, gamma):
    return total_time * t / (gamma**2 * t * t + 1.0 / n**2)


def zeno_css_collective_objective(t, n, total_time, gamma):
    return total_time * t / (gamma**2 * t * t + 1.0 / n)


def single_experiment_reports(n, t, gamma_t, i_rho):
    args = {"N": n, "t": t, "gamma_t": gamma_t, "i_rho": i_rho}
    return [
        BoundReport("single_local", bound_single_local(n, t, gamma_t, i_rho), args),
        BoundReport("single_collective", bound_single_collective(t, gamma_t, i_rho), args),
        BoundReport("escher", bound_escher(n, t, gamma_t), {"N": n, "t": t, "gamma_t": gamma_t}),
    ]


def total_time_reports(n, total_time, gamma):
    args = {"N": n, "T": total_time, "gamma": gamma}
    out = [
        BoundReport("total_markovian_local", bound_total_markovian_local(n, total_time, gamma), args),
        BoundReport("total_markovian_collective",
                    bound_total_markovian_collective(total_time, gamma), args),
    ]
    for name, fn in (("total_zeno_local", bound_total_zeno_local),
                     ("total_zeno_collective", bound_total_zeno_collective),
                     ("total_zeno_css_collective", bound_total_zeno_css_collective)):
        value, t_opt = fn(n, total_time, gamma)
        out.append(BoundReport(name, value, args, t_opt=t_opt, caveat=ZENO_CAVEAT))
    return out
