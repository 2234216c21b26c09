"""Small derivative-free scalar maximizer and a simplex projection."""

import math

import numpy as np

from .errors import BracketError, DegenerateObjectiveError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo, hi, *, xtol=1e-10, max_iter=200):
    """Maximize a unimodal ``f`` on ``[lo, hi]`` by golden-section search.

    Returns ``(x, f(x))``.  The search stops once the bracket is narrower
    than ``xtol`` (absolute, in the variable passed).
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _newton_polish(g, u, lo, hi, *, step=1e-5, iters=4):
    # Value comparisons cannot place a smooth maximum closer than ~sqrt(eps);
    # a few Newton steps on central differences of g recover the last digits.
    gu = g(u)
    for _ in range(iters):
        gp, gm = g(u + step), g(u - step)
        curv = (gp - 2.0 * gu + gm) / step**2
        if not curv < 0:
            break
        du = -((gp - gm) / (2.0 * step)) / curv
        if abs(du) > 10 * step:
            break
        u_new = min(max(u + du, lo), hi)
        g_new = g(u_new)
        if g_new < gu - 1e-13 * abs(gu):
            break
        u, gu = u_new, g_new
        if abs(du) < 1e-13:
            break
    return u, gu


def maximize_log_scale(f, lo, hi, *, grid=41, rtol=1e-10, polish=True):
    """Maximize ``f(t)`` over ``t in [lo, hi]`` searching in ``log t``.

    A coarse log grid picks the neighbourhood of the best sample, then
    golden-section refines it to relative tolerance ``rtol`` in ``t``.

    Raises :class:`DegenerateObjectiveError` if ``f`` vanishes on the whole
    grid and :class:`BracketError` if the best sample is at either end.
    """
    if not 0 < lo < hi:
        raise BracketError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    u_lo, u_hi = math.log(lo), math.log(hi)

    def g(u):
        return f(math.exp(u))

    us = np.linspace(u_lo, u_hi, grid)
    vals = np.array([g(u) for u in us])
    if not np.any(vals > 0):
        raise DegenerateObjectiveError("objective is zero on the whole bracket")
    i = int(np.argmax(vals))
    if i == 0 or i == grid - 1:
        raise BracketError(
            f"objective is monotone on [{lo:.6g}, {hi:.6g}]: best sample at the "
            f"{'lower' if i == 0 else 'upper'} end"
        )
    a, b = us[i - 1], us[i + 1]
    u, gu = golden_section_max(g, a, b, xtol=rtol)
    if polish:
        u, gu = _newton_polish(g, u, a, b)
    return math.exp(u), gu


def project_to_simplex(v, total):
    """Euclidean projection of ``v`` onto ``{x >= 0, sum(x) = total}``."""
    v = np.asarray(v, dtype=float)
    s = np.sort(v)[::-1]
    css = np.cumsum(s) - total
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(s - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)
