"""Large-N sweeps, power-law exponent fits and the resolution-scaling lines.

Sweeps use the closed-form GHZ/CSS QFI, so N is unrestricted here; dense
matrices never appear.  Resolution means ``1 / F_T``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    bound_total_markovian_collective,
    bound_total_markovian_local,
    bound_total_zeno_collective,
    bound_total_zeno_css_collective,
    bound_total_zeno_local,
)
from .errors import ModelRangeError, UnsupportedCaseError
from .protocol import make_model, optimize_time_analytic, optimize_time_closed_form


@dataclass(frozen=True)
class SweepCase:
    state_class: str
    geometry: str
    model_kind: str


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    intercept: float
    r_squared: float
    residual_std: float
    n_range: tuple
    points: tuple


@dataclass(frozen=True)
class FigureLine:
    label: str
    points: tuple


def log_grid(n_min=10, n_max=10_000, per_decade=20):
    """Log-spaced N grid (floats) with ``per_decade`` points per decade, ends included."""
    if not 0 < n_min < n_max:
        raise ModelRangeError(f"need 0 < n_min < n_max, got {n_min}, {n_max}")
    decades = math.log10(n_max / n_min)
    count = max(2, int(round(decades * per_decade)) + 1)
    return np.logspace(math.log10(n_min), math.log10(n_max), count)


def sweep_max_qfi(case, n_list, total_time, gamma):
    """``[(N, f_max, t_star), ...]`` maximizing the analytic total QFI over t."""
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ModelRangeError("N list must be strictly ascending")
    model = make_model(case.model_kind, gamma)
    out = []
    for n in n_list:
        rep = optimize_time_analytic(case.state_class, n, total_time, model, case.geometry)
        out.append((n, rep.f_max, rep.t_star))
    return out


TOTAL_BOUNDS = {
    "markovian_local": lambda n, T, g: bound_total_markovian_local(n, T, g),
    "markovian_collective": lambda n, T, g: bound_total_markovian_collective(T, g),
    "zeno_local": lambda n, T, g: bound_total_zeno_local(n, T, g)[0],
    "zeno_collective": lambda n, T, g: bound_total_zeno_collective(n, T, g)[0],
    "zeno_css_collective": lambda n, T, g: bound_total_zeno_css_collective(n, T, g)[0],
}


def sweep_bound(name, n_list, total_time, gamma):
    try:
        fn = TOTAL_BOUNDS[name]
    except KeyError:
        raise UnsupportedCaseError(f"unknown bound {name!r}") from None
    return [(n, fn(n, total_time, gamma)) for n in n_list]


def fit_exponent(points):
    """Least-squares line through ``(log N, log value)``; the slope is the exponent."""
    pts = [(float(n), float(v)) for n, v, *_ in points]
    if len(pts) < 3:
        raise ModelRangeError(f"need at least 3 points, got {len(pts)}")
    if any(n <= 0 or v <= 0 for n, v in pts):
        raise ModelRangeError("N and values must be positive for a log-log fit")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return ScalingFit(
        exponent=float(slope), intercept=float(intercept), r_squared=r2,
        residual_std=math.sqrt(ss_res / max(len(pts) - 2, 1)),
        n_range=(min(x_ for x_, _ in pts), max(x_ for x_, _ in pts)),
        points=tuple(pts),
    )


# (label suffix, state, geometry, model)
GHZ_DASHED = (
    ("zeno_local", "ghz", "local", "zeno"),
    ("markovian_local", "ghz", "local", "markovian"),
    ("zeno_collective", "ghz", "collective", "zeno"),
    ("markovian_collective", "ghz", "collective", "markovian"),
)


def figure_lines(n_list, total_time, gamma):
    """Resolution lines, bottom to top, followed by the GHZ dashed lines.

    Each prefactor follows the figure caption as printed: the Heisenberg
    line ``(T N)^-2`` carries no ``2 gamma / T`` factor, unlike the others.
    """
    if not (total_time > 0 and gamma > 0):
        raise ModelRangeError("T and gamma must be > 0")
    ns = [float(n) for n in n_list]
    pre = 2.0 * gamma / total_time
    lines = [
        FigureLine("heisenberg", tuple((n, (total_time * n) ** -2) for n in ns)),
        FigureLine("zeno", tuple((n, pre * n**-1.5) for n in ns)),
        FigureLine("shot_noise", tuple((n, pre / n) for n in ns)),
        FigureLine("constant", tuple((n, pre) for n in ns)),
    ]
    for suffix, state, geo, kind in GHZ_DASHED:
        pts = tuple(
            (n, 1.0 / optimize_time_closed_form(state, n, total_time, kind, gamma, geo).f_max)
            for n in ns
        )
        lines.append(FigureLine(f"ghz_dashed_{suffix}", pts))
    return lines


SOLID_ORDER = ("heisenberg", "zeno", "shot_noise", "constant")


def ordering_violations(lines):
    """N values (>= 2) where the solid lines are not strictly bottom-to-top."""
    by_label = {ln.label: dict(ln.points) for ln in lines}
    bad = []
    for n in by_label["heisenberg"]:
        if n < 2:
            continue
        vals = [by_label[k][n] for k in SOLID_ORDER]
        if not all(a < b for a, b in zip(vals, vals[1:])):
            bad.append(n)
    return bad
